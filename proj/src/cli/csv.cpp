#include "resilience/cli/csv.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace resilience::cli {

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", value);
    return buf;
}

std::string format_optional(const std::optional<double>& value) {
    return value ? format_number(*value) : std::string();
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::uint64_t seed, const std::vector<std::string>& header)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw std::runtime_error("cannot write '" + path.string() + "'");
    out_ << "# seed=" << seed << '\n';
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
}

void CsvWriter::close() {
    out_.flush();
    if (!out_) throw std::runtime_error("failed writing '" + path_.string() + "'");
    out_.close();
}

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw std::runtime_error("CSV column '" + name + "' not found");
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

}  // namespace

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    CsvTable table;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            auto eq = line.find('=');
            if (eq != std::string::npos) {
                auto key = line.substr(1, eq - 1);
                key.erase(0, key.find_first_not_of(' '));
                table.meta[key] = line.substr(eq + 1);
            }
            continue;
        }
        if (table.header.empty()) {
            table.header = split(line);
        } else {
            auto fields = split(line);
            if (fields.size() != table.header.size()) {
                throw std::runtime_error("'" + path.string() + "': row has " + std::to_string(fields.size()) +
                                         " fields, header has " + std::to_string(table.header.size()));
            }
            table.rows.push_back(std::move(fields));
        }
    }
    if (table.header.empty()) throw std::runtime_error("'" + path.string() + "' has no header row");
    return table;
}

}  // namespace resilience::cli
