#include <charconv>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "resilience/cli/commands.hpp"
#include "resilience/cli/csv.hpp"

namespace resilience::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kSchemaVersion = 1;

ordered_json cell(const std::string& text) {
    if (text.empty()) return nullptr;
    if (text == "true") return true;
    if (text == "false") return false;
    const char* first = text.data();
    const char* last = first + text.size();
    std::int64_t integer = 0;
    if (auto [p, ec] = std::from_chars(first, last, integer); ec == std::errc{} && p == last) return integer;
    double real = 0;
    if (auto [p, ec] = std::from_chars(first, last, real); ec == std::errc{} && p == last) return real;
    return text;
}

ordered_json rows(const CsvTable& table) {
    auto out = ordered_json::array();
    for (const auto& row : table.rows) {
        ordered_json obj = ordered_json::object();
        for (std::size_t i = 0; i < table.header.size(); ++i) obj[table.header[i]] = cell(row[i]);
        out.push_back(std::move(obj));
    }
    return out;
}

}  // namespace

const std::vector<std::string>& report_artifacts() {
    static const std::vector<std::string> names{
        "summary.csv", "plfit.csv", "resilience_summary.csv", "resilience.csv", "catastrophic.csv",
        "atrisk.csv",  "fit.csv",   "fit_summary.csv",
    };
    return names;
}

std::string cmd_report(const RunConfig& config) {
    const fs::path dir = config.inputs.empty() ? config.out : config.inputs.front();
    std::vector<std::string> missing;
    for (const auto& name : report_artifacts()) {
        if (!fs::is_regular_file(dir / name)) missing.push_back(name);
    }
    if (!missing.empty()) {
        std::string msg = "missing artifacts in '" + dir.string() + "':";
        for (const auto& m : missing) msg += " " + m;
        throw std::runtime_error(msg);
    }

    std::map<std::string, CsvTable> tables;
    for (const auto& name : report_artifacts()) tables.emplace(name, read_csv(dir / name));

    ordered_json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["seed"] = config.seed;
    auto& seeds = doc["artifact_seeds"] = ordered_json::object();
    for (const auto& [name, table] : tables) {
        auto it = table.meta.find("seed");
        seeds[name] = it == table.meta.end() ? ordered_json(nullptr) : cell(it->second);
    }
    doc["summary"] = rows(tables.at("summary.csv"));
    doc["power_law"] = rows(tables.at("plfit.csv"));
    doc["resilience"] = {
        {"summary", rows(tables.at("resilience_summary.csv"))},
        {"ccdf", rows(tables.at("resilience.csv"))},
        {"catastrophic", rows(tables.at("catastrophic.csv"))},
    };
    doc["at_risk"] = rows(tables.at("atrisk.csv"));
    auto fit_summary = rows(tables.at("fit_summary.csv"));
    if (fit_summary.size() != 1) throw std::runtime_error("fit_summary.csv must hold exactly one row");
    doc["unravel_fit"] = {
        {"summary", fit_summary.front()},
        {"points", rows(tables.at("fit.csv"))},
    };

    fs::create_directories(config.out);
    const auto path = config.out / "report.json";
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << doc.dump(2) << '\n';
    out.flush();
    if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
    return "wrote " + path.string();
}

}  // namespace resilience::cli
