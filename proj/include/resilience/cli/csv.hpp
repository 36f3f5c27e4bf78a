#pragma once

// Minimal CSV I/O for result files: optional "# key=value" comment lines,
// one header row, comma-separated fields without quoting, '\n' endings.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace resilience::cli {

std::string format_number(double value);
std::string format_optional(const std::optional<double>& value);

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, std::uint64_t seed, const std::vector<std::string>& header);

    template <typename... Fields>
    void row(const Fields&... fields) {
        std::size_t i = 0;
        ((out_ << (i++ ? "," : "") << to_field(fields)), ...);
        out_ << '\n';
    }

    void close();

private:
    static std::string to_field(const std::string& s) { return s; }
    static std::string to_field(const char* s) { return s; }
    static std::string to_field(double v) { return format_number(v); }
    static std::string to_field(const std::optional<double>& v) { return format_optional(v); }
    static std::string to_field(bool v) { return v ? "true" : "false"; }
    template <typename T>
    static std::string to_field(T v) requires std::is_integral_v<T> { return std::to_string(v); }

    std::filesystem::path path_;
    std::ofstream out_;
};

struct CsvTable {
    std::map<std::string, std::string> meta;  // from "# key=value" lines
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

}  // namespace resilience::cli
