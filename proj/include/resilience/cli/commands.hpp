#pragma once

// Batch commands behind the `resilience` executable. Each command reads its
// inputs, writes result files into RunConfig::out and returns a short
// human-readable summary; failures are reported by exception.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace resilience::cli {

struct RunConfig {
    std::vector<std::filesystem::path> inputs;
    std::filesystem::path out = ".";
    std::uint64_t seed = 0;
    std::string format = "pairs";

    // equilibrium
    std::int64_t c = 1;
    std::int64_t b = 1;

    // unravel
    std::uint32_t k0 = 3;
    double rate = 1.0;
    double t0 = 0.0;
    double horizon = 12.0;
    double step = 1.0;
    bool strict = false;  // survivors are k_s > K instead of k_s >= K

    // fit
    std::filesystem::path observed;
    std::string ref_a;  // "YYYY-MM-DD:K"
    std::string ref_b;
    std::uint32_t reference_k = 1;  // 100% = number of nodes with k_s >= reference_k

    // plfit
    std::size_t trials = 100;
    std::size_t threads = 1;
    bool per_trial = false;

    // timeslice / atrisk
    std::uint64_t width = 0;
    std::optional<std::uint64_t> origin;
    std::string baseline = "slice";
    std::optional<std::uint32_t> threshold;
    double confidence = 0.99;

    // resilience
    std::vector<double> survival{0.2};

    // kcore
    std::string bins = "log";

    // dataset names, one per input; defaults to the input file stem
    std::vector<std::string> names;
};

std::string cmd_ingest(const RunConfig& config);
std::string cmd_kcore(const RunConfig& config);
std::string cmd_resilience(const RunConfig& config);
std::string cmd_equilibrium(const RunConfig& config);
std::string cmd_unravel(const RunConfig& config);
std::string cmd_fit(const RunConfig& config);
std::string cmd_plfit(const RunConfig& config);
std::string cmd_timeslice(const RunConfig& config);
std::string cmd_atrisk(const RunConfig& config);
std::string cmd_report(const RunConfig& config);

// Days since 1970-01-01 for an ISO-8601 date ("YYYY-MM-DD", time part ignored).
std::int64_t parse_iso_date(const std::string& text);
std::string format_iso_date(std::int64_t days);

// Artifacts cmd_report requires in its input directory.
const std::vector<std::string>& report_artifacts();

}  // namespace resilience::cli
