#pragma once

// Power-law hypothesis test for degree distributions.
//
// Tail model for d >= deg_min, using the continuous approximation of the
// discrete law (each integer d stands for the interval [d - 1/2, d + 1/2)):
//
//   alpha_hat = 1 + n_tail / sum ln(d_i / (deg_min - 1/2))
//   F(d)      = 1 - ((d + 1/2) / (deg_min - 1/2))^(1 - alpha)
//
// The p-value comes from a semiparametric bootstrap: synthetic samples keep
// the empirical body below deg_min and draw the tail from the fitted law,
// and every synthetic sample goes through the same deg_min selection.

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "resilience/graph_store.hpp"
#include "resilience/random.hpp"

namespace resilience {

class DegreeSample {
public:
    explicit DegreeSample(std::vector<std::uint64_t> values);

    // Node degrees with isolated nodes left out.
    static DegreeSample from_graph(const Graph& graph);
    // degree -> number of nodes; degree 0 is ignored.
    static DegreeSample from_histogram(const std::map<std::uint64_t, std::uint64_t>& histogram);

    std::span<const std::uint64_t> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    std::uint64_t max() const noexcept { return values_.back(); }
    std::size_t tail_size(std::uint64_t deg_min) const;

private:
    std::vector<std::uint64_t> values_;  // sorted ascending
};

class PowerLawError : public std::runtime_error {
public:
    enum class Kind { EmptyTail, InsufficientTail, DegenerateTail, NoCandidate };
    PowerLawError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

double fit_alpha(const DegreeSample& sample, std::uint64_t deg_min);

double power_law_cdf(std::uint64_t d, std::uint64_t deg_min, double alpha);

double ks_statistic(const DegreeSample& sample, std::uint64_t deg_min, double alpha);

struct TailFit {
    std::uint64_t deg_min;
    double alpha;
    double D;
    std::size_t n_tail;
};

// Minimum-D scan over the distinct sample values.
TailFit select_deg_min(const DegreeSample& sample);

// Integer draw from the fitted tail, >= deg_min.
std::uint64_t draw_power_law(Rng& rng, std::uint64_t deg_min, double alpha);

struct BootstrapOptions {
    std::size_t trials = 100;
    std::uint64_t seed = 0;
    std::size_t threads = 1;
};

struct BootstrapResult {
    double p_value;
    std::vector<double> synthetic_D;  // indexed by trial
    std::size_t retries = 0;          // synthetic samples that could not be fitted and were redrawn

    bool excessive_retries() const noexcept { return retries * 10 > synthetic_D.size(); }
};

BootstrapResult bootstrap_pvalue(const DegreeSample& sample, const TailFit& fit, const BootstrapOptions& options);

struct PowerLawFit {
    std::uint64_t deg_min_hat;
    double alpha_hat;
    std::size_t n_tail;
    double D;
    double p_value;
    double range_decades;  // log10(deg_max / deg_min_hat)
    double tail_fraction;  // n_tail / n
};

struct TailCoverage {
    double range_decades;
    double tail_percent;
    bool narrow_range;  // less than one decade between deg_min and deg_max
    bool small_tail;    // tail holds less than 1% of the sample

    bool flagged() const noexcept { return narrow_range || small_tail; }
};

TailCoverage tail_coverage(const DegreeSample& sample, const PowerLawFit& fit);

struct PowerLawReport {
    PowerLawFit fit;
    TailCoverage coverage;
    BootstrapResult bootstrap;
};

PowerLawReport fit_power_law(const DegreeSample& sample, const BootstrapOptions& options);

}  // namespace resilience
