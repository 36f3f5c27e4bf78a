#include "resilience/powerlaw.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

namespace resilience {

namespace {

constexpr std::size_t kPreferredTail = 10;
constexpr std::size_t kMaxDrawAttempts = 1000;

struct Distinct {
    std::vector<std::uint64_t> value;
    std::vector<std::uint64_t> count;
};

Distinct distinct_values(std::span<const std::uint64_t> sorted, std::size_t from = 0) {
    Distinct d;
    for (std::size_t i = from; i < sorted.size(); ++i) {
        if (d.value.empty() || d.value.back() != sorted[i]) {
            d.value.push_back(sorted[i]);
            d.count.push_back(0);
        }
        ++d.count.back();
    }
    return d;
}

double alpha_from_sums(std::size_t n_tail, double log_sum, std::uint64_t deg_min) {
    const double denom = log_sum - static_cast<double>(n_tail) * std::log(static_cast<double>(deg_min) - 0.5);
    return 1.0 + static_cast<double>(n_tail) / denom;
}

// KS distance over distinct tail values [first, end) of d. Between two
// consecutive observed values the empirical CDF is flat while the model CDF
// rises, so checking each value and the integer just below it is enough.
double ks_distinct(const Distinct& d, std::size_t first, std::size_t n_tail, std::uint64_t deg_min, double alpha) {
    double D = 0.0;
    double below = 0.0;
    std::uint64_t seen = 0;
    const double tail = static_cast<double>(n_tail);
    for (std::size_t i = first; i < d.value.size(); ++i) {
        const std::uint64_t v = d.value[i];
        D = std::max(D, std::abs(below - power_law_cdf(v - 1, deg_min, alpha)));
        seen += d.count[i];
        const double empirical = static_cast<double>(seen) / tail;
        D = std::max(D, std::abs(empirical - power_law_cdf(v, deg_min, alpha)));
        below = empirical;
    }
    return D;
}

TailFit scan_deg_min(std::span<const std::uint64_t> sorted) {
    const Distinct d = distinct_values(sorted);
    const std::size_t r = d.value.size();
    if (r < 2) throw PowerLawError(PowerLawError::Kind::NoCandidate, "sample needs at least two distinct values");

    std::vector<std::size_t> suffix_count(r + 1, 0);
    std::vector<double> suffix_log(r + 1, 0.0);
    for (std::size_t i = r; i-- > 0;) {
        suffix_count[i] = suffix_count[i + 1] + d.count[i];
        suffix_log[i] = suffix_log[i + 1] + static_cast<double>(d.count[i]) * std::log(static_cast<double>(d.value[i]));
    }

    // A candidate needs two distinct tail values; prefer tails of >= 10 points.
    const bool prefer_large = suffix_count[0] >= kPreferredTail;
    TailFit best{0, 0.0, std::numeric_limits<double>::infinity(), 0};
    for (std::size_t i = 0; i + 1 < r; ++i) {
        const std::size_t n_tail = suffix_count[i];
        if (prefer_large && n_tail < kPreferredTail) break;
        const double alpha = alpha_from_sums(n_tail, suffix_log[i], d.value[i]);
        const double D = ks_distinct(d, i, n_tail, d.value[i], alpha);
        if (D < best.D) best = {d.value[i], alpha, D, n_tail};
    }
    return best;
}

}  // namespace

DegreeSample::DegreeSample(std::vector<std::uint64_t> values) : values_(std::move(values)) {
    if (values_.empty()) throw std::invalid_argument("degree sample is empty");
    std::sort(values_.begin(), values_.end());
    if (values_.front() == 0) throw std::invalid_argument("degree sample values must be >= 1");
}

DegreeSample DegreeSample::from_graph(const Graph& graph) {
    std::vector<std::uint64_t> values;
    values.reserve(graph.num_nodes());
    for (std::size_t v = 0; v < graph.num_nodes(); ++v) {
        if (auto d = graph.degree(static_cast<NodeId>(v)); d > 0) values.push_back(d);
    }
    return DegreeSample(std::move(values));
}

DegreeSample DegreeSample::from_histogram(const std::map<std::uint64_t, std::uint64_t>& histogram) {
    std::vector<std::uint64_t> values;
    for (auto [degree, count] : histogram) {
        if (degree == 0) continue;
        values.insert(values.end(), count, degree);
    }
    return DegreeSample(std::move(values));
}

std::size_t DegreeSample::tail_size(std::uint64_t deg_min) const {
    return static_cast<std::size_t>(values_.end() - std::lower_bound(values_.begin(), values_.end(), deg_min));
}

double fit_alpha(const DegreeSample& sample, std::uint64_t deg_min) {
    if (deg_min == 0) throw std::invalid_argument("deg_min must be >= 1");
    auto values = sample.values();
    auto first = std::lower_bound(values.begin(), values.end(), deg_min);
    const auto n_tail = static_cast<std::size_t>(values.end() - first);
    if (n_tail < 2) {
        throw PowerLawError(PowerLawError::Kind::InsufficientTail,
                            "fewer than two values at or above deg_min " + std::to_string(deg_min));
    }
    if (*first == values.back()) {
        throw PowerLawError(PowerLawError::Kind::DegenerateTail,
                            "all tail values are equal; the exponent estimate diverges");
    }
    double log_sum = 0.0;
    for (auto it = first; it != values.end(); ++it) log_sum += std::log(static_cast<double>(*it));
    return alpha_from_sums(n_tail, log_sum, deg_min);
}

double power_law_cdf(std::uint64_t d, std::uint64_t deg_min, double alpha) {
    if (d < deg_min) return 0.0;
    const double ratio = (static_cast<double>(d) + 0.5) / (static_cast<double>(deg_min) - 0.5);
    return 1.0 - std::pow(ratio, 1.0 - alpha);
}

double ks_statistic(const DegreeSample& sample, std::uint64_t deg_min, double alpha) {
    if (deg_min == 0) throw std::invalid_argument("deg_min must be >= 1");
    auto values = sample.values();
    const auto from = static_cast<std::size_t>(std::lower_bound(values.begin(), values.end(), deg_min) - values.begin());
    const std::size_t n_tail = values.size() - from;
    if (n_tail == 0) throw PowerLawError(PowerLawError::Kind::EmptyTail, "no values at or above deg_min");
    return ks_distinct(distinct_values(values, from), 0, n_tail, deg_min, alpha);
}

TailFit select_deg_min(const DegreeSample& sample) {
    return scan_deg_min(sample.values());
}

std::uint64_t draw_power_law(Rng& rng, std::uint64_t deg_min, double alpha) {
    const double u = uniform01(rng);
    const double x = (static_cast<double>(deg_min) - 0.5) * std::pow(1.0 - u, -1.0 / (alpha - 1.0)) + 0.5;
    constexpr double cap = 0x1.0p62;
    if (!(x < cap)) return static_cast<std::uint64_t>(cap);
    return std::max(deg_min, static_cast<std::uint64_t>(std::floor(x)));
}

BootstrapResult bootstrap_pvalue(const DegreeSample& sample, const TailFit& fit, const BootstrapOptions& options) {
    if (options.trials == 0) throw std::invalid_argument("bootstrap needs at least one trial");
    auto values = sample.values();
    const std::size_t n = values.size();
    const auto body_end = static_cast<std::size_t>(
        std::lower_bound(values.begin(), values.end(), fit.deg_min) - values.begin());
    const double tail_probability = static_cast<double>(n - body_end) / static_cast<double>(n);

    BootstrapResult result{0.0, std::vector<double>(options.trials, 0.0), 0};
    std::vector<std::size_t> retries(options.trials, 0);

    auto run_trial = [&](std::size_t trial) {
        Rng rng(derive_seed(options.seed, "bootstrap", trial));
        std::vector<std::uint64_t> synthetic(n);
        for (std::size_t attempt = 0;; ++attempt) {
            if (attempt == kMaxDrawAttempts) {
                throw std::runtime_error("bootstrap could not draw a fittable synthetic sample");
            }
            for (auto& x : synthetic) {
                if (body_end == 0 || uniform01(rng) < tail_probability) {
                    x = draw_power_law(rng, fit.deg_min, fit.alpha);
                } else {
                    x = values[uniform_below(rng, body_end)];
                }
            }
            std::sort(synthetic.begin(), synthetic.end());
            try {
                result.synthetic_D[trial] = scan_deg_min(synthetic).D;
                retries[trial] = attempt;
                return;
            } catch (const PowerLawError&) {
            }
        }
    };

    const std::size_t threads = std::clamp<std::size_t>(options.threads, 1, options.trials);
    if (threads == 1) {
        for (std::size_t t = 0; t < options.trials; ++t) run_trial(t);
    } else {
        std::vector<std::exception_ptr> errors(threads);
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < threads; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t t = w; t < options.trials; t += threads) run_trial(t);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }

    std::size_t exceed = 0;
    for (std::size_t t = 0; t < options.trials; ++t) {
        exceed += result.synthetic_D[t] > fit.D ? 1 : 0;
        result.retries += retries[t];
    }
    result.p_value = static_cast<double>(exceed) / static_cast<double>(options.trials);
    return result;
}

TailCoverage tail_coverage(const DegreeSample& sample, const PowerLawFit& fit) {
    TailCoverage c{};
    c.range_decades = std::log10(static_cast<double>(sample.max()) / static_cast<double>(fit.deg_min_hat));
    c.tail_percent = 100.0 * static_cast<double>(fit.n_tail) / static_cast<double>(sample.size());
    c.narrow_range = c.range_decades < 1.0;
    c.small_tail = c.tail_percent < 1.0;
    return c;
}

PowerLawReport fit_power_law(const DegreeSample& sample, const BootstrapOptions& options) {
    const TailFit tail = select_deg_min(sample);
    auto boot = bootstrap_pvalue(sample, tail, options);
    PowerLawFit fit{tail.deg_min,
                    tail.alpha,
                    tail.n_tail,
                    tail.D,
                    boot.p_value,
                    std::log10(static_cast<double>(sample.max()) / static_cast<double>(tail.deg_min)),
                    static_cast<double>(tail.n_tail) / static_cast<double>(sample.size())};
    const auto coverage = tail_coverage(sample, fit);
    return {fit, coverage, std::move(boot)};
}

}  // namespace resilience
