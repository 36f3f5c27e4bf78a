#pragma once

// Id-ordered time slicing. External ids are assumed to grow with signup
// order, so an id range stands in for a period of time.

#include <cstdint>
#include <optional>
#include <vector>

#include "resilience/graph_store.hpp"
#include "resilience/kcore.hpp"

namespace resilience {

struct SliceSpec {
    std::uint64_t width;
    ExternalId origin;

    SliceSpec(std::uint64_t width, ExternalId origin = 0);
};

inline std::uint64_t edge_distance(ExternalId a, ExternalId b) noexcept {
    return a > b ? a - b : b - a;
}

// How the random-linking expectation of P(t) and F(t) is computed.
//   SliceCenter: a node at offset x links to a uniformly random earlier id,
//     so P = x / 2 and F = (R - x) / 2 with x the slice center.
//   SliceConditioned: past and future partners are restricted to earlier
//     and later slices, which is what E_p and E_f actually contain.
enum class BaselineMode { SliceCenter, SliceConditioned };

struct Baseline {
    double past;
    double future;
};

struct SliceBounds {
    ExternalId start;  // inclusive
    ExternalId end;    // inclusive
};

class SliceLayout {
public:
    // Covers origin .. last_id; the final slice is cut short at last_id.
    SliceLayout(const SliceSpec& spec, ExternalId last_id);

    std::size_t count() const noexcept { return count_; }
    std::size_t slice_of(ExternalId id) const;
    SliceBounds bounds(std::size_t t) const;
    // Number of ids covered, last_id - origin + 1.
    std::uint64_t id_range() const noexcept { return last_ - spec_.origin + 1; }
    const SliceSpec& spec() const noexcept { return spec_; }

private:
    SliceSpec spec_;
    ExternalId last_;
    std::size_t count_;
};

Baseline random_baseline(const SliceLayout& layout, std::size_t slice, BaselineMode mode = BaselineMode::SliceConditioned);

struct SliceStats {
    std::size_t t;
    SliceBounds bounds;
    std::uint64_t node_count;
    std::uint64_t internal_edges;
    std::uint64_t past_edges;
    std::uint64_t future_edges;
    double internal_avg_degree;            // 2 |E_in| / |N|, 0 for an empty slice
    std::optional<double> mean_past;       // P(t)
    std::optional<double> mean_future;     // F(t)
    Baseline baseline;
};

// Slices start at spec.origin, which must not exceed the smallest id.
std::vector<SliceStats> slice_stats(const Graph& graph, const SliceSpec& spec,
                                    BaselineMode mode = BaselineMode::SliceConditioned);

struct WilsonInterval {
    double lower;
    double upper;
};

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double confidence);

struct AtRiskPoint {
    std::size_t t;
    SliceBounds bounds;
    std::uint64_t node_count;
    std::uint64_t at_risk;
    std::optional<double> fraction;  // missing for an empty slice
    WilsonInterval ci;
};

struct AtRiskSeries {
    Coreness threshold;
    double confidence;
    std::vector<AtRiskPoint> points;
};

// Lower median of the coreness values.
Coreness median_coreness(const CorenessVector& coreness);

// At risk means k_s < threshold; the threshold defaults to the median coreness.
AtRiskSeries at_risk_series(const Graph& graph, const CorenessVector& coreness, const SliceSpec& spec,
                            std::optional<Coreness> threshold = std::nullopt, double confidence = 0.99);

}  // namespace resilience
