#pragma once

// Rational-user model: users pay a cost c per period and receive b per
// friend still present. They stay while b * friends - c > 0, so the stable
// network is the K-core with K = floor(c / b) + 1.

#include <cstdint>
#include <optional>
#include <vector>

#include "resilience/graph_store.hpp"
#include "resilience/kcore.hpp"

namespace resilience {

struct Environment {
    std::int64_t cost;
    std::int64_t benefit;

    Environment(std::int64_t c, std::int64_t b);
    // Smallest integer number of friends whose benefit strictly exceeds cost.
    Coreness threshold() const noexcept { return static_cast<Coreness>(cost / benefit + 1); }
};

struct EquilibriumResult {
    Coreness K = 0;
    std::vector<NodeId> members;          // sorted
    std::vector<std::int64_t> utilities;  // aligned with members
};

EquilibriumResult equilibrium_network(const Graph& graph, const CorenessVector& coreness, const Environment& env);

struct EquilibriumReport {
    std::vector<NodeId> unhappy_members;  // members with U_i <= 0
    std::vector<NodeId> would_rejoin;     // outsiders whose benefit would exceed the cost

    bool passed() const noexcept { return unhappy_members.empty() && would_rejoin.empty(); }
};

EquilibriumReport verify_equilibrium(const Graph& graph, const EquilibriumResult& result, const Environment& env);

// Which population survives a threshold K: k_s >= K, or k_s > K.
enum class Survival { AtLeast, Above };

struct UnravelSchedule {
    Coreness K0;
    double rate;  // threshold increase per unit time
    double t0;

    UnravelSchedule(Coreness k0, double rate, double t0 = 0.0);
    Coreness threshold_at(double t) const;
};

struct UnravelPoint {
    double t;
    Coreness K;
    std::uint64_t remaining;
    double fraction;
};

// Samples t0, t0 + step, ... up to t0 + horizon (inclusive).
std::vector<UnravelPoint> unravel(const CorenessCCDF& ccdf, const UnravelSchedule& schedule, double horizon,
                                  double step, Survival survival = Survival::AtLeast);

std::uint64_t surviving_count(const CorenessCCDF& ccdf, Coreness K, Survival survival);

struct ReferencePoint {
    double t;
    Coreness K;
};

UnravelSchedule calibrate_schedule(const ReferencePoint& a, const ReferencePoint& b);

struct TimePoint {
    double t;
    double value;
};

struct AlignedPoint {
    double t;
    double observed;
    double predicted;
    double residual;  // observed - predicted
};

struct FitQuality {
    double r_squared;
    std::vector<AlignedPoint> aligned;
};

// Each observed point is matched with the nearest predicted timestamp; points
// farther than max_gap from any prediction are dropped.
FitQuality fit_quality(const std::vector<TimePoint>& predicted, const std::vector<TimePoint>& observed,
                       double max_gap);

// Expresses remaining counts as a percentage of the reference population.
std::vector<TimePoint> to_percent(const std::vector<UnravelPoint>& series, std::uint64_t reference);

}  // namespace resilience
