#include "resilience/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace resilience {

namespace {

// Guards floor() against values such as 5.9999999 produced by rate * dt.
constexpr double kFloorSlack = 1e-9;

}  // namespace

Environment::Environment(std::int64_t c, std::int64_t b) : cost(c), benefit(b) {
    if (c <= 0) throw std::invalid_argument("cost must be a positive integer");
    if (b <= 0) throw std::invalid_argument("benefit per friend must be a positive integer");
}

EquilibriumResult equilibrium_network(const Graph& graph, const CorenessVector& coreness, const Environment& env) {
    if (coreness.size() != graph.num_nodes()) throw std::invalid_argument("coreness does not match graph");
    EquilibriumResult result;
    result.K = env.threshold();

    std::vector<std::uint8_t> member(graph.num_nodes(), 0);
    for (std::size_t v = 0; v < graph.num_nodes(); ++v) {
        if (coreness.k_s[v] >= result.K) {
            member[v] = 1;
            result.members.push_back(static_cast<NodeId>(v));
        }
    }
    result.utilities.reserve(result.members.size());
    for (NodeId v : result.members) {
        std::int64_t inside = 0;
        for (NodeId u : graph.neighbors(v)) inside += member[u];
        result.utilities.push_back(env.benefit * inside - env.cost);
    }
    return result;
}

EquilibriumReport verify_equilibrium(const Graph& graph, const EquilibriumResult& result, const Environment& env) {
    std::vector<std::uint8_t> member(graph.num_nodes(), 0);
    for (NodeId v : result.members) member.at(v) = 1;

    EquilibriumReport report;
    for (std::size_t v = 0; v < graph.num_nodes(); ++v) {
        std::int64_t inside = 0;
        for (NodeId u : graph.neighbors(static_cast<NodeId>(v))) inside += member[u];
        const std::int64_t benefit = env.benefit * inside;
        if (member[v] && benefit - env.cost <= 0) {
            report.unhappy_members.push_back(static_cast<NodeId>(v));
        } else if (!member[v] && benefit > env.cost) {
            report.would_rejoin.push_back(static_cast<NodeId>(v));
        }
    }
    return report;
}

UnravelSchedule::UnravelSchedule(Coreness k0, double r, double start) : K0(k0), rate(r), t0(start) {
    if (!(rate > 0.0) || !std::isfinite(rate)) throw std::invalid_argument("unravel rate must be positive");
}

Coreness UnravelSchedule::threshold_at(double t) const {
    if (t <= t0) return K0;
    const double steps = std::floor(rate * (t - t0) + kFloorSlack);
    return K0 + static_cast<Coreness>(steps);
}

std::uint64_t surviving_count(const CorenessCCDF& ccdf, Coreness K, Survival survival) {
    const std::uint64_t index = static_cast<std::uint64_t>(K) + (survival == Survival::Above ? 1 : 0);
    return ccdf.count_at_least(index);
}

std::vector<UnravelPoint> unravel(const CorenessCCDF& ccdf, const UnravelSchedule& schedule, double horizon,
                                  double step, Survival survival) {
    if (!(horizon >= 0.0)) throw std::invalid_argument("horizon must be non-negative");
    if (!(step > 0.0)) throw std::invalid_argument("step must be positive");
    std::vector<UnravelPoint> series;
    const auto steps = static_cast<std::size_t>(std::floor(horizon / step + kFloorSlack));
    series.reserve(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i) {
        const double t = schedule.t0 + static_cast<double>(i) * step;
        const Coreness K = schedule.threshold_at(t);
        const auto remaining = surviving_count(ccdf, K, survival);
        const double fraction =
            ccdf.total == 0 ? 0.0 : static_cast<double>(remaining) / static_cast<double>(ccdf.total);
        series.push_back({t, K, remaining, fraction});
    }
    return series;
}

UnravelSchedule calibrate_schedule(const ReferencePoint& a, const ReferencePoint& b) {
    if (!(b.t > a.t)) throw std::invalid_argument("reference points must be in increasing time order");
    if (b.K <= a.K) throw std::invalid_argument("the later reference threshold must exceed the earlier one");
    const double rate = static_cast<double>(b.K - a.K) / (b.t - a.t);
    return UnravelSchedule(a.K, rate, a.t);
}

FitQuality fit_quality(const std::vector<TimePoint>& predicted, const std::vector<TimePoint>& observed,
                       double max_gap) {
    std::vector<TimePoint> pred = predicted;
    std::sort(pred.begin(), pred.end(), [](const TimePoint& x, const TimePoint& y) { return x.t < y.t; });

    FitQuality out{};
    for (const auto& obs : observed) {
        if (pred.empty()) break;
        auto it = std::lower_bound(pred.begin(), pred.end(), obs.t,
                                   [](const TimePoint& p, double t) { return p.t < t; });
        const TimePoint* best = nullptr;
        if (it != pred.end()) best = &*it;
        if (it != pred.begin()) {
            const TimePoint* before = &*(it - 1);
            if (!best || obs.t - before->t <= best->t - obs.t) best = before;
        }
        if (std::abs(best->t - obs.t) > max_gap) continue;
        out.aligned.push_back({obs.t, obs.value, best->value, obs.value - best->value});
    }
    if (out.aligned.size() < 2) throw std::invalid_argument("fewer than two observed points align with the prediction");

    double mean = 0.0;
    for (const auto& p : out.aligned) mean += p.observed;
    mean /= static_cast<double>(out.aligned.size());
    double ss_tot = 0.0;
    double ss_res = 0.0;
    for (const auto& p : out.aligned) {
        ss_tot += (p.observed - mean) * (p.observed - mean);
        ss_res += p.residual * p.residual;
    }
    if (ss_tot == 0.0) throw std::invalid_argument("observed series has zero variance");
    out.r_squared = 1.0 - ss_res / ss_tot;
    return out;
}

std::vector<TimePoint> to_percent(const std::vector<UnravelPoint>& series, std::uint64_t reference) {
    if (reference == 0) throw std::invalid_argument("reference population is empty");
    std::vector<TimePoint> out;
    out.reserve(series.size());
    for (const auto& p : series) {
        out.push_back({p.t, 100.0 * static_cast<double>(p.remaining) / static_cast<double>(reference)});
    }
    return out;
}

}  // namespace resilience
