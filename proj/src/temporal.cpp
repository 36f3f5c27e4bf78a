#include "resilience/temporal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

namespace resilience {

SliceSpec::SliceSpec(std::uint64_t w, ExternalId o) : width(w), origin(o) {
    if (width == 0) throw std::invalid_argument("slice width must be positive");
}

SliceLayout::SliceLayout(const SliceSpec& spec, ExternalId last_id) : spec_(spec), last_(last_id) {
    if (last_id < spec.origin) throw std::invalid_argument("slice origin lies beyond the last id");
    count_ = static_cast<std::size_t>((last_id - spec.origin) / spec.width) + 1;
}

std::size_t SliceLayout::slice_of(ExternalId id) const {
    if (id < spec_.origin || id > last_) throw std::out_of_range("id outside the sliced range");
    return static_cast<std::size_t>((id - spec_.origin) / spec_.width);
}

SliceBounds SliceLayout::bounds(std::size_t t) const {
    const ExternalId start = spec_.origin + static_cast<std::uint64_t>(t) * spec_.width;
    return {start, std::min(last_, start + spec_.width - 1)};
}

Baseline random_baseline(const SliceLayout& layout, std::size_t slice, BaselineMode mode) {
    if (slice >= layout.count()) throw std::out_of_range("slice index out of range");
    const auto b = layout.bounds(slice);
    // Offsets from the origin; the slice occupies [s, e) of [0, R).
    const double s = static_cast<double>(b.start - layout.spec().origin);
    const double e = static_cast<double>(b.end - layout.spec().origin + 1);
    const double R = static_cast<double>(layout.id_range());
    if (mode == BaselineMode::SliceCenter) {
        const double x = (s + e) / 2.0;
        return {x / 2.0, (R - x) / 2.0};
    }
    // Node uniform on the slice, partner uniform on [0, s) or [e, R).
    return {e / 2.0, (R - s) / 2.0};
}

std::vector<SliceStats> slice_stats(const Graph& graph, const SliceSpec& spec, BaselineMode mode) {
    const std::size_t n = graph.num_nodes();
    if (n == 0) throw std::invalid_argument("cannot slice an empty graph");
    const auto ids = graph.id_map();
    const SliceLayout layout(spec, ids.back());
    if (ids.front() < spec.origin) throw std::invalid_argument("slice origin exceeds the smallest id");

    const std::size_t T = layout.count();
    std::vector<SliceStats> out(T);
    std::vector<double> past_sum(T, 0.0);
    std::vector<double> future_sum(T, 0.0);
    for (std::size_t t = 0; t < T; ++t) {
        out[t] = SliceStats{t, layout.bounds(t), 0, 0, 0, 0, 0.0, std::nullopt, std::nullopt,
                            random_baseline(layout, t, mode)};
    }

    std::vector<std::size_t> slice(n);
    for (std::size_t v = 0; v < n; ++v) {
        slice[v] = layout.slice_of(ids[v]);
        ++out[slice[v]].node_count;
    }
    // Dense order equals id order, so u < v means u joined first.
    for (std::size_t u = 0; u < n; ++u) {
        for (NodeId v : graph.neighbors(static_cast<NodeId>(u))) {
            if (v <= u) continue;
            const auto su = slice[u];
            const auto sv = slice[v];
            if (su == sv) {
                ++out[su].internal_edges;
                continue;
            }
            const auto d = static_cast<double>(edge_distance(ids[u], ids[v]));
            ++out[su].future_edges;
            future_sum[su] += d;
            ++out[sv].past_edges;
            past_sum[sv] += d;
        }
    }

    for (std::size_t t = 0; t < T; ++t) {
        auto& s = out[t];
        if (s.node_count > 0) {
            s.internal_avg_degree = 2.0 * static_cast<double>(s.internal_edges) / static_cast<double>(s.node_count);
        }
        if (s.past_edges > 0) s.mean_past = past_sum[t] / static_cast<double>(s.past_edges);
        if (s.future_edges > 0) s.mean_future = future_sum[t] / static_cast<double>(s.future_edges);
    }
    return out;
}

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double confidence) {
    if (!(confidence > 0.0 && confidence < 1.0)) throw std::invalid_argument("confidence must lie in (0, 1)");
    if (successes > trials) throw std::invalid_argument("successes exceed trials");
    if (trials == 0) return {0.0, 1.0};
    const double z = boost::math::quantile(boost::math::normal(), 0.5 + confidence / 2.0);
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    // At p = 0 or 1 the bound touching p is exact in theory but not in floating point.
    return {std::clamp(center - half, 0.0, p), std::clamp(center + half, p, 1.0)};
}

Coreness median_coreness(const CorenessVector& coreness) {
    if (coreness.k_s.empty()) throw std::invalid_argument("median of an empty coreness vector");
    std::vector<Coreness> copy = coreness.k_s;
    const auto mid = copy.begin() + static_cast<std::ptrdiff_t>((copy.size() - 1) / 2);
    std::nth_element(copy.begin(), mid, copy.end());
    return *mid;
}

AtRiskSeries at_risk_series(const Graph& graph, const CorenessVector& coreness, const SliceSpec& spec,
                            std::optional<Coreness> threshold, double confidence) {
    const std::size_t n = graph.num_nodes();
    if (n == 0) throw std::invalid_argument("cannot slice an empty graph");
    if (coreness.size() != n) throw std::invalid_argument("coreness does not match graph");
    const auto ids = graph.id_map();
    if (ids.front() < spec.origin) throw std::invalid_argument("slice origin exceeds the smallest id");
    const SliceLayout layout(spec, ids.back());

    AtRiskSeries series{threshold.value_or(median_coreness(coreness)), confidence, {}};
    series.points.resize(layout.count());
    for (std::size_t t = 0; t < layout.count(); ++t) {
        series.points[t] = AtRiskPoint{t, layout.bounds(t), 0, 0, std::nullopt, {0.0, 1.0}};
    }
    for (std::size_t v = 0; v < n; ++v) {
        auto& p = series.points[layout.slice_of(ids[v])];
        ++p.node_count;
        if (coreness.k_s[v] < series.threshold) ++p.at_risk;
    }
    for (auto& p : series.points) {
        if (p.node_count == 0) continue;
        p.fraction = static_cast<double>(p.at_risk) / static_cast<double>(p.node_count);
        p.ci = wilson_interval(p.at_risk, p.node_count, confidence);
    }
    return series;
}

}  // namespace resilience
