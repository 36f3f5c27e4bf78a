#include "resilience/kcore.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>

namespace resilience {

std::size_t SubgraphView::internal_degree(NodeId v) const {
    std::size_t count = 0;
    for (NodeId u : graph_.neighbors(v)) count += alive_[u];
    return count;
}

std::int64_t DegreeProperty::evaluate(NodeId node, const SubgraphView& view) const {
    return static_cast<std::int64_t>(view.internal_degree(node));
}

ScaledDegreeProperty::ScaledDegreeProperty(std::int64_t per_friend) : per_friend_(per_friend) {
    if (per_friend <= 0) throw std::invalid_argument("per-friend benefit must be positive");
}

std::int64_t ScaledDegreeProperty::evaluate(NodeId node, const SubgraphView& view) const {
    return per_friend_ * static_cast<std::int64_t>(view.internal_degree(node));
}

WeightedDegreeProperty::WeightedDegreeProperty(std::vector<std::int64_t> weights) : weights_(std::move(weights)) {
    for (auto w : weights_) {
        if (w < 0) throw std::invalid_argument("link weights must be non-negative");
    }
}

std::int64_t WeightedDegreeProperty::evaluate(NodeId node, const SubgraphView& view) const {
    const Graph& g = view.graph();
    if (weights_.size() != g.adjacency().size()) {
        throw std::invalid_argument("weight array does not match graph adjacency");
    }
    const auto begin = g.offsets()[node];
    auto adj = g.neighbors(node);
    std::int64_t total = 0;
    for (std::size_t j = 0; j < adj.size(); ++j) {
        if (view.contains(adj[j])) total += weights_[begin + j];
    }
    return total;
}

// Batagelj-Zaversnik bucket peeling, O(n + m).
CorenessVector decompose(const Graph& graph) {
    const std::size_t n = graph.num_nodes();
    CorenessVector result;
    result.k_s.assign(n, 0);
    if (n == 0) return result;

    std::vector<Coreness> deg(n);
    Coreness max_deg = 0;
    for (std::size_t v = 0; v < n; ++v) {
        deg[v] = static_cast<Coreness>(graph.degree(static_cast<NodeId>(v)));
        max_deg = std::max(max_deg, deg[v]);
    }

    // bin[d] = first position in vert of the nodes with current degree d
    // NodeId-sized positions keep the index arrays small on large graphs.
    std::vector<NodeId> bin(max_deg + 1, 0);
    for (auto d : deg) ++bin[d];
    NodeId start = 0;
    for (auto& b : bin) {
        const auto count = b;
        b = start;
        start += count;
    }
    std::vector<NodeId> vert(n);
    std::vector<NodeId> pos(n);
    for (std::size_t v = 0; v < n; ++v) {
        pos[v] = bin[deg[v]]++;
        vert[pos[v]] = static_cast<NodeId>(v);
    }
    for (std::size_t d = max_deg; d > 0; --d) bin[d] = bin[d - 1];
    bin[0] = 0;

    for (std::size_t i = 0; i < n; ++i) {
        const NodeId v = vert[i];
        for (NodeId u : graph.neighbors(v)) {
            if (deg[u] > deg[v]) {
                const Coreness du = deg[u];
                const NodeId pu = pos[u];
                const NodeId pw = bin[du];
                const NodeId w = vert[pw];
                if (u != w) {
                    pos[u] = pw;
                    vert[pu] = w;
                    pos[w] = pu;
                    vert[pw] = u;
                }
                ++bin[du];
                --deg[u];
            }
        }
    }

    result.k_s = std::move(deg);
    result.k_max = *std::max_element(result.k_s.begin(), result.k_s.end());
    return result;
}

namespace {

void require_monotone(const PropertyFunction& prop) {
    if (!prop.monotone()) {
        throw NonMonotonePropertyError("property '" + prop.name() + "' is not declared monotone");
    }
}

[[noreturn]] void report_increase(const PropertyFunction& prop, NodeId v, std::int64_t before, std::int64_t after) {
    throw NonMonotonePropertyError("property '" + prop.name() + "' increased for node " + std::to_string(v) +
                                   " from " + std::to_string(before) + " to " + std::to_string(after) +
                                   " after a removal");
}

}  // namespace

// Worklist peeling. Only neighbors of a removed node are re-scored, so a
// property may depend on the membership of the node's neighbors only.
std::vector<NodeId> decompose_generalized(const Graph& graph, const PropertyFunction& prop, std::int64_t k) {
    require_monotone(prop);
    const std::size_t n = graph.num_nodes();
    std::vector<std::uint8_t> alive(n, 1);
    std::vector<std::uint8_t> queued(n, 0);
    std::vector<std::int64_t> score(n);
    const SubgraphView view(graph, alive);

    std::deque<NodeId> work;
    for (std::size_t v = 0; v < n; ++v) {
        score[v] = prop.evaluate(static_cast<NodeId>(v), view);
        if (score[v] < k) {
            queued[v] = 1;
            work.push_back(static_cast<NodeId>(v));
        }
    }

    while (!work.empty()) {
        const NodeId v = work.front();
        work.pop_front();
        const auto now = prop.evaluate(v, view);
        if (now > score[v]) report_increase(prop, v, score[v], now);
        alive[v] = 0;
        for (NodeId u : graph.neighbors(v)) {
            if (!alive[u]) continue;
            const auto s = prop.evaluate(u, view);
            if (s > score[u]) report_increase(prop, u, score[u], s);
            score[u] = s;
            if (s < k && !queued[u]) {
                queued[u] = 1;
                work.push_back(u);
            }
        }
    }

    std::vector<NodeId> members;
    for (std::size_t v = 0; v < n; ++v) {
        if (alive[v]) {
            members.push_back(static_cast<NodeId>(v));
        } else if (prop.evaluate(static_cast<NodeId>(v), view) >= k) {
            throw NonMonotonePropertyError("property '" + prop.name() + "' would readmit removed node " +
                                           std::to_string(v));
        }
    }
    return members;
}

// Min-score peeling with a running maximum; valid for monotone properties.
CorenessVector generalized_coreness(const Graph& graph, const PropertyFunction& prop) {
    require_monotone(prop);
    const std::size_t n = graph.num_nodes();
    std::vector<std::uint8_t> alive(n, 1);
    std::vector<std::int64_t> score(n);
    const SubgraphView view(graph, alive);

    using Entry = std::pair<std::int64_t, NodeId>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    for (std::size_t v = 0; v < n; ++v) {
        score[v] = prop.evaluate(static_cast<NodeId>(v), view);
        if (score[v] < 0 || score[v] > std::numeric_limits<Coreness>::max()) {
            throw std::invalid_argument("property '" + prop.name() + "' produced a score outside the coreness range");
        }
        heap.emplace(score[v], static_cast<NodeId>(v));
    }

    CorenessVector result;
    result.k_s.assign(n, 0);
    std::int64_t level = 0;
    while (!heap.empty()) {
        const auto [s, v] = heap.top();
        heap.pop();
        if (!alive[v] || s != score[v]) continue;
        alive[v] = 0;
        level = std::max(level, s);
        result.k_s[v] = static_cast<Coreness>(level);
        for (NodeId u : graph.neighbors(v)) {
            if (!alive[u]) continue;
            const auto updated = prop.evaluate(u, view);
            if (updated > score[u]) report_increase(prop, u, score[u], updated);
            if (updated != score[u]) {
                score[u] = std::max<std::int64_t>(updated, 0);
                heap.emplace(score[u], u);
            }
        }
    }
    result.k_max = n == 0 ? 0 : *std::max_element(result.k_s.begin(), result.k_s.end());
    return result;
}

std::vector<std::uint64_t> shell_sizes(const CorenessVector& coreness) {
    std::vector<std::uint64_t> sizes(static_cast<std::size_t>(coreness.k_max) + 1, 0);
    for (auto k : coreness.k_s) ++sizes[k];
    return sizes;
}

CorenessCCDF ccdf(const CorenessVector& coreness) {
    CorenessCCDF out;
    out.total = coreness.size();
    out.counts = shell_sizes(coreness);
    for (std::size_t K = out.counts.size() - 1; K > 0; --K) out.counts[K - 1] += out.counts[K];
    out.fractions.resize(out.counts.size(), 0.0);
    if (out.total > 0) {
        for (std::size_t K = 0; K < out.counts.size(); ++K) {
            out.fractions[K] = static_cast<double>(out.counts[K]) / static_cast<double>(out.total);
        }
    }
    return out;
}

Coreness catastrophic_K(const CorenessCCDF& ccdf, double survival) {
    if (!(survival > 0.0 && survival < 1.0)) {
        throw std::invalid_argument("survival level must lie strictly between 0 and 1");
    }
    for (std::size_t K = 0; K < ccdf.fractions.size(); ++K) {
        if (ccdf.fractions[K] <= survival) return static_cast<Coreness>(K);
    }
    return static_cast<Coreness>(ccdf.fractions.size());
}

DegreeBins::DegreeBins(std::vector<std::size_t> edges) : edges_(std::move(edges)) {
    if (edges_.size() < 2) throw std::invalid_argument("degree bins need at least two edges");
    for (std::size_t i = 1; i < edges_.size(); ++i) {
        if (edges_[i] <= edges_[i - 1]) throw std::invalid_argument("degree bin edges must strictly increase");
    }
}

DegreeBins DegreeBins::exact(std::size_t max_degree) {
    std::vector<std::size_t> edges(max_degree + 2);
    for (std::size_t i = 0; i < edges.size(); ++i) edges[i] = i;
    return DegreeBins(std::move(edges));
}

DegreeBins DegreeBins::linear(std::size_t width, std::size_t max_degree) {
    if (width == 0) throw std::invalid_argument("bin width must be positive");
    std::vector<std::size_t> edges{0};
    while (edges.back() <= max_degree) edges.push_back(edges.back() + width);
    return DegreeBins(std::move(edges));
}

DegreeBins DegreeBins::logarithmic(std::size_t per_decade, std::size_t max_degree) {
    if (per_decade == 0) throw std::invalid_argument("bins per decade must be positive");
    std::vector<std::size_t> edges{0, 1};
    for (std::size_t i = 1; edges.back() <= max_degree; ++i) {
        const auto next = static_cast<std::size_t>(std::ceil(std::pow(10.0, static_cast<double>(i) / per_decade)));
        edges.push_back(std::max(next, edges.back() + 1));
    }
    return DegreeBins(std::move(edges));
}

double DegreeBins::middle(std::size_t bin) const {
    return (static_cast<double>(lower(bin)) + static_cast<double>(upper(bin) - 1)) / 2.0;
}

std::optional<std::size_t> DegreeBins::find(std::size_t degree) const {
    if (degree < edges_.front() || degree >= edges_.back()) return std::nullopt;
    auto it = std::upper_bound(edges_.begin(), edges_.end(), degree);
    return static_cast<std::size_t>(it - edges_.begin()) - 1;
}

namespace {

double quantile_sorted(const std::vector<Coreness>& sorted, double q) {
    const double h = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (static_cast<double>(sorted[hi]) - sorted[lo]);
}

}  // namespace

std::vector<DegreeBinStats> coreness_by_degree(const Graph& graph, const CorenessVector& coreness,
                                               const DegreeBins& bins) {
    if (coreness.size() != graph.num_nodes()) throw std::invalid_argument("coreness does not match graph");
    std::vector<std::vector<Coreness>> grouped(bins.size());
    for (std::size_t v = 0; v < graph.num_nodes(); ++v) {
        const auto d = graph.degree(static_cast<NodeId>(v));
        auto bin = bins.find(d);
        if (!bin) throw std::invalid_argument("degree " + std::to_string(d) + " is not covered by the bins");
        grouped[*bin].push_back(coreness.k_s[v]);
    }

    std::vector<DegreeBinStats> out;
    out.reserve(bins.size());
    for (std::size_t b = 0; b < bins.size(); ++b) {
        auto& values = grouped[b];
        DegreeBinStats row{bins.lower(b), bins.upper(b), bins.middle(b), values.size(), std::nullopt};
        if (!values.empty()) {
            std::sort(values.begin(), values.end());
            double sum = 0;
            for (auto k : values) sum += k;
            row.stats = CorenessSummary{sum / static_cast<double>(values.size()),
                                        values.front(),
                                        quantile_sorted(values, 0.25),
                                        quantile_sorted(values, 0.5),
                                        quantile_sorted(values, 0.75),
                                        values.back()};
        }
        out.push_back(row);
    }
    return out;
}

}  // namespace resilience
