#include "resilience/generators.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace resilience::generators {

namespace {

using DenseEdges = std::vector<std::pair<NodeId, NodeId>>;

}  // namespace

Graph complete(std::size_t n) {
    DenseEdges edges;
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u + 1; v < n; ++v) edges.emplace_back(u, v);
    }
    return Graph::from_dense_edges(n, edges);
}

Graph cycle(std::size_t n) {
    if (n < 3) throw std::invalid_argument("a cycle needs at least three nodes");
    DenseEdges edges;
    for (std::size_t u = 0; u < n; ++u) edges.emplace_back(u, (u + 1) % n);
    return Graph::from_dense_edges(n, edges);
}

Graph path(std::size_t n) {
    DenseEdges edges;
    for (std::size_t u = 0; u + 1 < n; ++u) edges.emplace_back(u, u + 1);
    return Graph::from_dense_edges(n, edges);
}

Graph star(std::size_t leaves) {
    DenseEdges edges;
    for (std::size_t u = 1; u <= leaves; ++u) edges.emplace_back(0, u);
    return Graph::from_dense_edges(leaves + 1, edges);
}

Graph empty(std::size_t n) {
    return Graph::from_dense_edges(n, {});
}

Graph erdos_renyi(std::size_t n, double p, Rng& rng) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("edge probability must lie in [0, 1]");
    DenseEdges edges;
    if (p > 0.0 && n > 1) {
        const double log_q = std::log1p(-p);
        // Walk the lower triangle (v, w), w < v, skipping geometric gaps.
        std::int64_t v = 1;
        std::int64_t w = -1;
        const auto nn = static_cast<std::int64_t>(n);
        while (v < nn) {
            const double r = uniform01(rng);
            const auto skip = p >= 1.0 ? 0 : static_cast<std::int64_t>(std::floor(std::log1p(-r) / log_q));
            w += 1 + skip;
            while (w >= v && v < nn) {
                w -= v;
                ++v;
            }
            if (v < nn) edges.emplace_back(static_cast<NodeId>(v), static_cast<NodeId>(w));
        }
    }
    return Graph::from_dense_edges(n, edges);
}

Graph random_edges(std::size_t n, std::size_t m, Rng& rng) {
    if (n == 0 && m > 0) throw std::invalid_argument("cannot place edges on an empty node set");
    DenseEdges edges;
    edges.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        edges.emplace_back(static_cast<NodeId>(uniform_below(rng, n)), static_cast<NodeId>(uniform_below(rng, n)));
    }
    return Graph::from_dense_edges(n, edges);
}

Graph planted_core(std::size_t core, std::size_t fringe, std::size_t links, Rng& rng) {
    if (core == 0 && fringe > 0) throw std::invalid_argument("fringe nodes need a core to attach to");
    DenseEdges edges;
    for (std::size_t u = 0; u < core; ++u) {
        for (std::size_t v = u + 1; v < core; ++v) edges.emplace_back(u, v);
    }
    for (std::size_t i = 0; i < fringe; ++i) {
        const std::size_t v = core + i;
        for (std::size_t j = 0; j < links; ++j) {
            edges.emplace_back(static_cast<NodeId>(v), static_cast<NodeId>(uniform_below(rng, v)));
        }
    }
    return Graph::from_dense_edges(core + fringe, edges);
}

Graph relabel(const Graph& graph, std::span<const ExternalId> new_ids) {
    if (new_ids.size() != graph.num_nodes()) throw std::invalid_argument("relabel needs one id per node");
    std::vector<EdgeRecord> edges;
    edges.reserve(graph.num_edges());
    for (std::size_t u = 0; u < graph.num_nodes(); ++u) {
        for (NodeId v : graph.neighbors(static_cast<NodeId>(u))) {
            if (u < v) edges.push_back({new_ids[u], new_ids[v]});
        }
    }
    auto g = Graph::from_edges(edges, new_ids);
    if (g.num_nodes() != graph.num_nodes()) throw std::invalid_argument("relabel ids must be distinct");
    return g;
}

}  // namespace resilience::generators
