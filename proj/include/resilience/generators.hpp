#pragma once

// Synthetic graphs for tests, benchmarks and pipeline fixtures. All graphs
// use dense ids 0..n-1 unless relabeled.

#include <cstdint>
#include <span>

#include "resilience/graph_store.hpp"
#include "resilience/random.hpp"

namespace resilience::generators {

Graph complete(std::size_t n);
Graph cycle(std::size_t n);
Graph path(std::size_t n);
Graph star(std::size_t leaves);  // hub is node 0
Graph empty(std::size_t n);

// G(n, p) by geometric edge skipping, O(n + m).
Graph erdos_renyi(std::size_t n, double p, Rng& rng);

// m uniformly random pairs; self-loops and repeats are canonicalized away.
Graph random_edges(std::size_t n, std::size_t m, Rng& rng);

// Clique on nodes 0..core-1 plus a fringe where node core+i attaches to
// `links` uniformly chosen earlier nodes.
Graph planted_core(std::size_t core, std::size_t fringe, std::size_t links, Rng& rng);

// Same structure with node v renamed to new_ids[v].
Graph relabel(const Graph& graph, std::span<const ExternalId> new_ids);

}  // namespace resilience::generators
