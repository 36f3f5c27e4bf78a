#pragma once

// Compact undirected simple graph in CSR form.
//
// Nodes carry dense indices 0..n-1; the external ids seen in the input are
// kept in id_map, sorted strictly increasing, so dense order equals id order.
//
// Binary cache layout (little-endian):
//   magic "CLG1"      4 bytes   (the trailing digit is the major version)
//   flags             u32       bit 0: neighbors stored as u64 instead of u32
//   n, m              u64 x 2
//   offsets           u64 x (n+1)
//   neighbors         u32|u64 x 2m
//   id_map            u64 x n

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace resilience {

using NodeId = std::uint32_t;
using ExternalId = std::uint64_t;

struct EdgeRecord {
    ExternalId source;
    ExternalId target;
};

enum class EdgeListFormat { PairPerLine, AdjacencyList };

EdgeListFormat parse_edge_list_format(const std::string& name);

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::string token, const std::string& what);
    std::size_t line() const noexcept { return line_; }
    const std::string& token() const noexcept { return token_; }

private:
    std::size_t line_;
    std::string token_;
};

// Errors raised while reading the binary cache.
class BinaryFormatError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};
class BinaryVersionError : public BinaryFormatError {
    using BinaryFormatError::BinaryFormatError;
};
class BinaryTruncatedError : public BinaryFormatError {
    using BinaryFormatError::BinaryFormatError;
};

class Graph {
public:
    Graph() : offsets_{0} {}

    // Canonicalizes raw records: adds reverse edges, drops self-loops and
    // duplicates. extra_ids are nodes that exist without edges.
    static Graph from_edges(std::span<const EdgeRecord> edges,
                            std::span<const ExternalId> extra_ids = {});

    // Same, for edges already on dense ids 0..n-1; id_map becomes identity.
    static Graph from_dense_edges(std::size_t n,
                                  std::span<const std::pair<NodeId, NodeId>> edges);

    // Takes ownership of prebuilt arrays after validating every invariant.
    static Graph from_parts(std::vector<std::uint64_t> offsets,
                            std::vector<NodeId> neighbors,
                            std::vector<ExternalId> id_map);

    std::size_t num_nodes() const noexcept { return offsets_.size() - 1; }
    std::size_t num_edges() const noexcept { return neighbors_.size() / 2; }

    std::size_t degree(NodeId v) const {
        return static_cast<std::size_t>(offsets_[v + 1] - offsets_[v]);
    }
    std::span<const NodeId> neighbors(NodeId v) const {
        return {neighbors_.data() + offsets_[v], degree(v)};
    }
    std::size_t max_degree() const noexcept;

    ExternalId external_id(NodeId v) const { return id_map_[v]; }
    std::optional<NodeId> dense_id(ExternalId id) const;

    std::span<const std::uint64_t> offsets() const noexcept { return offsets_; }
    std::span<const NodeId> adjacency() const noexcept { return neighbors_; }
    std::span<const ExternalId> id_map() const noexcept { return id_map_; }

    // Full scan of symmetry, simplicity, sortedness and offset consistency.
    bool check_invariants() const;

    friend bool operator==(const Graph&, const Graph&) = default;

private:
    std::vector<std::uint64_t> offsets_;
    std::vector<NodeId> neighbors_;
    std::vector<ExternalId> id_map_;
};

Graph ingest_edge_list(const std::filesystem::path& path, EdgeListFormat format);
Graph parse_edge_list(std::istream& in, EdgeListFormat format);

void save_binary(const Graph& graph, const std::filesystem::path& path);
Graph load_binary(const std::filesystem::path& path);

std::map<std::size_t, std::size_t> degree_histogram(const Graph& graph);

}  // namespace resilience
