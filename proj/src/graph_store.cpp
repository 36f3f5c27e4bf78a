#include "resilience/graph_store.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>
#include <string_view>

namespace resilience {

namespace {

constexpr std::array<char, 4> kMagic{'C', 'L', 'G', '1'};
constexpr std::uint32_t kWideNeighbors = 1u;

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

ExternalId parse_id(std::string_view token, std::size_t line) {
    ExternalId value = 0;
    const auto* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (token.empty() || ec != std::errc{} || ptr != end) {
        throw ParseError(line, std::string(token), "expected a non-negative integer id");
    }
    return value;
}

void parse_pair_line(std::string_view line, std::size_t lineno, std::vector<EdgeRecord>& edges) {
    std::array<std::string_view, 2> tokens;
    std::size_t count = 0;
    std::size_t pos = 0;
    while (pos < line.size()) {
        pos = line.find_first_not_of(" \t\r", pos);
        if (pos == std::string_view::npos) break;
        auto end = line.find_first_of(" \t\r", pos);
        if (end == std::string_view::npos) end = line.size();
        auto token = line.substr(pos, end - pos);
        if (count == 2) throw ParseError(lineno, std::string(token), "unexpected extra token");
        tokens[count++] = token;
        pos = end;
    }
    if (count != 2) {
        throw ParseError(lineno, std::string(trim(line)), "expected two ids separated by whitespace");
    }
    edges.push_back({parse_id(tokens[0], lineno), parse_id(tokens[1], lineno)});
}

void parse_adjacency_line(std::string_view line, std::size_t lineno, std::vector<EdgeRecord>& edges,
                          std::vector<ExternalId>& ids) {
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) {
        throw ParseError(lineno, std::string(trim(line)), "expected 'id: neighbor,neighbor,...'");
    }
    const ExternalId source = parse_id(trim(line.substr(0, colon)), lineno);
    ids.push_back(source);
    auto rest = trim(line.substr(colon + 1));
    if (rest.empty()) return;
    std::size_t pos = 0;
    while (true) {
        auto comma = rest.find(',', pos);
        auto token = trim(rest.substr(pos, comma == std::string_view::npos ? rest.npos : comma - pos));
        edges.push_back({source, parse_id(token, lineno)});
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
}

// Little-endian I/O of fixed-width unsigned arrays.
template <typename T>
void write_le(std::ostream& out, std::span<const T> values) {
    if constexpr (std::endian::native == std::endian::little) {
        out.write(reinterpret_cast<const char*>(values.data()),
                  static_cast<std::streamsize>(values.size_bytes()));
    } else {
        for (T v : values) {
            std::array<char, sizeof(T)> bytes;
            for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
            out.write(bytes.data(), bytes.size());
        }
    }
}

template <typename T>
void write_le(std::ostream& out, T value) {
    write_le<T>(out, std::span<const T>(&value, 1));
}

template <typename T>
void read_le(std::istream& in, std::span<T> values, const char* what) {
    in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(values.size_bytes()));
    if (static_cast<std::size_t>(in.gcount()) != values.size_bytes()) {
        throw BinaryTruncatedError(std::string("graph cache truncated while reading ") + what);
    }
    if constexpr (std::endian::native != std::endian::little) {
        for (T& v : values) {
            auto* b = reinterpret_cast<unsigned char*>(&v);
            T out = 0;
            for (std::size_t i = 0; i < sizeof(T); ++i) out |= static_cast<T>(b[i]) << (8 * i);
            v = out;
        }
    }
}

template <typename T>
T read_le(std::istream& in, const char* what) {
    T value{};
    read_le<T>(in, std::span<T>(&value, 1), what);
    return value;
}

// Shared CSR assembly: degrees, fill, per-node sort+dedup, compaction.
Graph build_csr(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges,
                std::vector<ExternalId> id_map) {
    std::vector<std::uint64_t> raw(n + 1, 0);
    for (auto [u, v] : edges) {
        if (u == v) continue;
        ++raw[u + 1];
        ++raw[v + 1];
    }
    for (std::size_t i = 0; i < n; ++i) raw[i + 1] += raw[i];

    std::vector<NodeId> slots(raw[n]);
    {
        std::vector<std::uint64_t> cursor(raw.begin(), raw.end() - 1);
        for (auto [u, v] : edges) {
            if (u == v) continue;
            slots[cursor[u]++] = v;
            slots[cursor[v]++] = u;
        }
    }

    std::vector<std::uint64_t> offsets(n + 1, 0);
    std::uint64_t write = 0;
    for (std::size_t v = 0; v < n; ++v) {
        auto first = slots.begin() + static_cast<std::ptrdiff_t>(raw[v]);
        auto last = slots.begin() + static_cast<std::ptrdiff_t>(raw[v + 1]);
        std::sort(first, last);
        auto unique_end = std::unique(first, last);
        for (auto it = first; it != unique_end; ++it) slots[write++] = *it;
        offsets[v + 1] = write;
    }
    slots.resize(write);
    slots.shrink_to_fit();
    return Graph::from_parts(std::move(offsets), std::move(slots), std::move(id_map));
}

}  // namespace

ParseError::ParseError(std::size_t line, std::string token, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what + " (got '" + token + "')"),
      line_(line),
      token_(std::move(token)) {}

EdgeListFormat parse_edge_list_format(const std::string& name) {
    if (name == "pairs" || name == "pair-per-line") return EdgeListFormat::PairPerLine;
    if (name == "adjacency" || name == "adjacency-list") return EdgeListFormat::AdjacencyList;
    throw std::invalid_argument("unknown edge list format '" + name + "' (expected pairs or adjacency)");
}

Graph Graph::from_edges(std::span<const EdgeRecord> edges, std::span<const ExternalId> extra_ids) {
    std::vector<ExternalId> ids;
    ids.reserve(edges.size() * 2 + extra_ids.size());
    for (const auto& e : edges) {
        ids.push_back(e.source);
        ids.push_back(e.target);
    }
    ids.insert(ids.end(), extra_ids.begin(), extra_ids.end());
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    if (ids.size() > std::numeric_limits<NodeId>::max()) {
        throw std::length_error("graph has more nodes than a 32-bit dense index can address");
    }

    auto dense = [&ids](ExternalId id) {
        return static_cast<NodeId>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
    };
    std::vector<std::pair<NodeId, NodeId>> mapped;
    mapped.reserve(edges.size());
    for (const auto& e : edges) mapped.emplace_back(dense(e.source), dense(e.target));

    const std::size_t n = ids.size();
    return build_csr(n, mapped, std::move(ids));
}

Graph Graph::from_dense_edges(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges) {
    for (auto [u, v] : edges) {
        if (u >= n || v >= n) throw std::out_of_range("dense edge endpoint exceeds node count");
    }
    std::vector<ExternalId> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = i;
    return build_csr(n, edges, std::move(ids));
}

Graph Graph::from_parts(std::vector<std::uint64_t> offsets, std::vector<NodeId> neighbors,
                        std::vector<ExternalId> id_map) {
    Graph g;
    g.offsets_ = std::move(offsets);
    g.neighbors_ = std::move(neighbors);
    g.id_map_ = std::move(id_map);
    if (!g.check_invariants()) throw std::invalid_argument("graph arrays violate CSR invariants");
    return g;
}

std::size_t Graph::max_degree() const noexcept {
    std::size_t best = 0;
    for (std::size_t v = 0; v < num_nodes(); ++v) best = std::max(best, degree(static_cast<NodeId>(v)));
    return best;
}

std::optional<NodeId> Graph::dense_id(ExternalId id) const {
    auto it = std::lower_bound(id_map_.begin(), id_map_.end(), id);
    if (it == id_map_.end() || *it != id) return std::nullopt;
    return static_cast<NodeId>(it - id_map_.begin());
}

bool Graph::check_invariants() const {
    if (offsets_.empty() || offsets_.front() != 0) return false;
    const std::size_t n = offsets_.size() - 1;
    if (id_map_.size() != n) return false;
    if (offsets_.back() != neighbors_.size() || neighbors_.size() % 2 != 0) return false;
    for (std::size_t i = 0; i < n; ++i) {
        if (offsets_[i] > offsets_[i + 1]) return false;
        if (i > 0 && id_map_[i - 1] >= id_map_[i]) return false;
    }
    for (std::size_t v = 0; v < n; ++v) {
        auto adj = neighbors(static_cast<NodeId>(v));
        for (std::size_t j = 0; j < adj.size(); ++j) {
            const NodeId u = adj[j];
            if (u >= n || u == v) return false;
            if (j > 0 && adj[j - 1] >= u) return false;
            auto back = neighbors(u);
            if (!std::binary_search(back.begin(), back.end(), static_cast<NodeId>(v))) return false;
        }
    }
    return true;
}

Graph parse_edge_list(std::istream& in, EdgeListFormat format) {
    std::vector<EdgeRecord> edges;
    std::vector<ExternalId> ids;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto view = trim(line);
        if (view.empty() || view.front() == '#') continue;
        if (format == EdgeListFormat::PairPerLine) {
            parse_pair_line(view, lineno, edges);
        } else {
            parse_adjacency_line(view, lineno, edges, ids);
        }
    }
    if (in.bad()) throw std::runtime_error("I/O error while reading edge list");
    return Graph::from_edges(edges, ids);
}

Graph ingest_edge_list(const std::filesystem::path& path, EdgeListFormat format) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open edge list '" + path.string() + "'");
    return parse_edge_list(in, format);
}

void save_binary(const Graph& graph, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write graph cache '" + path.string() + "'");
    out.write(kMagic.data(), kMagic.size());
    write_le<std::uint32_t>(out, 0u);
    write_le<std::uint64_t>(out, graph.num_nodes());
    write_le<std::uint64_t>(out, graph.num_edges());
    write_le<std::uint64_t>(out, graph.offsets());
    write_le<NodeId>(out, graph.adjacency());
    write_le<ExternalId>(out, graph.id_map());
    out.flush();
    if (!out) throw std::runtime_error("failed writing graph cache '" + path.string() + "'");
}

Graph load_binary(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open graph cache '" + path.string() + "'");

    std::array<char, 4> magic{};
    in.read(magic.data(), magic.size());
    if (in.gcount() != static_cast<std::streamsize>(magic.size())) {
        throw BinaryTruncatedError("graph cache truncated inside the header");
    }
    if (std::memcmp(magic.data(), kMagic.data(), 3) != 0) {
        throw BinaryFormatError("not a graph cache (bad magic)");
    }
    if (magic[3] != kMagic[3]) {
        throw BinaryVersionError(std::string("graph cache major version '") + magic[3] +
                                 "' is not supported (expected '" + kMagic[3] + "')");
    }
    const auto flags = read_le<std::uint32_t>(in, "header");
    if ((flags & ~kWideNeighbors) != 0) throw BinaryFormatError("graph cache has unknown header flags");
    const auto n = read_le<std::uint64_t>(in, "header");
    const auto m = read_le<std::uint64_t>(in, "header");
    if (n > std::numeric_limits<NodeId>::max()) throw BinaryFormatError("graph cache node count too large");

    // Bound the allocation by the actual file size so a corrupt header cannot
    // request absurd amounts of memory.
    const std::uint64_t width = (flags & kWideNeighbors) ? 8 : 4;
    const std::uint64_t payload = 8 * (n + 1) + width * 2 * m + 8 * n;
    const auto file_size = std::filesystem::file_size(path);
    const std::uint64_t header_size = 4 + 4 + 8 + 8;
    if (m > (std::numeric_limits<std::uint64_t>::max() / 32) || file_size < header_size + payload) {
        throw BinaryTruncatedError("graph cache shorter than its header declares");
    }
    if (file_size > header_size + payload) throw BinaryFormatError("graph cache has trailing bytes");

    std::vector<std::uint64_t> offsets(n + 1);
    read_le<std::uint64_t>(in, offsets, "offsets");
    std::vector<NodeId> neighbors(2 * m);
    if (width == 4) {
        read_le<NodeId>(in, neighbors, "neighbors");
    } else {
        std::vector<std::uint64_t> wide(2 * m);
        read_le<std::uint64_t>(in, wide, "neighbors");
        for (std::size_t i = 0; i < wide.size(); ++i) {
            if (wide[i] >= n) throw BinaryFormatError("graph cache neighbor index out of range");
            neighbors[i] = static_cast<NodeId>(wide[i]);
        }
    }
    std::vector<ExternalId> id_map(n);
    read_le<ExternalId>(in, id_map, "id map");

    try {
        return Graph::from_parts(std::move(offsets), std::move(neighbors), std::move(id_map));
    } catch (const std::invalid_argument& e) {
        throw BinaryFormatError(std::string("graph cache is corrupt: ") + e.what());
    }
}

std::map<std::size_t, std::size_t> degree_histogram(const Graph& graph) {
    std::map<std::size_t, std::size_t> hist;
    for (std::size_t v = 0; v < graph.num_nodes(); ++v) ++hist[graph.degree(static_cast<NodeId>(v))];
    return hist;
}

}  // namespace resilience
