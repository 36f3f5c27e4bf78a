#pragma once

// Classic and generalized k-core decomposition.
//
// Convention used throughout: counts[K] = |{i : k_s[i] >= K}|. The
// "strictly above K" population is counts[K + 1].

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "resilience/graph_store.hpp"

namespace resilience {

using Coreness = std::uint32_t;

struct CorenessVector {
    std::vector<Coreness> k_s;
    Coreness k_max = 0;

    std::size_t size() const noexcept { return k_s.size(); }
    Coreness operator[](NodeId v) const { return k_s[v]; }
    friend bool operator==(const CorenessVector&, const CorenessVector&) = default;
};

// Read-only view of the graph restricted to the nodes still alive during
// peeling. Property functions see the graph only through this.
class SubgraphView {
public:
    SubgraphView(const Graph& graph, std::span<const std::uint8_t> alive) : graph_(graph), alive_(alive) {}

    const Graph& graph() const noexcept { return graph_; }
    bool contains(NodeId v) const { return alive_[v] != 0; }
    std::size_t internal_degree(NodeId v) const;

private:
    const Graph& graph_;
    std::span<const std::uint8_t> alive_;
};

// Node benefit B_i(H). Scores must be non-negative, and a monotone function
// never increases a node's score when other nodes are removed from H.
class PropertyFunction {
public:
    virtual ~PropertyFunction() = default;
    virtual std::int64_t evaluate(NodeId node, const SubgraphView& view) const = 0;
    virtual bool monotone() const { return true; }
    virtual std::string name() const = 0;
};

class DegreeProperty final : public PropertyFunction {
public:
    std::int64_t evaluate(NodeId node, const SubgraphView& view) const override;
    std::string name() const override { return "degree"; }
};

// b * (internal degree): the linear benefit of the rational-user model.
class ScaledDegreeProperty final : public PropertyFunction {
public:
    explicit ScaledDegreeProperty(std::int64_t per_friend);
    std::int64_t evaluate(NodeId node, const SubgraphView& view) const override;
    std::string name() const override { return "scaled_degree"; }

private:
    std::int64_t per_friend_;
};

class ConstantProperty final : public PropertyFunction {
public:
    explicit ConstantProperty(std::int64_t value) : value_(value) {}
    std::int64_t evaluate(NodeId, const SubgraphView&) const override { return value_; }
    std::string name() const override { return "constant"; }

private:
    std::int64_t value_;
};

// Sum of integer link weights to alive neighbors. weights is aligned with
// Graph::adjacency(), and must be symmetric for the core to be meaningful.
class WeightedDegreeProperty final : public PropertyFunction {
public:
    explicit WeightedDegreeProperty(std::vector<std::int64_t> weights);
    std::int64_t evaluate(NodeId node, const SubgraphView& view) const override;
    std::string name() const override { return "weighted_degree"; }

private:
    std::vector<std::int64_t> weights_;
};

// Adapter for ad-hoc scores.
class FunctionProperty final : public PropertyFunction {
public:
    using Fn = std::function<std::int64_t(NodeId, const SubgraphView&)>;
    FunctionProperty(std::string name, Fn fn, bool monotone = true)
        : name_(std::move(name)), fn_(std::move(fn)), monotone_(monotone) {}
    std::int64_t evaluate(NodeId node, const SubgraphView& view) const override { return fn_(node, view); }
    bool monotone() const override { return monotone_; }
    std::string name() const override { return name_; }

private:
    std::string name_;
    Fn fn_;
    bool monotone_;
};

// Thrown when a property function declares or exhibits non-monotone scores.
class NonMonotonePropertyError : public std::logic_error {
    using std::logic_error::logic_error;
};

CorenessVector decompose(const Graph& graph);

// Maximal node set H with prop(i, H) >= k for all i in H, sorted ascending.
std::vector<NodeId> decompose_generalized(const Graph& graph, const PropertyFunction& prop, std::int64_t k);

CorenessVector generalized_coreness(const Graph& graph, const PropertyFunction& prop);

struct CorenessCCDF {
    std::vector<std::uint64_t> counts;  // index K = 0..k_max
    std::vector<double> fractions;
    std::uint64_t total = 0;

    Coreness k_max() const noexcept { return counts.empty() ? 0 : static_cast<Coreness>(counts.size() - 1); }
    // Zero beyond k_max.
    std::uint64_t count_at_least(std::uint64_t K) const noexcept { return K < counts.size() ? counts[K] : 0; }
    double fraction_at_least(std::uint64_t K) const noexcept { return K < fractions.size() ? fractions[K] : 0.0; }
};

CorenessCCDF ccdf(const CorenessVector& coreness);

// Number of nodes per coreness value (the k-shell sizes), index = k_s.
std::vector<std::uint64_t> shell_sizes(const CorenessVector& coreness);

// Smallest K whose surviving fraction is <= survival; k_max + 1 when even the
// innermost core keeps more than that.
Coreness catastrophic_K(const CorenessCCDF& ccdf, double survival);

// Half-open degree bins [lower, upper).
class DegreeBins {
public:
    explicit DegreeBins(std::vector<std::size_t> edges);

    static DegreeBins exact(std::size_t max_degree);
    static DegreeBins linear(std::size_t width, std::size_t max_degree);
    static DegreeBins logarithmic(std::size_t per_decade, std::size_t max_degree);

    std::size_t size() const noexcept { return edges_.size() - 1; }
    std::size_t lower(std::size_t bin) const { return edges_[bin]; }
    std::size_t upper(std::size_t bin) const { return edges_[bin + 1]; }
    double middle(std::size_t bin) const;
    std::optional<std::size_t> find(std::size_t degree) const;

private:
    std::vector<std::size_t> edges_;
};

struct CorenessSummary {
    double mean;
    Coreness min;
    double q1;
    double median;
    double q3;
    Coreness max;
};

struct DegreeBinStats {
    std::size_t lower;
    std::size_t upper;
    double middle;
    std::size_t count;
    std::optional<CorenessSummary> stats;
};

std::vector<DegreeBinStats> coreness_by_degree(const Graph& graph, const CorenessVector& coreness,
                                               const DegreeBins& bins);

}  // namespace resilience
