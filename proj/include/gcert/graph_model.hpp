#pragma once

#include "gcert/certificate.hpp"
#include "gcert/uint128.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gcert {

using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;

/// A finite simple undirected graph on vertices 0..n-1.
class Graph {
public:
    Graph() = default;
    /// Throws InvalidEdge on loops, duplicates (in either orientation) or endpoints >= n.
    Graph(std::uint32_t vertex_count, std::vector<Edge> edges);

    std::uint32_t vertex_count() const { return n_; }
    /// Normalised (u < v) and sorted.
    const std::vector<Edge> &edges() const { return edges_; }
    const std::vector<Vertex> &neighbors(Vertex v) const { return adjacency_[v]; }
    bool has_edge(Vertex u, Vertex v) const;

    bool operator==(const Graph &other) const { return n_ == other.n_ && edges_ == other.edges_; }

private:
    std::uint32_t n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<Vertex>> adjacency_;
};

/// The homomorphism target H. Same shape as Graph with O(1) edge queries.
class TargetGraph {
public:
    TargetGraph() = default;
    /// Throws InvalidParams when the graph is empty.
    explicit TargetGraph(Graph graph);

    static TargetGraph complete(std::uint32_t k);
    static TargetGraph cycle(std::uint32_t k);
    /// "K<k>" or "C<k>".
    static std::optional<TargetGraph> builtin(std::string_view name);

    const Graph &graph() const { return graph_; }
    std::uint32_t vertex_count() const { return graph_.vertex_count(); }
    bool has_edge(std::uint32_t a, std::uint32_t b) const
    {
        return a < vertex_count() && b < vertex_count() && matrix_[std::size_t{a} * vertex_count() + b];
    }
    /// ceil(log2 n'): bits per stored H-vertex (0 when n' = 1).
    unsigned color_bits() const { return bit_width(vertex_count() - 1); }

private:
    Graph graph_;
    std::vector<char> matrix_;
};

/// Injective identifiers in {0, ..., M-1}.
class IdAssignment {
public:
    IdAssignment() = default;
    /// Throws InvalidId on duplicates, out-of-range identifiers or M < n.
    IdAssignment(std::vector<u128> ids, IdRange range);

    const std::vector<u128> &ids() const { return ids_; }
    u128 operator[](Vertex v) const { return ids_[v]; }
    std::size_t size() const { return ids_.size(); }
    IdRange range() const { return range_; }

    bool operator==(const IdAssignment &) const = default;

private:
    std::vector<u128> ids_;
    IdRange range_;
};

/// M as a function of n, shared by prover and verifier.
class IdRangePolicy {
public:
    enum class Kind { fixed, polynomial, doubly_exponential };

    static IdRangePolicy fixed(IdRange m) { return IdRangePolicy(Kind::fixed, m, 0); }
    /// M = n^c, saturating at 2^128. Throws InvalidParams for c = 0.
    static IdRangePolicy polynomial(unsigned c);
    /// M = min(2^(2^n), 2^128).
    static IdRangePolicy doubly_exponential() { return IdRangePolicy(Kind::doubly_exponential, {}, 0); }
    /// "fixed:<M>", "poly:<c>" or "doubexp".
    static std::optional<IdRangePolicy> parse(std::string_view text);

    Kind kind() const { return kind_; }
    /// M(n), or nullopt when n = 0 or M(n) < n.
    std::optional<IdRange> evaluate(std::uint64_t n) const;
    /// M(n); throws InvalidParams when evaluate() would return nullopt.
    IdRange at(std::uint64_t n) const;
    /// Whether some n >= 1 satisfies M(n) = m.
    bool in_image(IdRange m) const;

    std::string to_string() const;

    bool operator==(const IdRangePolicy &) const = default;

private:
    IdRangePolicy(Kind kind, IdRange m, unsigned c) : kind_(kind), fixed_(m), exponent_(c) {}

    Kind kind_ = Kind::fixed;
    IdRange fixed_;
    unsigned exponent_ = 0;
};

/// Everything a node may use to decide: its identifier, its neighbours'
/// identifiers and the global certificate. Nothing else.
struct LocalView {
    u128 own_id = 0;
    std::vector<u128> neighbor_ids; // sorted ascending
    std::reference_wrapper<const Certificate> certificate;

    bool operator==(const LocalView &other) const
    {
        return own_id == other.own_id && neighbor_ids == other.neighbor_ids &&
               certificate.get() == other.certificate.get();
    }
};

LocalView local_view(const Graph &graph, const IdAssignment &ids, Vertex vertex, const Certificate &certificate);

struct GraphInstance {
    Graph graph;
    IdAssignment ids;
};

GraphInstance parse_graph(std::string_view text);
std::string serialize_graph(const Graph &graph, const IdAssignment &ids);

/// Reads H from the graph file format; the M field and any id lines are ignored.
TargetGraph parse_target(std::string_view text);

/// Seeded random graph that maps homomorphically to `target` by construction.
Graph random_h_colorable_graph(std::uint32_t n, const TargetGraph &target, double density, std::uint64_t seed);

/// Seeded uniformly random injective identifiers in `range`.
IdAssignment random_id_assignment(std::uint32_t n, IdRange range, std::uint64_t seed);

/// Seeded uniform Erdos-Renyi style graph (edge probability `density`).
Graph random_graph(std::uint32_t n, double density, std::uint64_t seed);

/// The graph on n vertices whose edges are selected by `mask` over the
/// lexicographically ordered pairs (0,1), (0,2), ..., (n-2,n-1).
Graph graph_from_edge_mask(std::uint32_t n, std::uint64_t mask);

} // namespace gcert
