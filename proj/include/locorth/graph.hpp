#pragma once

#include "locorth/bitset.hpp"
#include "locorth/scenario.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace locorth {

/// Construction refuses graphs beyond these bounds.
struct GraphLimits {
    std::size_t max_vertices = std::size_t{1} << 20;
    /// Dense adjacency storage cap (n * ceil(n/64) * 8 bytes).
    std::size_t max_adjacency_bytes = std::size_t{1} << 31;
};

/// Event labels attached to the vertices of a scenario graph.
struct VertexLabels {
    Scenario scenario;
    std::vector<std::uint64_t> events;   // mixed-radix event index per vertex
};

/// Immutable simple undirected graph stored as a dense bit matrix.
class Graph {
public:
    Graph() = default;

    std::size_t size() const { return n_; }
    std::size_t words_per_row() const { return stride_; }

    bool adjacent(std::size_t u, std::size_t v) const {
        return (adjacency_[u * stride_ + (v >> 6)] >> (v & 63)) & 1U;
    }
    std::span<const std::uint64_t> row(std::size_t u) const {
        return {adjacency_.data() + u * stride_, stride_};
    }
    Bitset neighbours(std::size_t u) const { return Bitset::from_words(n_, row(u)); }

    std::size_t degree(std::size_t u) const;
    std::size_t edge_count() const;

    const std::optional<VertexLabels>& labels() const { return labels_; }
    /// Event label of vertex v; throws if the graph is unlabelled.
    Event label(std::size_t v) const;

    bool operator==(const Graph& other) const {
        return n_ == other.n_ && adjacency_ == other.adjacency_;
    }

private:
    friend class GraphBuilder;

    std::size_t n_ = 0;
    std::size_t stride_ = 0;
    std::vector<std::uint64_t> adjacency_;
    std::optional<VertexLabels> labels_;
};

class GraphBuilder {
public:
    explicit GraphBuilder(std::size_t vertices, const GraphLimits& limits = {});

    void add_edge(std::size_t u, std::size_t v);
    void set_labels(VertexLabels labels);
    Graph build() &&;

private:
    Graph g_;
};

/// O_{n,m,d}: vertices are events in mixed-radix order, edges join orthogonal events.
Graph orthogonality_graph(const Scenario& s, const GraphLimits& limits = {});
/// NO_{n,m,d}, the complement of the orthogonality graph.
Graph non_orthogonality_graph(const Scenario& s, const GraphLimits& limits = {});

Graph complement(const Graph& g);

/// Subgraph on `vertices` (kept in the given order); labels are carried over.
Graph induced_subgraph(const Graph& g, std::span<const std::size_t> vertices);

/// Vertex (u, v) is numbered u * |h| + v in both products.
Graph strong_product(const Graph& g, const Graph& h, const GraphLimits& limits = {});
Graph conormal_product(const Graph& g, const Graph& h, const GraphLimits& limits = {});
Graph strong_power(const Graph& g, int k, const GraphLimits& limits = {});
Graph conormal_power(const Graph& g, int k, const GraphLimits& limits = {});

Graph complete_graph(std::size_t n);
Graph edgeless_graph(std::size_t n);
Graph cycle_graph(std::size_t n);
/// Ci_n(jumps): vertex i adjacent to i +- j (mod n) for each jump j.
Graph circulant_graph(std::size_t n, const std::vector<std::size_t>& jumps);

/// Graphviz text; labelled vertices print as "a1...an|x1...xn".
std::string to_dot(const Graph& g, const std::string& name = "G");

} // namespace locorth
