#pragma once

#include "locorth/graph.hpp"
#include "locorth/rational.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace locorth {

using VertexSet = std::vector<std::size_t>;

struct SearchOptions {
    /// Maximal-clique enumeration aborts with BudgetExceeded past this many cliques.
    std::uint64_t max_cliques = 100'000'000;
    /// Wall-clock budget in seconds; 0 means unlimited.
    double max_seconds = 0;
    /// Branch-and-bound node budget for the optimisation searches; 0 means unlimited.
    std::uint64_t max_nodes = 0;
    /// Worker threads for enumeration; 0 picks the hardware concurrency.
    unsigned threads = 0;
};

struct WeightedGraph {
    Graph graph;
    std::vector<Rational> weights;   // one nonnegative weight per vertex
};

struct WeightedClique {
    VertexSet vertices;   // ascending
    Rational weight;
};

bool is_clique(const Graph& g, std::span<const std::size_t> c);
/// A clique no outside vertex can extend. The empty set is maximal only in the empty graph.
bool is_maximal_clique(const Graph& g, std::span<const std::size_t> c);

/// All maximal cliques, each ascending, the list sorted lexicographically.
std::vector<VertexSet> maximal_cliques(const Graph& g, const SearchOptions& opts = {});

/// All maximal cliques that contain `required` (itself a clique), same ordering as maximal_cliques.
std::vector<VertexSet> maximal_cliques_containing(const Graph& g, std::span<const std::size_t> required,
                                                  const SearchOptions& opts = {});

/// Streams the maximal cliques containing `required` on the calling thread, in search order
/// (not sorted). Each clique is passed ascending. The clique budget still applies.
void for_each_maximal_clique(const Graph& g, std::span<const std::size_t> required,
                             const std::function<void(const VertexSet&)>& visit, const SearchOptions& opts = {});

/// The first clique (in a fixed search order) of total weight strictly above `threshold`.
std::optional<WeightedClique> max_weighted_clique(const WeightedGraph& wg, const Rational& threshold,
                                                  const SearchOptions& opts = {});

/// A clique of maximum total weight.
WeightedClique maximum_weight_clique(const WeightedGraph& wg, const SearchOptions& opts = {});

/// A maximum clique, ascending.
VertexSet maximum_clique(const Graph& g, const SearchOptions& opts = {});

std::size_t clique_number(const Graph& g, const SearchOptions& opts = {});
/// Computed as the clique number of the complement.
std::size_t independence_number(const Graph& g, const SearchOptions& opts = {});
/// A maximum independent set, ascending.
VertexSet maximum_independent_set(const Graph& g, const SearchOptions& opts = {});

} // namespace locorth
