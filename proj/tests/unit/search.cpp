#include "locorth/errors.hpp"
#include "locorth/search.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace locorth;

namespace {

Graph random_graph(std::size_t n, double p, std::mt19937_64& rng) {
    std::bernoulli_distribution coin(p);
    GraphBuilder b(n);
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v)
            if (coin(rng)) b.add_edge(u, v);
    return std::move(b).build();
}

bool mask_is_clique(const Graph& g, std::uint32_t mask) {
    for (std::size_t u = 0; u < g.size(); ++u)
        if (mask >> u & 1)
            for (std::size_t v = u + 1; v < g.size(); ++v)
                if ((mask >> v & 1) && !g.adjacent(u, v)) return false;
    return true;
}

VertexSet to_set(std::uint32_t mask, std::size_t n) {
    VertexSet s;
    for (std::size_t v = 0; v < n; ++v)
        if (mask >> v & 1) s.push_back(v);
    return s;
}

std::vector<VertexSet> brute_maximal(const Graph& g) {
    const std::size_t n = g.size();
    std::vector<VertexSet> out;
    for (std::uint32_t mask = 1; mask < (1U << n); ++mask) {
        if (!mask_is_clique(g, mask)) continue;
        bool maximal = true;
        for (std::size_t v = 0; v < n && maximal; ++v)
            if (!(mask >> v & 1) && mask_is_clique(g, mask | (1U << v))) maximal = false;
        if (maximal) out.push_back(to_set(mask, n));
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

TEST_CASE("maximal cliques agree with brute force") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 60; ++t) {
        std::size_t n = 4 + t % 11;
        Graph g = random_graph(n, 0.2 + 0.1 * (t % 7), rng);
        auto expect = brute_maximal(g);
        SearchOptions one;
        one.threads = 1;
        CHECK(maximal_cliques(g) == expect);
        CHECK(maximal_cliques(g, one) == expect);
        for (const auto& c : expect) CHECK(is_maximal_clique(g, c));

        std::vector<std::size_t> req{0};
        std::vector<VertexSet> with0;
        for (const auto& c : expect)
            if (std::find(c.begin(), c.end(), 0) != c.end()) with0.push_back(c);
        CHECK(maximal_cliques_containing(g, req) == with0);

        std::vector<VertexSet> streamed;
        for_each_maximal_clique(g, {}, [&](const VertexSet& c) { streamed.push_back(c); });
        std::sort(streamed.begin(), streamed.end());
        CHECK(streamed == expect);
    }
}

TEST_CASE("weighted clique search agrees with brute force") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> num(0, 6);
    for (int t = 0; t < 60; ++t) {
        std::size_t n = 3 + t % 12;
        WeightedGraph wg{random_graph(n, 0.5, rng), {}};
        for (std::size_t v = 0; v < n; ++v) wg.weights.push_back(make_rational(num(rng), 1 + num(rng)));
        Rational best = 0;
        for (std::uint32_t mask = 1; mask < (1U << n); ++mask) {
            if (!mask_is_clique(wg.graph, mask)) continue;
            Rational w = 0;
            for (auto v : to_set(mask, n)) w += wg.weights[v];
            best = std::max(best, w);
        }
        auto got = maximum_weight_clique(wg);
        CHECK(got.weight == best);
        CHECK(is_clique(wg.graph, got.vertices));
        Rational sum = 0;
        for (auto v : got.vertices) sum += wg.weights[v];
        CHECK(sum == got.weight);

        Rational threshold = best - Rational(1, 7);
        auto hit = max_weighted_clique(wg, threshold);
        REQUIRE(hit.has_value());
        CHECK(hit->weight > threshold);
        CHECK_FALSE(max_weighted_clique(wg, best).has_value());
    }
}

TEST_CASE("clique and independence numbers") {
    Graph c5 = cycle_graph(5);
    CHECK(clique_number(c5) == 2);
    CHECK(independence_number(c5) == 2);
    CHECK(independence_number(strong_power(c5, 2)) == 5);
    CHECK(maximum_independent_set(strong_power(c5, 2)).size() == 5);
    CHECK(clique_number(complete_graph(7)) == 7);
    CHECK(independence_number(edgeless_graph(6)) == 6);
    CHECK(maximum_clique(complete_graph(3)) == VertexSet{0, 1, 2});
    std::mt19937_64 rng(9);
    for (int t = 0; t < 20; ++t) {
        Graph g = random_graph(12, 0.4, rng);
        std::size_t best = 0;
        for (std::uint32_t mask = 1; mask < (1U << 12); ++mask)
            if (mask_is_clique(g, mask)) best = std::max<std::size_t>(best, std::popcount(mask));
        CHECK(clique_number(g) == best);
    }
}

TEST_CASE("budgets") {
    SearchOptions tiny;
    tiny.max_cliques = 3;
    CHECK_THROWS_AS(maximal_cliques(cycle_graph(10), tiny), BudgetExceeded);
    SearchOptions nodes;
    nodes.max_nodes = 2;
    CHECK_THROWS_AS(independence_number(strong_power(cycle_graph(7), 2), nodes), BudgetExceeded);
}

TEST_CASE("empty and trivial graphs") {
    CHECK(maximal_cliques(edgeless_graph(0)).size() <= 1);
    CHECK(maximal_cliques(edgeless_graph(3)) == std::vector<VertexSet>{{0}, {1}, {2}});
    CHECK(is_maximal_clique(complete_graph(3), VertexSet{0, 1, 2}));
    CHECK_FALSE(is_maximal_clique(complete_graph(3), VertexSet{0, 1}));
}
