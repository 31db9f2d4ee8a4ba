#pragma once

#include "locorth/boxes.hpp"
#include "locorth/inequalities.hpp"
#include "locorth/search.hpp"

#include <optional>
#include <string>
#include <vector>

namespace locorth {

/// Upper bound 4(2 - sqrt 2) on the Shannon capacity of the PR non-orthogonality graph (a Lovasz-number bound).
double reference_theta_pr();

struct CapacityBound {
    int k = 0;
    std::size_t alpha_k = 0;
    double lower_bound_theta = 0;   // alpha_k^(1/k)
    std::optional<double> reference_upper_theta;
};

/// q -> (q*base + (1-q)*noise)^(x)k.
struct NoisyFamily {
    Box base;
    Box noise;
    int k = 1;
};

/// PR mixed with uniform noise, k copies.
NoisyFamily pr_family(int k);

/// Non-orthogonality graph on the support of b, labelled with the support events.
Graph support_non_orthogonality_graph(const Box& b);

/// Independence number of the k-th strong power of the support non-orthogonality graph.
/// Requires every support event to carry the same probability.
std::size_t alpha_k(const Box& b, int k, const SearchOptions& opts = {});
CapacityBound capacity_bound(const Box& b, int k, const SearchOptions& opts = {});

/// Solves (q c + (1-q)/d^n)^k alpha = 1 for q. Throws InputError unless c > d^-n and alpha >= 1;
/// roots outside [0,1] are reported through `clamped`.
struct PurityResult {
    double q = 0;
    bool clamped = false;
};
PurityResult critical_purity(std::size_t alpha, int k, const Rational& c, int n, int d);
/// Same with the limit alpha^(1/k) replaced by a capacity value theta.
PurityResult critical_purity_theta(double theta, const Rational& c, int n, int d);

/// Exact coefficients (ascending powers of q) of evaluate(i, family(q)).
std::vector<Rational> value_polynomial(const LOInequality& i, const NoisyFamily& fam);
Rational evaluate_polynomial(const std::vector<Rational>& poly, const Rational& q);

struct ThresholdResult {
    double q = 0;
    Rational lower;   // value(lower) <= 1
    Rational upper;   // value(upper) > 1
    bool monotone = true;
};

/// The q in [0,1] above which the family violates i, to 1e-12. Throws InputError when value(1) <= 1.
ThresholdResult violation_threshold(const LOInequality& i, const NoisyFamily& fam);

struct CliqueThreshold {
    double q = 0;
    LOInequality witness;
};

/// Minimum violation threshold over all maximal cliques of the orthogonality graph of the k-copy
/// scenario; ties broken by the smaller term matrix. None when no clique is ever violated.
std::optional<CliqueThreshold> min_threshold_over_cliques(const NoisyFamily& fam, const SearchOptions& opts = {});

/// Vertices (Z/side)^k; two cubes of edge `cube` overlap iff every cyclic coordinate distance is < cube.
Graph packing_conflict_graph(int k, int side = 8, int cube = 3);
/// Largest set of pairwise non-overlapping cubes.
std::size_t box_packing_count(int k, int side = 8, int cube = 3, const SearchOptions& opts = {});

} // namespace locorth
