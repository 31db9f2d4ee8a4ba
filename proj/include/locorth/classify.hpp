#pragma once

#include "locorth/inequalities.hpp"
#include "locorth/lp.hpp"
#include "locorth/search.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace locorth {

/// Party i becomes party party_perm[i]; its setting x becomes setting_perms[i][x] and,
/// under that setting, outcome a becomes outcome_perms[i][x][a] (indices refer to the source labels).
struct SymmetryElement {
    std::vector<int> party_perm;
    std::vector<std::vector<int>> setting_perms;
    std::vector<std::vector<std::vector<int>>> outcome_perms;

    auto operator<=>(const SymmetryElement&) const = default;
};

SymmetryElement identity_symmetry(const Scenario& s);
/// (a * b)(e) = a(b(e)).
SymmetryElement compose(const SymmetryElement& a, const SymmetryElement& b);
SymmetryElement inverse(const SymmetryElement& g);
SymmetryElement random_symmetry(const Scenario& s, std::mt19937_64& rng);
/// Throws InputError unless g has the dimensions of s and every entry is a permutation.
void check_symmetry(const Scenario& s, const SymmetryElement& g);
/// n! * m!^n * (d!)^(n*m).
std::uint64_t symmetry_group_order(const Scenario& s);

std::uint64_t apply_symmetry(const Scenario& s, const SymmetryElement& g, std::uint64_t event);
LOInequality apply_symmetry(const LOInequality& i, const SymmetryElement& g);

/// Terms as rows a1..an x1..xn, rows in ascending order.
std::vector<std::vector<int>> event_matrix(const LOInequality& i);

struct ClassifyOptions {
    SearchOptions search;
    LPOptions lp;
    /// Cap on relabel-and-permute candidates in canonical_sym, and on group orders walked by the orbit searches.
    std::uint64_t max_orbit = 100'000'000;
};

/// Normal form under party, setting and outcome relabelings: settings and outcomes are relabelled by
/// descending multiplicity (every ordering of ties tried), all party permutations applied, and the
/// lexicographically least row-sorted matrix kept.
LOInequality canonical_sym(const LOInequality& i, const ClassifyOptions& opts = {});

/// Exact image of an affine functional on the no-signaling affine hull. Coefficients are the projection of
/// the functional onto the directions of the hull and `constant` is its value at the uniform box; both are
/// scaled by (m*d)^n so they are integers. Equal vectors mean the functionals differ by normalization and
/// no-signaling equalities.
struct QuotientVector {
    std::int64_t constant = 0;
    std::vector<std::int64_t> coefficients;   // indexed like events

    bool constant_only() const;
    auto operator<=>(const QuotientVector&) const = default;
};

QuotientVector ns_quotient(const LOInequality& i);
/// Same map for an arbitrary integer functional sum_e c_e P(e).
QuotientVector ns_quotient(const Scenario& s, const std::vector<std::int64_t>& functional);

/// Lexicographic minimum of the quotient over the party/setting/outcome relabeling group acting on coordinates.
QuotientVector orbit_minimal_quotient(const Scenario& s, const QuotientVector& q, const ClassifyOptions& opts = {});

struct InequalityClass {
    /// canonical_sym form of the first member in canonical order.
    LOInequality representative;
    /// Inputs (classify) or maximal cliques of the whole graph (enumerate_classes) in the class.
    std::uint64_t members = 0;
    /// Distinct normal forms under party, setting and outcome relabelings merged into this class.
    std::uint64_t symmetry_forms = 0;
    bool constant_only = false;
    /// Maximum over no-signaling boxes; filled by enumerate_classes.
    std::optional<Rational> ns_value;
};

/// Partition by orbit-minimal quotient vectors, sorted by term count then representative matrix.
std::vector<InequalityClass> classify(const std::vector<LOInequality>& ineqs, const ClassifyOptions& opts = {});

/// All classes of maximal cliques of O_{n,m,d} whose representative has a no-signaling maximum above 1.
std::vector<InequalityClass> enumerate_classes(const Scenario& s, const ClassifyOptions& opts = {});

/// "class_<n>-<m>-<d>_<index>.loineq", index counted from 1.
std::string class_file_name(const Scenario& s, std::size_t index);

} // namespace locorth
