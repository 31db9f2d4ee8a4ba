#pragma once

#include "locorth/inequalities.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace locorth {

inline constexpr double upb_tolerance = 1e-10;

/// m orthonormal bases of C^d, stored as unitary matrices whose columns are the basis vectors.
struct BasisFamily {
    int d = 2;
    int m = 2;
    std::vector<Eigen::MatrixXcd> bases;
};

/// Basis 0 is standard. For d = 2 basis j rotates it by j radians; for d >= 3 basis j is a
/// diagonal phase matrix times the Fourier matrix. Property (P) is verified before returning.
BasisFamily default_basis_family(int d, int m);
/// Validates shapes, unitarity and property (P); throws InputError otherwise.
BasisFamily make_basis_family(std::vector<Eigen::MatrixXcd> bases);
/// No vector of one basis is orthogonal (within tolerance) to a vector of another.
bool has_property_p(const BasisFamily& bf);

/// Product vectors whose site components are elements of a basis family.
struct ProductVectorSet {
    BasisFamily family;
    int sites = 0;
    std::vector<std::vector<std::pair<int, int>>> members;   // members[j][site] = (basis, element)
};

ProductVectorSet vectors_from_inequality(const LOInequality& i, const BasisFamily& bf);
/// Uses default_basis_family(d, m) for the inequality's scenario.
ProductVectorSet vectors_from_inequality(const LOInequality& i);

Eigen::VectorXcd local_vector(const BasisFamily& bf, int basis, int element);
/// <member a | member b> as the product of site inner products.
std::complex<double> inner_product(const ProductVectorSet& s, std::size_t a, std::size_t b);
/// Some site has the same basis and a different element.
bool combinatorially_orthogonal(const ProductVectorSet& s, std::size_t a, std::size_t b);

struct GramVerdict {
    bool orthogonal = true;
    std::size_t first = 0, second = 0;   // offending pair when not orthogonal
    std::complex<double> value;
};

/// Numeric pairwise check; InternalError if it ever disagrees with the combinatorial criterion.
GramVerdict gram_orthogonality(const ProductVectorSet& s);

/// No product of basis-family elements is orthogonal to every member. Exhaustive over (m*d)^sites candidates.
bool weak_unextendible(const ProductVectorSet& s, std::uint64_t max_candidates = std::uint64_t{1} << 24);

/// For qubits: a weak UPB is a UPB. Requires d = 2 and weak unextendibility (InputError otherwise), then
/// tries `samples` seeded random product vectors and returns false if any is orthogonal to every member.
bool qubit_upb_check(const ProductVectorSet& s, std::uint64_t samples = 1'000'000, std::uint64_t seed = 20130101);

struct ProductVector {
    std::vector<Eigen::VectorXcd> sites;
    /// Per site, "perp{...}" listing the basis elements it was built orthogonal to.
    std::vector<std::string> description;
};

/// Searches products of per-site vectors orthogonal to the span of at most d-1 basis-family elements
/// (a generic vector of that orthocomplement when it has dimension > 1). The result is certified
/// numerically against every member. An empty result says nothing about unextendibility when d >= 3.
std::optional<ProductVector> find_orthogonal_product_vector(const ProductVectorSet& s);
/// Every member of the same candidate family that works, in search order, up to `limit`.
std::vector<ProductVector> find_orthogonal_product_vectors(const ProductVectorSet& s, std::size_t limit = 100000);

/// Inner product of a general product vector with member j.
std::complex<double> inner_product(const ProductVectorSet& s, const ProductVector& v, std::size_t j);

/// "0", "1", ... for basis 0; "e", "e⊥", "e⊤" for basis 1 when d <= 3; "b<j>.<a>" otherwise.
std::string basis_symbol(const BasisFamily& bf, int basis, int element);
/// Ket notation such as "|1e⊥e>".
std::string format_member(const ProductVectorSet& s, std::size_t j);
/// Per member: the symbolic ket, then the numeric site vectors.
std::string export_upb(const ProductVectorSet& s);

} // namespace locorth
