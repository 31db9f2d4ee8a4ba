#include "locorth/errors.hpp"
#include "locorth/upb.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace locorth;

TEST_CASE("basis families") {
    for (int d : {2, 3, 4}) {
        auto bf = default_basis_family(d, 2);
        CHECK(has_property_p(bf));
        for (const auto& u : bf.bases) CHECK((u.adjoint() * u - Eigen::MatrixXcd::Identity(d, d)).norm() < 1e-12);
    }
    Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(2, 2);
    CHECK_THROWS_AS(make_basis_family({id, id}), InputError);
}

TEST_CASE("GYNI gives the Shifts set") {
    auto s = vectors_from_inequality(load("gyni.loineq"));
    std::set<std::string> kets;
    for (std::size_t j = 0; j < s.members.size(); ++j) kets.insert(format_member(s, j));
    CHECK(kets == std::set<std::string>{"|000>", "|1e⊥e>", "|e1e⊥>", "|e⊥e1>"});
    CHECK(gram_orthogonality(s).orthogonal);
    CHECK(weak_unextendible(s));
    CHECK(qubit_upb_check(s, 20000));
    CHECK_FALSE(find_orthogonal_product_vector(s).has_value());
}

TEST_CASE("numeric and combinatorial orthogonality agree") {
    for (const char* name : {"tables/323_03.loineq", "tables/422_8_17.loineq", "tables/422_gt8_03.loineq"}) {
        auto s = vectors_from_inequality(load(name));
        for (std::size_t a = 0; a < s.members.size(); ++a)
            for (std::size_t b = a + 1; b < s.members.size(); ++b) {
                CHECK(combinatorially_orthogonal(s, a, b));
                CHECK(std::abs(inner_product(s, a, b)) <= upb_tolerance);
            }
    }
}

TEST_CASE("a non-maximal set extends") {
    auto s = vectors_from_inequality(load("prviol.loineq"));
    CHECK(gram_orthogonality(s).orthogonal);
    CHECK_FALSE(weak_unextendible(s));
    auto v = find_orthogonal_product_vector(s);
    REQUIRE(v.has_value());
    for (std::size_t j = 0; j < s.members.size(); ++j) CHECK(std::abs(inner_product(s, *v, j)) <= upb_tolerance);
}

TEST_CASE("three-qutrit weak UPB is extendible") {
    auto s = vectors_from_inequality(load("tables/323_01.loineq"));
    CHECK(s.members.size() == 12);
    CHECK(weak_unextendible(s));
    auto found = find_orthogonal_product_vectors(s);
    REQUIRE_FALSE(found.empty());
    for (const auto& v : found)
        for (std::size_t j = 0; j < s.members.size(); ++j) CHECK(std::abs(inner_product(s, v, j)) <= upb_tolerance);
    std::vector<std::string> wanted{"perp{0,e}", "perp{2,e⊤}", "perp{2}"};
    CHECK(std::any_of(found.begin(), found.end(), [&](const ProductVector& v) { return v.description == wanted; }));
    CHECK_THROWS_AS(qubit_upb_check(s), InputError);
}

TEST_CASE("symbols and export") {
    auto bf = default_basis_family(3, 2);
    CHECK(basis_symbol(bf, 0, 2) == "2");
    CHECK(basis_symbol(bf, 1, 0) == "e");
    CHECK(basis_symbol(bf, 1, 1) == "e⊥");
    CHECK(basis_symbol(bf, 1, 2) == "e⊤");
    CHECK(basis_symbol(default_basis_family(2, 3), 2, 1) == "b2.1");
    auto s = vectors_from_inequality(load("gyni.loineq"));
    CHECK(export_upb(s).find("|000>") != std::string::npos);
}
