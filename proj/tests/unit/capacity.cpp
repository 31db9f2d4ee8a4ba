#include "locorth/boxes.hpp"
#include "locorth/capacity.hpp"
#include "locorth/errors.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace locorth;

TEST_CASE("independence numbers of PR powers") {
    Box pr = pr_box();
    CHECK(support_non_orthogonality_graph(pr).size() == 8);
    CHECK(alpha_k(pr, 1) == 2);
    CHECK(alpha_k(pr, 2) == 5);
    CHECK(alpha_k(pr, 2) >= alpha_k(pr, 1) * alpha_k(pr, 1));
    auto b = capacity_bound(pr, 2);
    CHECK(b.lower_bound_theta == doctest::Approx(std::sqrt(5.0)));
    REQUIRE(b.reference_upper_theta.has_value());
    CHECK(*b.reference_upper_theta == doctest::Approx(4 * (2 - std::sqrt(2.0))));
    CHECK_THROWS_AS(alpha_k(mix(pr, uniform_box(pr.scenario()), Rational(1, 2)), 1), InputError);
}

TEST_CASE("torus packing") {
    CHECK(box_packing_count(1) == 2);
    CHECK(box_packing_count(2) == 5);
    CHECK(box_packing_count(2, 6) == 4);
    CHECK(box_packing_count(1, 9) == 3);
    CHECK(packing_conflict_graph(2).size() == 64);
}

TEST_CASE("critical purity") {
    auto q = critical_purity(5, 2, Rational(1, 2), 2, 2);
    CHECK(std::abs(q.q - (4 / std::sqrt(5.0) - 1)) < 1e-12);
    CHECK_FALSE(q.clamped);
    CHECK(std::abs(critical_purity(2, 1, Rational(1, 2), 2, 2).q - 1) < 1e-12);
    CHECK(std::abs(critical_purity_theta(reference_theta_pr(), Rational(1, 2), 2, 2).q - 1 / std::sqrt(2.0)) < 1e-12);
    CHECK_THROWS_AS(critical_purity(5, 2, Rational(1, 4), 2, 2), InputError);
    CHECK_THROWS_AS(critical_purity(0, 2, Rational(1, 2), 2, 2), InputError);
}

TEST_CASE("value polynomials") {
    auto fam = pr_family(2);
    auto poly = value_polynomial(load("ten_term.loineq"), fam);
    REQUIRE(poly.size() >= 3);
    CHECK(poly[0] == Rational(5, 8));
    CHECK(poly[1] == Rational(1, 4));
    CHECK(poly[2] == Rational(3, 8));
    CHECK(evaluate_polynomial(poly, 1) == Rational(5, 4));
    auto five = value_polynomial(load("prviol.loineq"), fam);
    CHECK(evaluate_polynomial(five, 1) == Rational(5, 4));
    CHECK(evaluate_polynomial(five, 0) == Rational(5, 16));
}

TEST_CASE("violation thresholds") {
    auto r = violation_threshold(load("ten_term.loineq"), pr_family(2));
    CHECK(std::abs(r.q - (std::sqrt(10.0) - 1) / 3) < 1e-9);
    CHECK(r.monotone);
    CHECK(r.lower < r.upper);
    auto five = violation_threshold(load("prviol.loineq"), pr_family(2));
    CHECK(five.q > r.q);

    auto gyni = load("gyni.loineq");
    NoisyFamily fam{ns_optimum(gyni).box, uniform_box(gyni.scenario()), 1};
    CHECK(std::abs(violation_threshold(gyni, fam).q - 0.6) < 1e-12);
    CHECK_THROWS_AS(violation_threshold(gyni, NoisyFamily{uniform_box(gyni.scenario()), uniform_box(gyni.scenario()), 1}),
                    InputError);
}

TEST_CASE("clique threshold for one PR box") {
    CHECK_FALSE(min_threshold_over_cliques(pr_family(1)).has_value());
}
