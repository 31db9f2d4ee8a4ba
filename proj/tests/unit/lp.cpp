#include "locorth/errors.hpp"
#include "locorth/lp.hpp"

#include <doctest.h>

using namespace locorth;

namespace {

// x + y + s = 4, x + 3y + t = 6; maximize 3x + 2y.
LinearProgram small() {
    LinearProgram lp;
    lp.variables = 4;
    lp.rows = {{{0, 1}, {1, 1}, {2, 1}}, {{0, 1}, {1, 3}, {3, 1}}};
    lp.rhs = {4, 6};
    lp.objective = {3, 2, 0, 0};
    return lp;
}

} // namespace

TEST_CASE("optimal vertex") {
    auto r = solve_lp(small());
    REQUIRE(r.status == LPResult::Status::optimal);
    CHECK(r.value == 12);
    CHECK(r.solution[0] == 4);
}

TEST_CASE("fractional optimum") {
    auto lp = small();
    lp.objective = {1, 2, 0, 0};
    auto r = solve_lp(lp);
    REQUIRE(r.status == LPResult::Status::optimal);
    CHECK(r.value == 5);   // x = 3, y = 1
    CHECK(r.solution[0] == 3);
    CHECK(r.solution[1] == 1);
}

TEST_CASE("infeasible and unbounded") {
    LinearProgram inf;
    inf.variables = 2;
    inf.rows = {{{0, 1}, {1, 1}}, {{0, 1}, {1, 1}}};
    inf.rhs = {1, 2};
    inf.objective = {1, 0};
    CHECK(solve_lp(inf).status == LPResult::Status::infeasible);

    LinearProgram unb;
    unb.variables = 2;
    unb.rows = {{{0, 1}, {1, -1}}};
    unb.rhs = {1};
    unb.objective = {1, 0};
    CHECK(solve_lp(unb).status == LPResult::Status::unbounded);
}

TEST_CASE("redundant rows and exact fractions") {
    LinearProgram lp;
    lp.variables = 3;
    lp.rows = {{{0, 3}, {1, 3}, {2, 3}}, {{0, 1}, {1, 1}, {2, 1}}, {{0, 1}, {1, -1}}};
    lp.rhs = {1, Rational(1, 3), 0};
    lp.objective = {1, 1, 0};
    auto r = solve_lp(lp);
    REQUIRE(r.status == LPResult::Status::optimal);
    CHECK(r.value == Rational(1, 3));
}

TEST_CASE("pivot budget") {
    LPOptions o;
    o.max_pivots = 1;
    CHECK_THROWS_AS(solve_lp(small(), o), BudgetExceeded);
}
