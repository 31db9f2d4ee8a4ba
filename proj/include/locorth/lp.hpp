#pragma once

#include "locorth/rational.hpp"

#include <cstdint>
#include <vector>

namespace locorth {

/// maximize objective . x  subject to  rows . x = rhs,  x >= 0.
struct LinearProgram {
    std::size_t variables = 0;
    std::vector<std::vector<std::pair<std::size_t, Rational>>> rows;   // sparse coefficients
    std::vector<Rational> rhs;
    std::vector<Rational> objective;   // dense, one entry per variable
};

struct LPResult {
    enum class Status { optimal, infeasible, unbounded };
    Status status = Status::infeasible;
    Rational value;
    std::vector<Rational> solution;
    std::uint64_t pivots = 0;
};

struct LPOptions {
    /// Throws BudgetExceeded past this many pivots; 0 means unlimited.
    std::uint64_t max_pivots = 0;
    /// Consecutive degenerate pivots tolerated under largest-coefficient pricing before switching to Bland's rule.
    unsigned degenerate_switch = 50;
};

/// Exact two-phase primal simplex over rationals.
LPResult solve_lp(const LinearProgram& lp, const LPOptions& opts = {});

} // namespace locorth
