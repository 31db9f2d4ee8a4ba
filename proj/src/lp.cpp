#include "locorth/lp.hpp"

#include "locorth/errors.hpp"

namespace locorth {

namespace {

class Tableau {
public:
    Tableau(const LinearProgram& lp, const LPOptions& opts) : opts_(opts), n_(lp.variables), m_(lp.rows.size()) {
        cols_ = n_ + m_;
        t_.assign(m_, std::vector<Rational>(cols_));
        rhs_.resize(m_);
        basis_.resize(m_);
        banned_.assign(cols_, false);
        for (std::size_t i = 0; i < m_; ++i) {
            bool flip = lp.rhs[i] < 0;
            for (const auto& [j, a] : lp.rows[i]) {
                if (j >= n_) throw InputError("LP coefficient refers to a missing variable");
                t_[i][j] += flip ? Rational(-a) : a;
            }
            rhs_[i] = flip ? Rational(-lp.rhs[i]) : lp.rhs[i];
            t_[i][n_ + i] = 1;
            basis_[i] = n_ + i;
        }
    }

    LPResult solve(const std::vector<Rational>& objective) {
        LPResult result;
        // Phase 1: maximize minus the sum of artificials.
        obj_.assign(cols_, 0);
        obj_value_ = 0;
        for (std::size_t i = 0; i < m_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) obj_[j] -= t_[i][j];
            obj_value_ -= rhs_[i];
        }
        if (!optimize()) throw InternalError("phase one of the simplex cannot be unbounded");
        if (obj_value_ != 0) {
            result.status = LPResult::Status::infeasible;
            result.pivots = pivots_;
            return result;
        }
        evict_artificials();
        for (std::size_t j = n_; j < cols_; ++j) banned_[j] = true;

        // Phase 2.
        obj_.assign(cols_, 0);
        obj_value_ = 0;
        for (std::size_t j = 0; j < n_; ++j) obj_[j] = -objective[j];
        for (std::size_t i = 0; i < t_.size(); ++i) {
            const auto& c = basis_[i] < n_ ? objective[basis_[i]] : Rational(0);
            if (c == 0) continue;
            for (std::size_t j = 0; j < cols_; ++j) {
                if (t_[i][j] != 0) obj_[j] += c * t_[i][j];
            }
            obj_value_ += c * rhs_[i];
        }
        result.pivots = pivots_;
        if (!optimize()) {
            result.status = LPResult::Status::unbounded;
            result.pivots = pivots_;
            return result;
        }
        result.status = LPResult::Status::optimal;
        result.value = obj_value_;
        result.solution.assign(n_, 0);
        for (std::size_t i = 0; i < t_.size(); ++i) {
            if (basis_[i] < n_) result.solution[basis_[i]] = rhs_[i];
        }
        result.pivots = pivots_;
        return result;
    }

private:
    // Returns false when the objective is unbounded.
    bool optimize() {
        unsigned degenerate_run = 0;
        while (true) {
            bool bland = degenerate_run >= opts_.degenerate_switch;
            std::size_t enter = cols_;
            for (std::size_t j = 0; j < cols_; ++j) {
                if (banned_[j] || obj_[j] >= 0) continue;
                if (enter == cols_ || (!bland && obj_[j] < obj_[enter])) enter = j;
                if (bland) break;
            }
            if (enter == cols_) return true;

            std::size_t leave = t_.size();
            Rational best_ratio;
            for (std::size_t i = 0; i < t_.size(); ++i) {
                if (t_[i][enter] <= 0) continue;
                Rational ratio = rhs_[i] / t_[i][enter];
                if (leave == t_.size() || ratio < best_ratio ||
                    (ratio == best_ratio && basis_[i] < basis_[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
            if (leave == t_.size()) return false;
            degenerate_run = best_ratio == 0 ? degenerate_run + 1 : 0;
            pivot(leave, enter);
        }
    }

    void pivot(std::size_t r, std::size_t c) {
        if (opts_.max_pivots && pivots_ >= opts_.max_pivots) {
            throw BudgetExceeded("LP pivot budget of " + std::to_string(opts_.max_pivots) + " exhausted");
        }
        ++pivots_;
        auto& row = t_[r];
        Rational inv = 1 / row[c];
        std::vector<std::size_t> nz;
        for (std::size_t j = 0; j < cols_; ++j) {
            if (row[j] != 0) {
                row[j] *= inv;
                nz.push_back(j);
            }
        }
        rhs_[r] *= inv;
        Rational f;
        for (std::size_t i = 0; i < t_.size(); ++i) {
            if (i == r || t_[i][c] == 0) continue;
            f = t_[i][c];
            for (auto j : nz) t_[i][j] -= f * row[j];
            rhs_[i] -= f * rhs_[r];
        }
        if (obj_[c] != 0) {
            f = obj_[c];
            for (auto j : nz) obj_[j] -= f * row[j];
            obj_value_ -= f * rhs_[r];
        }
        basis_[r] = c;
    }

    // After phase 1 every artificial still basic sits at zero: pivot it out or drop its redundant row.
    void evict_artificials() {
        for (std::size_t i = 0; i < t_.size();) {
            if (basis_[i] < n_) {
                ++i;
                continue;
            }
            std::size_t col = n_;
            for (std::size_t j = 0; j < n_; ++j) {
                if (t_[i][j] != 0) {
                    col = j;
                    break;
                }
            }
            if (col < n_) {
                pivot(i, col);
                ++i;
            } else {
                t_.erase(t_.begin() + static_cast<std::ptrdiff_t>(i));
                rhs_.erase(rhs_.begin() + static_cast<std::ptrdiff_t>(i));
                basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
            }
        }
    }

    const LPOptions& opts_;
    std::size_t n_, m_, cols_;
    std::vector<std::vector<Rational>> t_;
    std::vector<Rational> rhs_;
    std::vector<std::size_t> basis_;
    std::vector<bool> banned_;
    std::vector<Rational> obj_;
    Rational obj_value_;
    std::uint64_t pivots_ = 0;
};

} // namespace

LPResult solve_lp(const LinearProgram& lp, const LPOptions& opts) {
    if (lp.rhs.size() != lp.rows.size()) throw InputError("LP right-hand side length mismatch");
    if (lp.objective.size() != lp.variables) throw InputError("LP objective length mismatch");
    Tableau t(lp, opts);
    return t.solve(lp.objective);
}

} // namespace locorth
