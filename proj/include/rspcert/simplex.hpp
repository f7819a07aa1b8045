#pragma once

// Dense two-phase tableau simplex for
//
//     min c^T x   s.t.  B x = p,  x_j >= 0 unless free_mask[j].
//
// Free variables are split into a difference of nonnegative columns. Phase 1
// adds one artificial per row and keeps those columns in the tableau through
// phase 2 so that the multipliers y = c_B^T B^{-1} can be read from their
// reduced costs.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rspcert/errors.hpp"
#include "rspcert/matrix.hpp"
#include "rspcert/tolerance.hpp"

namespace rspcert {

struct StandardLp {
    Vec objective;
    Matrix constraints;
    Vec rhs;
    std::vector<bool> free_mask;  ///< empty means every variable is nonnegative

    StandardLp(Vec c, Matrix b, Vec p, std::vector<bool> free = {})
        : objective(std::move(c)), constraints(std::move(b)), rhs(std::move(p)), free_mask(std::move(free)) {
        if (free_mask.empty()) {
            free_mask.assign(objective.size(), false);
        }
        if (objective.size() != constraints.cols() || rhs.size() != constraints.rows() ||
            free_mask.size() != objective.size()) {
            throw Error(ErrorKind::InvalidArgument, "inconsistent LP dimensions");
        }
        if (!all_finite(objective) || !all_finite(rhs)) {
            throw Error(ErrorKind::InvalidArgument, "LP data must be finite");
        }
    }

    [[nodiscard]] std::size_t num_rows() const { return constraints.rows(); }
    [[nodiscard]] std::size_t num_vars() const { return constraints.cols(); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

constexpr std::string_view to_string(LpStatus s) noexcept {
    switch (s) {
    case LpStatus::Optimal: return "Optimal";
    case LpStatus::Infeasible: return "Infeasible";
    case LpStatus::Unbounded: return "Unbounded";
    }
    return "Unknown";
}

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    Vec x;                 ///< primal, net value for free variables
    Vec y;                 ///< equality multipliers
    Vec reduced_costs;     ///< s = c - B^T y
    double objective_value = 0.0;
    Vec ray;               ///< improving direction when Unbounded
    double phase1_objective = 0.0;
    std::size_t pivots = 0;
};

struct SimplexOptions {
    double pivot_tol = 1e-9;
    double cost_tol = 1e-10;
    std::size_t degenerate_run_for_bland = 10;
    /// Pivot cap is iteration_factor * (rows + columns) of the tableau.
    std::size_t iteration_factor = 50;
};

namespace detail {

class Tableau {
  public:
    Tableau(const StandardLp& lp, const ToleranceConfig& tol, const SimplexOptions& opt)
        : lp_(lp), tol_(tol), opt_(opt), m_(lp.num_rows()), n_(lp.num_vars()) {
        for (std::size_t j = 0; j < n_; ++j) {
            if (lp.free_mask[j]) {
                split_of_.push_back(j);
            }
        }
        structural_ = n_ + split_of_.size();
        cols_ = structural_ + m_;
        width_ = cols_ + 1;
        t_.assign(m_ * width_, 0.0);
        sign_.assign(m_, 1.0);
        basis_.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            sign_[i] = lp.rhs[i] < 0.0 ? -1.0 : 1.0;
            for (std::size_t j = 0; j < n_; ++j) {
                at(i, j) = sign_[i] * lp.constraints(i, j);
            }
            for (std::size_t k = 0; k < split_of_.size(); ++k) {
                at(i, n_ + k) = -sign_[i] * lp.constraints(i, split_of_[k]);
            }
            at(i, structural_ + i) = 1.0;
            rhs(i) = sign_[i] * lp.rhs[i];
            basis_[i] = structural_ + i;
        }
        in_basis_.assign(cols_, false);
        for (std::size_t i = 0; i < m_; ++i) {
            in_basis_[structural_ + i] = true;
        }
        cost_.assign(cols_, 0.0);
        limit_ = opt_.iteration_factor * (m_ + cols_);
    }

    LpSolution run() {
        LpSolution sol;
        // Phase 1: minimize the sum of artificials.
        std::fill(cost_.begin(), cost_.end(), 0.0);
        for (std::size_t i = 0; i < m_; ++i) {
            cost_[structural_ + i] = 1.0;
        }
        price();
        iterate(/*allow_artificial=*/true);  // bounded below by zero
        sol.phase1_objective = 0.0;
        for (std::size_t i = 0; i < m_; ++i) {
            if (is_artificial(basis_[i])) {
                sol.phase1_objective += rhs(i);
            }
        }
        if (sol.phase1_objective > tol_.feas_tol * std::max(1.0, norm_inf(lp_.rhs))) {
            sol.status = LpStatus::Infeasible;
            sol.pivots = pivots_;
            return sol;
        }
        drive_out_artificials();

        // Phase 2: original costs; artificials may not re-enter.
        std::fill(cost_.begin(), cost_.end(), 0.0);
        for (std::size_t j = 0; j < n_; ++j) {
            cost_[j] = lp_.objective[j];
        }
        for (std::size_t k = 0; k < split_of_.size(); ++k) {
            cost_[n_ + k] = -lp_.objective[split_of_[k]];
        }
        price();
        const auto entering_unbounded = iterate(/*allow_artificial=*/false);
        sol.pivots = pivots_;
        if (entering_unbounded) {
            sol.status = LpStatus::Unbounded;
            sol.ray = ray_for(*entering_unbounded);
            sol.x = primal();
            return sol;
        }
        sol.status = LpStatus::Optimal;
        sol.x = primal();
        sol.y.assign(m_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) {
            // reduced cost of artificial i is -y'_i for the sign-normalized rows
            sol.y[i] = -sign_[i] * reduced_[structural_ + i];
        }
        sol.reduced_costs = lp_.objective;
        const Vec bty = lp_.constraints.multiply_transposed(sol.y);
        for (std::size_t j = 0; j < n_; ++j) {
            sol.reduced_costs[j] -= bty[j];
        }
        sol.objective_value = dot(lp_.objective, sol.x);
        return sol;
    }

  private:
    double& at(std::size_t i, std::size_t j) { return t_[i * width_ + j]; }
    double& rhs(std::size_t i) { return t_[i * width_ + cols_]; }
    [[nodiscard]] bool is_artificial(std::size_t j) const { return j >= structural_; }

    void price() {
        reduced_ = cost_;
        for (std::size_t i = 0; i < m_; ++i) {
            const double cb = cost_[basis_[i]];
            if (cb == 0.0) {
                continue;
            }
            for (std::size_t j = 0; j < cols_; ++j) {
                reduced_[j] -= cb * at(i, j);
            }
        }
    }

    void pivot(std::size_t r, std::size_t q) {
        if (++pivots_ > limit_) {
            throw Error(ErrorKind::IterationLimit,
                        "simplex exceeded " + std::to_string(limit_) + " pivots");
        }
        const double pv = at(r, q);
        for (std::size_t j = 0; j < width_; ++j) {
            at(r, j) /= pv;
        }
        at(r, q) = 1.0;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r) {
                continue;
            }
            const double f = at(i, q);
            if (f == 0.0) {
                continue;
            }
            for (std::size_t j = 0; j < width_; ++j) {
                at(i, j) -= f * at(r, j);
            }
            at(i, q) = 0.0;
            if (std::abs(rhs(i)) < 1e-14) {
                rhs(i) = 0.0;
            }
        }
        const double f = reduced_[q];
        if (f != 0.0) {
            for (std::size_t j = 0; j < cols_; ++j) {
                reduced_[j] -= f * at(r, j);
            }
            reduced_[q] = 0.0;
        }
        in_basis_[basis_[r]] = false;
        in_basis_[q] = true;
        basis_[r] = q;
    }

    // Returns the entering column of an unbounded ray, or nullopt at optimum.
    std::optional<std::size_t> iterate(bool allow_artificial) {
        bool bland = false;
        std::size_t degenerate_run = 0;
        const std::size_t eligible = allow_artificial ? cols_ : structural_;
        while (true) {
            std::optional<std::size_t> q;
            double best = -opt_.cost_tol;
            for (std::size_t j = 0; j < eligible; ++j) {
                if (reduced_[j] < -opt_.cost_tol && is_nonbasic(j)) {
                    if (bland) {
                        q = j;
                        break;
                    }
                    if (reduced_[j] < best) {
                        best = reduced_[j];
                        q = j;
                    }
                }
            }
            if (!q) {
                return std::nullopt;
            }
            std::optional<std::size_t> r;
            double ratio = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m_; ++i) {
                const double a = at(i, *q);
                if (a <= opt_.pivot_tol) {
                    continue;
                }
                const double t = std::max(0.0, rhs(i)) / a;
                const double eps = 1e-12 * std::max(1.0, std::abs(ratio));
                if (!r || t < ratio - eps) {
                    ratio = t;
                    r = i;
                } else if (t <= ratio + eps && basis_[i] < basis_[*r]) {
                    r = i;
                }
            }
            if (!r) {
                return q;
            }
            if (ratio <= 1e-12) {
                if (++degenerate_run >= opt_.degenerate_run_for_bland) {
                    bland = true;
                }
            } else {
                degenerate_run = 0;
            }
            pivot(*r, *q);
        }
    }

    [[nodiscard]] bool is_nonbasic(std::size_t j) const { return !in_basis_[j]; }

    void drive_out_artificials() {
        for (std::size_t i = 0; i < m_; ++i) {
            if (!is_artificial(basis_[i])) {
                continue;
            }
            std::optional<std::size_t> q;
            double best = opt_.pivot_tol;
            for (std::size_t j = 0; j < structural_; ++j) {
                if (std::abs(at(i, j)) > best && is_nonbasic(j)) {
                    best = std::abs(at(i, j));
                    q = j;
                }
            }
            // No candidate: the row is redundant and its artificial stays at zero.
            if (q) {
                pivot(i, *q);
            }
        }
    }

    [[nodiscard]] Vec structural_values() {
        Vec v(structural_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) {
            if (!is_artificial(basis_[i])) {
                v[basis_[i]] = rhs(i);
            }
        }
        return v;
    }

    [[nodiscard]] Vec fold_split(const Vec& v) const {
        Vec x(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n_));
        for (std::size_t k = 0; k < split_of_.size(); ++k) {
            x[split_of_[k]] -= v[n_ + k];
        }
        return x;
    }

    Vec primal() { return fold_split(structural_values()); }

    Vec ray_for(std::size_t q) {
        Vec d(structural_, 0.0);
        d[q] = 1.0;
        for (std::size_t i = 0; i < m_; ++i) {
            if (!is_artificial(basis_[i])) {
                d[basis_[i]] = -at(i, q);
            }
        }
        return fold_split(d);
    }

    const StandardLp& lp_;
    ToleranceConfig tol_;
    SimplexOptions opt_;
    std::size_t m_;
    std::size_t n_;
    std::vector<std::size_t> split_of_;
    std::size_t structural_ = 0;
    std::size_t cols_ = 0;
    std::size_t width_ = 0;
    std::vector<double> t_;
    std::vector<double> sign_;
    std::vector<std::size_t> basis_;
    std::vector<bool> in_basis_;
    std::vector<double> cost_;
    std::vector<double> reduced_;
    std::size_t pivots_ = 0;
    std::size_t limit_ = 0;
};

} // namespace detail

/// Solves a standard-form LP. Throws Error(IterationLimit) on pivot overflow.
inline LpSolution solve(const StandardLp& lp, const ToleranceConfig& tol = {}, const SimplexOptions& opt = {}) {
    detail::Tableau tableau(lp, tol, opt);
    return tableau.run();
}

/// Residual-level recheck of primal feasibility, dual feasibility,
/// complementary slackness and the duality gap. Recomputes s = c - B^T y.
inline bool verify_certificate(const StandardLp& lp, const LpSolution& sol, const ToleranceConfig& tol) {
    if (sol.status != LpStatus::Optimal) {
        return false;
    }
    const std::size_t m = lp.num_rows();
    const std::size_t n = lp.num_vars();
    if (sol.x.size() != n || sol.y.size() != m || !all_finite(sol.x) || !all_finite(sol.y)) {
        return false;
    }
    const Vec bx = lp.constraints.multiply(sol.x);
    double resid = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        resid = std::max(resid, std::abs(bx[i] - lp.rhs[i]));
    }
    if (resid > tol.feas_tol * std::max(1.0, norm_inf(lp.rhs))) {
        return false;
    }
    const Vec bty = lp.constraints.multiply_transposed(sol.y);
    for (std::size_t j = 0; j < n; ++j) {
        const double s = lp.objective[j] - bty[j];
        if (lp.free_mask[j]) {
            if (std::abs(s) > tol.feas_tol) {
                return false;
            }
        } else {
            if (sol.x[j] < -tol.feas_tol || s < -tol.feas_tol) {
                return false;
            }
        }
        if (std::abs(sol.x[j] * s) > tol.gap_tol) {
            return false;
        }
    }
    const double primal_obj = dot(lp.objective, sol.x);
    const double dual_obj = dot(lp.rhs, sol.y);
    return std::abs(primal_obj - dual_obj) <= tol.gap_tol * std::max(1.0, std::abs(primal_obj));
}

} // namespace rspcert
