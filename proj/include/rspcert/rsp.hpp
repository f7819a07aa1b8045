#pragma once

// Range space property (RSP) certification at a support and the uniqueness
// test for least-l1-norm nonnegative solutions of Ax = b.
//
// x >= 0 solving Ax = b is the unique minimizer of e^T x over
// {Ax = b, x >= 0} exactly when
//   (a) some eta = A^T y has eta_i = 1 on the support and eta_i < 1 off it, and
//   (b) the support columns A_S are linearly independent.
// Condition (a) is decided by the LP
//     min t  s.t.  (A_S)^T y = e,  (A_Sc)^T y <= t e,  t >= -1,  y free,
// whose optimum t* is below 1 iff (a) holds.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "rspcert/errors.hpp"
#include "rspcert/linalg.hpp"
#include "rspcert/matrix.hpp"
#include "rspcert/simplex.hpp"
#include "rspcert/tolerance.hpp"

namespace rspcert {

enum class Verdict { Yes, No, Marginal };

constexpr std::string_view to_string(Verdict v) noexcept {
    switch (v) {
    case Verdict::Yes: return "Yes";
    case Verdict::No: return "No";
    case Verdict::Marginal: return "Marginal";
    }
    return "Unknown";
}

/// No dominates Marginal dominates Yes.
constexpr Verdict combine(Verdict a, Verdict b) noexcept {
    if (a == Verdict::No || b == Verdict::No) {
        return Verdict::No;
    }
    if (a == Verdict::Marginal || b == Verdict::Marginal) {
        return Verdict::Marginal;
    }
    return Verdict::Yes;
}

struct RspCertificate {
    Verdict holds = Verdict::No;
    IndexSet support;
    Vec witness_eta;               ///< A^T y; empty when the equality system is infeasible
    Vec witness_y;
    std::optional<double> t_star;  ///< nullopt when the check LP is infeasible
    LpStatus lp_status = LpStatus::Infeasible;
    Vec weights;                   ///< empty for the unweighted property
};

/// x_i > zero_tol; throws NotNonnegative for x_i < -zero_tol.
inline IndexSet support_of(std::span<const double> x, const ToleranceConfig& tol) {
    if (!all_finite(x)) {
        throw Error(ErrorKind::InvalidArgument, "vector has non-finite entries");
    }
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < -tol.zero_tol) {
            throw Error(ErrorKind::NotNonnegative,
                        "entry " + std::to_string(i) + " = " + std::to_string(x[i]) + " is negative");
        }
        if (x[i] > tol.zero_tol) {
            s.push_back(i);
        }
    }
    return IndexSet(std::move(s));
}

namespace detail {

inline Verdict classify_margin(double t_star, const ToleranceConfig& tol) {
    if (t_star <= 1.0 - tol.rsp_margin) {
        return Verdict::Yes;
    }
    if (t_star >= 1.0 - tol.feas_tol) {
        return Verdict::No;
    }
    return Verdict::Marginal;
}

} // namespace detail

/// Decides the RSP of A^T at support S by solving the t* LP.
inline RspCertificate check_rsp_at(const Matrix& a, const IndexSet& s, const ToleranceConfig& tol = {}) {
    detail::require_valid(a, s);
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    RspCertificate cert;
    cert.support = s;
    if (s.empty()) {
        cert.holds = Verdict::Yes;
        cert.witness_y.assign(m, 0.0);
        cert.witness_eta.assign(n, 0.0);
        cert.t_star = -1.0;
        cert.lp_status = LpStatus::Optimal;
        return cert;
    }
    const IndexSet sc = s.complement(n);
    // Variables: y (m, free) | tau = t + 1 >= 0 | slack per off-support column.
    const std::size_t nv = m + 1 + sc.size();
    const std::size_t tau = m;
    Matrix b(n, nv);
    Vec p(n);
    std::size_t row = 0;
    for (std::size_t j : s) {
        for (std::size_t i = 0; i < m; ++i) {
            b(row, i) = a(i, j);
        }
        p[row++] = 1.0;
    }
    for (std::size_t k = 0; k < sc.size(); ++k) {
        const std::size_t j = sc[k];
        for (std::size_t i = 0; i < m; ++i) {
            b(row, i) = a(i, j);
        }
        b(row, tau) = -1.0;
        b(row, m + 1 + k) = 1.0;
        p[row++] = -1.0;
    }
    Vec c(nv, 0.0);
    c[tau] = 1.0;
    std::vector<bool> free(nv, false);
    std::fill(free.begin(), free.begin() + static_cast<std::ptrdiff_t>(m), true);
    const StandardLp lp(std::move(c), std::move(b), std::move(p), std::move(free));

    LpSolution sol;
    try {
        sol = solve(lp, tol);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::IterationLimit) {
            throw Error(ErrorKind::CertificateUnavailable, std::string("RSP check LP: ") + e.what());
        }
        throw;
    }
    cert.lp_status = sol.status;
    if (sol.status == LpStatus::Infeasible) {
        cert.holds = Verdict::No;
        return cert;
    }
    if (sol.status != LpStatus::Optimal || !verify_certificate(lp, sol, tol)) {
        throw Error(ErrorKind::CertificateUnavailable,
                    "RSP check LP at " + s.str() + " did not produce a verifiable optimum");
    }
    cert.witness_y.assign(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(m));
    cert.witness_eta = a.multiply_transposed(cert.witness_y);
    const double t = sol.x[tau] - 1.0;
    cert.t_star = t;
    // Decide from the recomputed witness so the reported verdict always
    // satisfies the witness invariants.
    double off_max = -1.0;
    for (std::size_t j : sc) {
        off_max = std::max(off_max, cert.witness_eta[j]);
    }
    cert.holds = combine(detail::classify_margin(t, tol), detail::classify_margin(off_max, tol));
    return cert;
}

/// Re-checks a certificate without any LP solve: eta = A^T y, eta_S = w_S and
/// eta_Sc <= w_Sc (1 - rsp_margin), with w = e for the unweighted property.
inline bool witness_valid(const Matrix& a, const RspCertificate& cert, const ToleranceConfig& tol) {
    if (cert.holds != Verdict::Yes) {
        return false;
    }
    const std::size_t n = a.cols();
    if (cert.witness_y.size() != a.rows() || cert.witness_eta.size() != n) {
        return false;
    }
    const Vec eta = a.multiply_transposed(cert.witness_y);
    const Vec w = cert.weights.empty() ? Vec(n, 1.0) : cert.weights;
    for (std::size_t j = 0; j < n; ++j) {
        if (std::abs(eta[j] - cert.witness_eta[j]) > tol.feas_tol * std::max(1.0, std::abs(eta[j]))) {
            return false;
        }
        if (cert.support.contains(j)) {
            if (std::abs(eta[j] - w[j]) > tol.feas_tol * std::max(1.0, w[j])) {
                return false;
            }
        } else if (eta[j] > w[j] * (1.0 - tol.rsp_margin) + 1e-12 * std::max(1.0, w[j])) {
            return false;
        }
    }
    return true;
}

enum class UniquenessReason { None, RspFailed, RankDeficient, Both };

constexpr std::string_view to_string(UniquenessReason r) noexcept {
    switch (r) {
    case UniquenessReason::None: return "None";
    case UniquenessReason::RspFailed: return "RspFailed";
    case UniquenessReason::RankDeficient: return "RankDeficient";
    case UniquenessReason::Both: return "Both";
    }
    return "Unknown";
}

struct UniquenessVerdict {
    Verdict unique = Verdict::No;
    RspCertificate rsp;
    bool full_column_rank = false;
    std::size_t rank_found = 0;
    bool rank_marginal = false;
    /// Rank of A_S stacked over a ones row, the alternative rank test.
    std::size_t augmented_rank = 0;
    bool augmented_full_rank = false;
    UniquenessReason reason = UniquenessReason::None;
};

namespace detail {

inline void require_solution(const Matrix& a, std::span<const double> b, std::span<const double> x,
                             const ToleranceConfig& tol) {
    if (b.size() != a.rows() || x.size() != a.cols()) {
        throw Error(ErrorKind::InvalidArgument, "dimension mismatch between A, b and x");
    }
    if (!all_finite(b) || !all_finite(x)) {
        throw Error(ErrorKind::InvalidArgument, "b and x must be finite");
    }
    const Vec ax = a.multiply(x);
    double resid = 0.0;
    for (std::size_t i = 0; i < ax.size(); ++i) {
        resid = std::max(resid, std::abs(ax[i] - b[i]));
    }
    if (resid > tol.feas_tol * std::max(1.0, norm_inf(b))) {
        throw Error(ErrorKind::NotASolution, "||Ax - b||_inf = " + std::to_string(resid));
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < -tol.zero_tol) {
            throw Error(ErrorKind::NotNonnegative, "entry " + std::to_string(i) + " is negative");
        }
    }
}

inline UniquenessVerdict assemble(const Matrix& a, RspCertificate rsp, const ToleranceConfig& tol) {
    UniquenessVerdict v;
    const RankInfo ri = rank_info(a, rsp.support, tol);
    const RankInfo ai = augmented_rank_info(a, rsp.support, tol);
    v.rank_found = ri.rank;
    v.full_column_rank = ri.rank == rsp.support.size();
    v.rank_marginal = ri.marginal;
    v.augmented_rank = ai.rank;
    v.augmented_full_rank = ai.rank == rsp.support.size();
    const bool rsp_failed = rsp.holds == Verdict::No;
    const bool rank_failed = !v.full_column_rank && !v.rank_marginal;
    if (rsp_failed && rank_failed) {
        v.reason = UniquenessReason::Both;
    } else if (rsp_failed) {
        v.reason = UniquenessReason::RspFailed;
    } else if (rank_failed) {
        v.reason = UniquenessReason::RankDeficient;
    }
    if (v.reason != UniquenessReason::None) {
        v.unique = Verdict::No;
    } else if (rsp.holds == Verdict::Yes && v.full_column_rank && !v.rank_marginal) {
        v.unique = Verdict::Yes;
    } else {
        v.unique = Verdict::Marginal;
    }
    v.rsp = std::move(rsp);
    return v;
}

} // namespace detail

/// Decides whether the nonnegative solution x is the unique least-l1-norm
/// nonnegative solution of Ax = b.
inline UniquenessVerdict certify_uniqueness(const Matrix& a, std::span<const double> b, std::span<const double> x,
                                            const ToleranceConfig& tol = {}) {
    detail::require_solution(a, b, x, tol);
    const IndexSet s = support_of(x, tol);
    return detail::assemble(a, check_rsp_at(a, s, tol), tol);
}

struct L1Solution {
    Vec x;
    double objective = 0.0;
};

/// min e^T x  s.t.  Ax = b, x >= 0. Throws Infeasible.
inline L1Solution solve_l1(const Matrix& a, std::span<const double> b, const ToleranceConfig& tol = {}) {
    if (b.size() != a.rows()) {
        throw Error(ErrorKind::InvalidArgument, "b has the wrong length");
    }
    const StandardLp lp(Vec(a.cols(), 1.0), a, Vec(b.begin(), b.end()));
    const LpSolution sol = solve(lp, tol);
    if (sol.status == LpStatus::Infeasible) {
        throw Error(ErrorKind::Infeasible, "Ax = b has no nonnegative solution");
    }
    if (sol.status != LpStatus::Optimal || !verify_certificate(lp, sol, tol)) {
        throw Error(ErrorKind::CertificateUnavailable, "l1 LP did not produce a verifiable optimum");
    }
    L1Solution out{sol.x, 0.0};
    for (double& v : out.x) {
        if (v < 0.0 && v > -tol.zero_tol) {
            v = 0.0;
        }
    }
    out.objective = std::accumulate(out.x.begin(), out.x.end(), 0.0);
    return out;
}

struct CertifiedSolution {
    L1Solution solution;
    UniquenessVerdict verdict;
};

inline CertifiedSolution solve_and_certify(const Matrix& a, std::span<const double> b, const ToleranceConfig& tol = {}) {
    L1Solution sol = solve_l1(a, b, tol);
    UniquenessVerdict v = certify_uniqueness(a, b, sol.x, tol);
    return {std::move(sol), std::move(v)};
}

namespace detail {

inline Vec reciprocal_weights(std::span<const double> w, std::size_t n) {
    if (w.size() != n) {
        throw Error(ErrorKind::InvalidArgument, "weight vector has the wrong length");
    }
    Vec inv(n);
    for (std::size_t j = 0; j < n; ++j) {
        if (!(std::isfinite(w[j]) && w[j] > 0.0)) {
            throw Error(ErrorKind::NonpositiveWeight, "weight " + std::to_string(j) + " is not positive");
        }
        inv[j] = 1.0 / w[j];
    }
    return inv;
}

} // namespace detail

/// Weighted RSP: eta in R(A^T) with eta_i = w_i on S and eta_i < w_i off S.
/// Decided on the rescaled matrix A W^{-1}; the multiplier y is shared, so
/// the reported eta = A^T y is in the original scale.
inline RspCertificate check_weighted_rsp_at(const Matrix& a, const IndexSet& s, std::span<const double> w,
                                            const ToleranceConfig& tol = {}) {
    const Matrix scaled = a.scale_columns(detail::reciprocal_weights(w, a.cols()));
    RspCertificate cert = check_rsp_at(scaled, s, tol);
    if (!cert.witness_y.empty()) {
        cert.witness_eta = a.multiply_transposed(cert.witness_y);
    }
    cert.weights.assign(w.begin(), w.end());
    return cert;
}

/// Uniqueness of x as minimizer of w^T x over {Ax = b, x >= 0}.
inline UniquenessVerdict certify_weighted_uniqueness(const Matrix& a, std::span<const double> b,
                                                     std::span<const double> w, std::span<const double> x,
                                                     const ToleranceConfig& tol = {}) {
    detail::reciprocal_weights(w, a.cols());
    detail::require_solution(a, b, x, tol);
    const IndexSet s = support_of(x, tol);
    return detail::assemble(a, check_weighted_rsp_at(a, s, w, tol), tol);
}

struct LpSparsestResult {
    double d_star = 0.0;
    Matrix augmented_matrix;
    Vec augmented_rhs;
    CertifiedSolution certified;
};

/// Sparsest optimal solutions of min{c^T x : Ax = b, x >= 0}: solve for d*,
/// then certify on [A; c^T] x = [b; d*].
inline LpSparsestResult lp_sparsest_pipeline(const Matrix& a, std::span<const double> b, std::span<const double> c,
                                             const ToleranceConfig& tol = {}) {
    if (c.size() != a.cols() || b.size() != a.rows()) {
        throw Error(ErrorKind::InvalidArgument, "dimension mismatch between A, b and c");
    }
    const StandardLp lp(Vec(c.begin(), c.end()), a, Vec(b.begin(), b.end()));
    const LpSolution sol = solve(lp, tol);
    if (sol.status == LpStatus::Infeasible) {
        throw Error(ErrorKind::Infeasible, "the LP has no feasible point");
    }
    if (sol.status == LpStatus::Unbounded) {
        throw Error(ErrorKind::Unbounded, "the LP objective is unbounded below");
    }
    if (!verify_certificate(lp, sol, tol)) {
        throw Error(ErrorKind::CertificateUnavailable, "LP optimum failed verification");
    }
    LpSparsestResult out;
    out.d_star = sol.objective_value;
    out.augmented_matrix = a.with_row(c);
    out.augmented_rhs.assign(b.begin(), b.end());
    out.augmented_rhs.push_back(out.d_star);
    out.certified = solve_and_certify(out.augmented_matrix, out.augmented_rhs, tol);
    return out;
}

} // namespace rspcert
