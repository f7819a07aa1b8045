#pragma once

// Uniform and non-uniform recovery certification by exhaustive subset checks.
//
// Subsets are visited in increasing size, lexicographically within a size;
// "first" below always refers to that order.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "rspcert/errors.hpp"
#include "rspcert/l0_oracle.hpp"
#include "rspcert/linalg.hpp"
#include "rspcert/rsp.hpp"
#include "rspcert/tolerance.hpp"

namespace rspcert {

enum class RecoveryProperty { Rsp, Wrsp, Prsp, Pwrsp };

constexpr std::string_view to_string(RecoveryProperty p) noexcept {
    switch (p) {
    case RecoveryProperty::Rsp: return "RSP_K";
    case RecoveryProperty::Wrsp: return "WRSP_K";
    case RecoveryProperty::Prsp: return "PRSP_K";
    case RecoveryProperty::Pwrsp: return "PWRSP_K";
    }
    return "Unknown";
}

/// Which supports a property quantifies over.
struct SubsetScope {
    bool exact_size = false;      ///< |S| = K instead of 1 <= |S| <= K
    bool full_rank_only = false;  ///< skip S with rank(A_S) < |S|

    static constexpr SubsetScope of(RecoveryProperty p) noexcept {
        switch (p) {
        case RecoveryProperty::Rsp: return {false, false};
        case RecoveryProperty::Wrsp: return {false, true};
        case RecoveryProperty::Prsp: return {true, false};
        case RecoveryProperty::Pwrsp: return {true, true};
        }
        return {};
    }
};

enum class RecoveryFailure { None, SubsetFailed, NoFullRankSubset };

constexpr std::string_view to_string(RecoveryFailure f) noexcept {
    switch (f) {
    case RecoveryFailure::None: return "None";
    case RecoveryFailure::SubsetFailed: return "SubsetFailed";
    case RecoveryFailure::NoFullRankSubset: return "NoFullRankSubset";
    }
    return "Unknown";
}

struct RecoveryReport {
    RecoveryProperty property = RecoveryProperty::Rsp;
    std::size_t k = 0;
    Verdict holds = Verdict::No;
    RecoveryFailure failure = RecoveryFailure::None;
    std::optional<IndexSet> counterexample;  ///< first failing subset
    std::uint64_t subsets_checked = 0;
    std::uint64_t subsets_skipped = 0;       ///< rank-deficient, excluded by the scope
    std::vector<IndexSet> marginal_subsets;
    /// Some |S| < K failed while every |S| = K passed.
    bool fails_below_but_passes_at_k = false;
};

namespace detail {

inline void require_order(const Matrix& a, std::size_t k, SubsetScope scope, std::uint64_t budget) {
    if (k < 1 || k > a.cols()) {
        throw Error(ErrorKind::InvalidArgument, "order K must satisfy 1 <= K <= n");
    }
    const auto total = binomial_sum(a.cols(), scope.exact_size ? k : 1, k);
    if (total > budget) {
        throw Error(ErrorKind::BudgetExceeded, std::to_string(total) + " subsets exceed the budget of " +
                                                   std::to_string(budget));
    }
}

/// Some K-subset has full column rank.
inline bool has_full_rank_subset(const Matrix& a, std::size_t k, const ToleranceConfig& tol) {
    bool found = false;
    for_each_subset(a.cols(), k, [&](const IndexSet& s) {
        found = has_full_column_rank(a, s, tol);
        return !found;
    });
    return found;
}

} // namespace detail

/// Exhaustive certification of one order-K property.
inline RecoveryReport certify_order_k(const Matrix& a, std::size_t k, RecoveryProperty property,
                                      const ToleranceConfig& tol = {},
                                      std::uint64_t budget = EnumerationBudget{}.lp_subsets) {
    const SubsetScope scope = SubsetScope::of(property);
    detail::require_order(a, k, scope, budget);
    RecoveryReport report;
    report.property = property;
    report.k = k;
    if (property == RecoveryProperty::Wrsp && !detail::has_full_rank_subset(a, k, tol)) {
        report.holds = Verdict::No;
        report.failure = RecoveryFailure::NoFullRankSubset;
        return report;
    }
    bool below_failed = false;
    bool top_failed = false;
    Verdict verdict = Verdict::Yes;
    for (std::size_t size = scope.exact_size ? k : 1; size <= k; ++size) {
        for_each_subset(a.cols(), size, [&](const IndexSet& s) {
            if (scope.full_rank_only) {
                const RankInfo ri = rank_info(a, s, tol);
                if (ri.rank < s.size()) {
                    ++report.subsets_skipped;
                    if (ri.marginal) {
                        report.marginal_subsets.push_back(s);
                        verdict = combine(verdict, Verdict::Marginal);
                    }
                    return true;
                }
            }
            ++report.subsets_checked;
            const Verdict v = check_rsp_at(a, s, tol).holds;
            if (v == Verdict::Marginal) {
                report.marginal_subsets.push_back(s);
            } else if (v == Verdict::No) {
                if (!report.counterexample) {
                    report.counterexample = s;
                }
                (size < k ? below_failed : top_failed) = true;
            }
            verdict = combine(verdict, v);
            return true;
        });
    }
    report.holds = verdict;
    report.failure = verdict == Verdict::No ? RecoveryFailure::SubsetFailed : RecoveryFailure::None;
    report.fails_below_but_passes_at_k = below_failed && !top_failed;
    return report;
}

/// RSP of order K: the RSP holds at every S with 1 <= |S| <= K.
inline RecoveryReport rsp_order_k(const Matrix& a, std::size_t k, const ToleranceConfig& tol = {},
                                  std::uint64_t budget = EnumerationBudget{}.lp_subsets) {
    return certify_order_k(a, k, RecoveryProperty::Rsp, tol, budget);
}

/// Weak RSP of order K: some K columns are independent, and the RSP holds at
/// every independent S with |S| <= K.
inline RecoveryReport wrsp_order_k(const Matrix& a, std::size_t k, const ToleranceConfig& tol = {},
                                   std::uint64_t budget = EnumerationBudget{}.lp_subsets) {
    return certify_order_k(a, k, RecoveryProperty::Wrsp, tol, budget);
}

/// Partial RSP of order K: the RSP holds at every S with |S| = K.
inline RecoveryReport prsp_order_k(const Matrix& a, std::size_t k, const ToleranceConfig& tol = {},
                                   std::uint64_t budget = EnumerationBudget{}.lp_subsets) {
    return certify_order_k(a, k, RecoveryProperty::Prsp, tol, budget);
}

/// Partial weak RSP of order K: the RSP holds at every independent S, |S| = K.
inline RecoveryReport pwrsp_order_k(const Matrix& a, std::size_t k, const ToleranceConfig& tol = {},
                                    std::uint64_t budget = EnumerationBudget{}.lp_subsets) {
    return certify_order_k(a, k, RecoveryProperty::Pwrsp, tol, budget);
}

struct RecoveryOracleReport {
    bool recovers = true;                     ///< every in-scope support was recovered
    std::optional<IndexSet> failing_support;  ///< first support that was not
    std::vector<IndexSet> marginal_supports;
    std::uint64_t supports_checked = 0;
    std::uint64_t seed = 0;
    std::size_t trials_per_support = 1;
    /// Only meaningful for full-rank scopes: some K-subset is independent.
    bool full_rank_subset_exists = true;
};

/// Ground truth by simulation: for each in-scope support S draw x > 0 on S
/// (entries uniform in [0.1, 1]), measure y = Ax, and require that l1
/// minimization certifies a unique optimum equal to x within 1e-6.
inline RecoveryOracleReport recovery_oracle(const Matrix& a, std::size_t k, SubsetScope scope,
                                            std::size_t trials_per_support, std::uint64_t seed,
                                            const ToleranceConfig& tol = {},
                                            std::uint64_t budget = EnumerationBudget{}.lp_subsets) {
    detail::require_order(a, k, scope, budget);
    if (trials_per_support == 0) {
        throw Error(ErrorKind::InvalidArgument, "trials_per_support must be positive");
    }
    RecoveryOracleReport report;
    report.seed = seed;
    report.trials_per_support = trials_per_support;
    if (scope.full_rank_only) {
        report.full_rank_subset_exists = detail::has_full_rank_subset(a, k, tol);
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> magnitude(0.1, 1.0);
    const std::size_t n = a.cols();
    for (std::size_t size = scope.exact_size ? k : 1; size <= k; ++size) {
        for_each_subset(n, size, [&](const IndexSet& s) {
            if (scope.full_rank_only && !has_full_column_rank(a, s, tol)) {
                return true;
            }
            ++report.supports_checked;
            bool marginal = false;
            bool failed = false;
            for (std::size_t trial = 0; trial < trials_per_support; ++trial) {
                Vec x(n, 0.0);
                for (std::size_t j : s) {
                    x[j] = magnitude(rng);
                }
                const Vec y = a.multiply(x);
                const CertifiedSolution got = solve_and_certify(a, y, tol);
                double err = 0.0;
                for (std::size_t j = 0; j < n; ++j) {
                    err = std::max(err, std::abs(got.solution.x[j] - x[j]));
                }
                if (got.verdict.unique == Verdict::Marginal) {
                    marginal = true;
                } else if (got.verdict.unique != Verdict::Yes || err > 1e-6) {
                    failed = true;
                }
            }
            if (failed) {
                report.recovers = false;
                if (!report.failing_support) {
                    report.failing_support = s;
                }
            } else if (marginal) {
                report.marginal_supports.push_back(s);
            }
            return true;
        });
    }
    return report;
}

/// Every x >= 0 with ||x||_0 <= K is recovered by l1 minimization.
inline RecoveryOracleReport uniform_recovery_oracle(const Matrix& a, std::size_t k, std::size_t trials_per_support,
                                                    std::uint64_t seed, const ToleranceConfig& tol = {},
                                                    std::uint64_t budget = EnumerationBudget{}.lp_subsets) {
    return recovery_oracle(a, k, SubsetScope{}, trials_per_support, seed, tol, budget);
}

/// The oracle's verdict on the quantifier of `property`, comparable with
/// certify_order_k. Marginal when any support was marginal and none failed.
inline Verdict oracle_verdict(const RecoveryOracleReport& r, RecoveryProperty property) {
    if (property == RecoveryProperty::Wrsp && !r.full_rank_subset_exists) {
        return Verdict::No;
    }
    if (!r.recovers) {
        return Verdict::No;
    }
    return r.marginal_supports.empty() ? Verdict::Yes : Verdict::Marginal;
}

/// RSP of order K forces K < spark(A). True when the premise fails.
inline bool spark_consistency(const Matrix& a, std::size_t k, const ToleranceConfig& tol = {},
                              const EnumerationBudget& budget = {}) {
    if (rsp_order_k(a, k, tol, budget.lp_subsets).holds != Verdict::Yes) {
        return true;
    }
    return k < spark(a, tol, budget.subsets);
}

/// Under the RSP of order K, every x >= 0 with ||x||_0 <= K is the unique
/// sparsest nonnegative solution of Az = Ax. True when the premise fails.
inline bool unique_sparsest_consequence(const Matrix& a, std::size_t k, std::uint64_t seed,
                                        const ToleranceConfig& tol = {}, const EnumerationBudget& budget = {}) {
    if (rsp_order_k(a, k, tol, budget.lp_subsets).holds != Verdict::Yes) {
        return true;
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> magnitude(0.1, 1.0);
    bool ok = true;
    for (std::size_t size = 1; size <= k && ok; ++size) {
        for_each_subset(a.cols(), size, [&](const IndexSet& s) {
            Vec x(a.cols(), 0.0);
            for (std::size_t j : s) {
                x[j] = magnitude(rng);
            }
            const SparsestReport r = sparsest_supports(a, a.multiply(x), size, tol, budget.subsets);
            ok = r.k_star == size && r.supports.size() == 1 && r.supports.front() == s;
            return ok;
        });
    }
    return ok;
}

} // namespace rspcert
