#pragma once

// Exhaustive ground truth for the sparsest nonnegative solutions of Ax = b.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rspcert/errors.hpp"
#include "rspcert/linalg.hpp"
#include "rspcert/rsp.hpp"
#include "rspcert/simplex.hpp"
#include "rspcert/tolerance.hpp"

namespace rspcert {

struct SparsestReport {
    std::size_t k_star = 0;
    std::vector<IndexSet> supports;          ///< sorted, pairwise distinct
    std::vector<Vec> representatives;        ///< one full-length x per support
    std::vector<bool> unique_within_support; ///< A_S has full column rank
    std::uint64_t subsets_checked = 0;
};

/// Nonnegative solution of A_S z = b via a phase-1 LP, scattered to length n.
inline std::optional<Vec> feasible_on_support(const Matrix& a, std::span<const double> b, const IndexSet& s,
                                              const ToleranceConfig& tol) {
    if (s.empty()) {
        if (norm_inf(b) <= tol.feas_tol) {
            return Vec(a.cols(), 0.0);
        }
        return std::nullopt;
    }
    const StandardLp lp(Vec(s.size(), 0.0), a.columns(s), Vec(b.begin(), b.end()));
    const LpSolution sol = solve(lp, tol);
    if (sol.status != LpStatus::Optimal) {
        return std::nullopt;
    }
    Vec x(a.cols(), 0.0);
    for (std::size_t k = 0; k < s.size(); ++k) {
        x[s[k]] = std::max(0.0, sol.x[k]);
    }
    return x;
}

/// Smallest k admitting a nonnegative solution supported on k columns, with
/// every such support. Lexicographic enumeration in increasing k.
inline SparsestReport sparsest_supports(const Matrix& a, std::span<const double> b, std::size_t max_k,
                                        const ToleranceConfig& tol = {},
                                        std::uint64_t budget = EnumerationBudget{}.subsets) {
    const std::size_t n = a.cols();
    if (b.size() != a.rows()) {
        throw Error(ErrorKind::InvalidArgument, "b has the wrong length");
    }
    if (max_k > n) {
        throw Error(ErrorKind::InvalidArgument, "max_k exceeds the number of columns");
    }
    SparsestReport report;
    for (std::size_t k = 0; k <= max_k; ++k) {
        const auto level = binomial(n, k);
        if (report.subsets_checked + level > budget || level == std::numeric_limits<std::uint64_t>::max()) {
            throw Error(ErrorKind::BudgetExceeded, "sparsest-support enumeration at size " + std::to_string(k) +
                                                       " exceeds " + std::to_string(budget) + " subsets");
        }
        std::vector<std::pair<IndexSet, Vec>> found;
        for_each_subset(n, k, [&](const IndexSet& s) {
            ++report.subsets_checked;
            if (auto x = feasible_on_support(a, b, s, tol)) {
                // Attribute the representative to its exact support.
                IndexSet exact = support_of(*x, tol);
                found.emplace_back(std::move(exact), std::move(*x));
            }
            return true;
        });
        if (found.empty()) {
            continue;
        }
        std::size_t smallest = k;
        for (const auto& f : found) {
            smallest = std::min(smallest, f.first.size());
        }
        std::sort(found.begin(), found.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
        report.k_star = smallest;
        for (auto& f : found) {
            if (f.first.size() != smallest ||
                (!report.supports.empty() && report.supports.back() == f.first)) {
                continue;
            }
            report.unique_within_support.push_back(has_full_column_rank(a, f.first, tol));
            report.supports.push_back(std::move(f.first));
            report.representatives.push_back(std::move(f.second));
        }
        return report;
    }
    throw Error(ErrorKind::NoSolutionWithin,
                "no nonnegative solution with at most " + std::to_string(max_k) + " nonzeros");
}

enum class SystemClassKind { G1, G2, G3, Indeterminate };

constexpr std::string_view to_string(SystemClassKind c) noexcept {
    switch (c) {
    case SystemClassKind::G1: return "G1";
    case SystemClassKind::G2: return "G2";
    case SystemClassKind::G3: return "G3";
    case SystemClassKind::Indeterminate: return "Indeterminate";
    }
    return "Unknown";
}

struct SystemClass {
    SystemClassKind kind = SystemClassKind::Indeterminate;
    Verdict l1_unique = Verdict::No;
    std::size_t sparsest_count = 0;
    CertifiedSolution l1;
    SparsestReport sparsest;
};

/// G1: unique l1 and unique sparsest; G2: unique l1, several sparsest;
/// G3: several l1 minimizers.
inline SystemClass classify_system(const Matrix& a, std::span<const double> b, const ToleranceConfig& tol = {},
                                   std::uint64_t budget = EnumerationBudget{}.subsets) {
    SystemClass out;
    out.l1 = solve_and_certify(a, b, tol);
    out.sparsest = sparsest_supports(a, b, a.cols(), tol, budget);
    out.l1_unique = out.l1.verdict.unique;
    out.sparsest_count = out.sparsest.supports.size();
    switch (out.l1_unique) {
    case Verdict::Yes:
        out.kind = out.sparsest_count == 1 ? SystemClassKind::G1 : SystemClassKind::G2;
        break;
    case Verdict::No:
        out.kind = SystemClassKind::G3;
        break;
    case Verdict::Marginal:
        out.kind = SystemClassKind::Indeterminate;
        break;
    }
    return out;
}

enum class Equivalence { Equivalent, StronglyEquivalent, NotEquivalent, Indeterminate };

constexpr std::string_view to_string(Equivalence e) noexcept {
    switch (e) {
    case Equivalence::Equivalent: return "Equivalent";
    case Equivalence::StronglyEquivalent: return "StronglyEquivalent";
    case Equivalence::NotEquivalent: return "NotEquivalent";
    case Equivalence::Indeterminate: return "Indeterminate";
    }
    return "Unknown";
}

/// StronglyEquivalent refines Equivalent.
constexpr bool is_equivalent(Equivalence e) noexcept {
    return e == Equivalence::Equivalent || e == Equivalence::StronglyEquivalent;
}

struct EquivalenceReport {
    Equivalence verdict = Equivalence::Indeterminate;
    std::optional<IndexSet> passing_support;
    std::vector<RspCertificate> certificates;  ///< one per sparsest support
    SparsestReport sparsest;
};

/// l0 and l1 problems are equivalent iff the RSP holds at some sparsest
/// support; strongly so when that sparsest solution is the only one.
inline EquivalenceReport equivalence_verdict(const Matrix& a, std::span<const double> b,
                                             const ToleranceConfig& tol = {},
                                             std::uint64_t budget = EnumerationBudget{}.subsets) {
    EquivalenceReport out;
    out.sparsest = sparsest_supports(a, b, a.cols(), tol, budget);
    bool marginal = false;
    for (const auto& s : out.sparsest.supports) {
        out.certificates.push_back(check_rsp_at(a, s, tol));
        const Verdict v = out.certificates.back().holds;
        if (v == Verdict::Yes && !out.passing_support) {
            out.passing_support = s;
        }
        marginal = marginal || v == Verdict::Marginal;
    }
    if (out.passing_support) {
        out.verdict = out.sparsest.supports.size() == 1 ? Equivalence::StronglyEquivalent : Equivalence::Equivalent;
    } else {
        out.verdict = marginal ? Equivalence::Indeterminate : Equivalence::NotEquivalent;
    }
    return out;
}

} // namespace rspcert
