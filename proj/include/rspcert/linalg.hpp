#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "rspcert/errors.hpp"
#include "rspcert/matrix.hpp"
#include "rspcert/tolerance.hpp"

namespace rspcert {

/// C(n, k), saturating at uint64 max.
inline std::uint64_t binomial(std::size_t n, std::size_t k) {
    if (k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        const std::uint64_t num = n - k + i;
        // r * num / i is exact at every step; guard the multiplication.
        if (r > std::numeric_limits<std::uint64_t>::max() / num) {
            return std::numeric_limits<std::uint64_t>::max();
        }
        r = r * num / i;
    }
    return r;
}

/// Sum of C(n, k) for k in [lo, hi], saturating.
inline std::uint64_t binomial_sum(std::size_t n, std::size_t lo, std::size_t hi) {
    std::uint64_t total = 0;
    for (std::size_t k = lo; k <= hi; ++k) {
        const auto c = binomial(n, k);
        if (total > std::numeric_limits<std::uint64_t>::max() - c) {
            return std::numeric_limits<std::uint64_t>::max();
        }
        total += c;
    }
    return total;
}

/// Calls visit(IndexSet) for every k-subset of {0..n-1} in lexicographic
/// order. Stops early when visit returns false. Returns false iff stopped.
template <typename Visitor>
bool for_each_subset(std::size_t n, std::size_t k, Visitor&& visit) {
    if (k > n) {
        return true;
    }
    std::vector<std::size_t> idx(k);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    while (true) {
        if (!visit(IndexSet(idx))) {
            return false;
        }
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + (i - 1)) {
            --i;
        }
        if (i == 0) {
            return true;
        }
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Outcome of a numerical rank decision.
struct RankInfo {
    std::size_t rank = 0;
    /// true when an accepted or rejected pivot lies within a factor 10 of the
    /// threshold, i.e. the decision is sensitive to rank_tol.
    bool marginal = false;
    double threshold = 0.0;
};

namespace detail {

/// Gaussian elimination with complete (row and column) pivoting on a
/// row-major rows x cols buffer.
inline RankInfo eliminate(std::vector<double> a, std::size_t rows, std::size_t cols, double rank_tol) {
    RankInfo info;
    if (rows == 0 || cols == 0) {
        return info;
    }
    const double scale = std::max(1.0, norm_inf(a));
    info.threshold = rank_tol * scale;
    auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * cols + j]; };

    const std::size_t steps = std::min(rows, cols);
    for (std::size_t step = 0; step < steps; ++step) {
        std::size_t pr = step;
        std::size_t pc = step;
        double best = -1.0;
        for (std::size_t i = step; i < rows; ++i) {
            for (std::size_t j = step; j < cols; ++j) {
                if (std::abs(at(i, j)) > best) {
                    best = std::abs(at(i, j));
                    pr = i;
                    pc = j;
                }
            }
        }
        if (best <= info.threshold) {
            if (best > info.threshold / 10.0) {
                info.marginal = true;
            }
            return info;
        }
        if (best < 10.0 * info.threshold) {
            info.marginal = true;
        }
        if (pr != step) {
            for (std::size_t j = 0; j < cols; ++j) {
                std::swap(at(pr, j), at(step, j));
            }
        }
        if (pc != step) {
            for (std::size_t i = 0; i < rows; ++i) {
                std::swap(at(i, pc), at(i, step));
            }
        }
        const double pivot = at(step, step);
        for (std::size_t i = step + 1; i < rows; ++i) {
            const double f = at(i, step) / pivot;
            if (f == 0.0) {
                continue;
            }
            at(i, step) = 0.0;
            for (std::size_t j = step + 1; j < cols; ++j) {
                at(i, j) -= f * at(step, j);
            }
        }
        ++info.rank;
    }
    return info;
}

inline std::vector<double> gather(const Matrix& a, const IndexSet& s, bool ones_row) {
    const std::size_t rows = a.rows() + (ones_row ? 1 : 0);
    std::vector<double> buf(rows * s.size());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < s.size(); ++k) {
            buf[i * s.size() + k] = a(i, s[k]);
        }
    }
    if (ones_row) {
        std::fill(buf.end() - static_cast<std::ptrdiff_t>(s.size()), buf.end(), 1.0);
    }
    return buf;
}

inline void require_valid(const Matrix& a, const IndexSet& s) {
    if (!s.valid_for(a.cols())) {
        throw Error(ErrorKind::InvalidArgument,
                    "index set " + s.str() + " out of range for " + std::to_string(a.cols()) + " columns");
    }
}

} // namespace detail

/// Numerical rank of A_S with the marginal flag.
inline RankInfo rank_info(const Matrix& a, const IndexSet& s, const ToleranceConfig& tol) {
    detail::require_valid(a, s);
    if (s.empty()) {
        return {};
    }
    return detail::eliminate(detail::gather(a, s, false), a.rows(), s.size(), tol.rank_tol);
}

inline std::size_t rank(const Matrix& a, const IndexSet& s, const ToleranceConfig& tol) {
    return rank_info(a, s, tol).rank;
}

inline bool has_full_column_rank(const Matrix& a, const IndexSet& s, const ToleranceConfig& tol) {
    return rank(a, s, tol) == s.size();
}

/// Rank of A_S stacked over a row of ones.
inline RankInfo augmented_rank_info(const Matrix& a, const IndexSet& s, const ToleranceConfig& tol) {
    detail::require_valid(a, s);
    if (s.empty()) {
        return {};
    }
    return detail::eliminate(detail::gather(a, s, true), a.rows() + 1, s.size(), tol.rank_tol);
}

inline std::size_t augmented_rank(const Matrix& a, const IndexSet& s, const ToleranceConfig& tol) {
    return augmented_rank_info(a, s, tol).rank;
}

inline IndexSet all_columns(std::size_t n) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    return IndexSet(std::move(idx));
}

/// Largest normalized absolute inner product between distinct columns.
inline double mutual_coherence(const Matrix& a, const ToleranceConfig& tol) {
    const std::size_t n = a.cols();
    if (n < 2) {
        throw Error(ErrorKind::InvalidArgument, "mutual coherence needs at least two columns");
    }
    std::vector<Vec> cols(n);
    Vec norms(n);
    for (std::size_t j = 0; j < n; ++j) {
        cols[j] = a.column(j);
        norms[j] = std::sqrt(dot(cols[j], cols[j]));
        if (norms[j] <= tol.rank_tol) {
            throw Error(ErrorKind::ZeroColumn, "column " + std::to_string(j) + " has (numerically) zero norm");
        }
    }
    double mu = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            mu = std::max(mu, std::abs(dot(cols[i], cols[j])) / (norms[i] * norms[j]));
        }
    }
    return std::min(mu, 1.0);
}

struct CoherenceBound {
    bool holds = false;
    double mu = 0.0;
    double bound = 0.0;  ///< (1 + 1/mu)/2, +inf when mu == 0
    std::size_t sparsity = 0;
};

/// ||x||_0 < (1 + 1/mu(A)) / 2, counting entries above zero_tol.
inline CoherenceBound coherence_bound(const Matrix& a, std::span<const double> x, const ToleranceConfig& tol) {
    if (x.size() != a.cols() || !all_finite(x)) {
        throw Error(ErrorKind::InvalidArgument, "x must be finite with one entry per column");
    }
    CoherenceBound out;
    out.mu = mutual_coherence(a, tol);
    out.bound = out.mu == 0.0 ? std::numeric_limits<double>::infinity() : (1.0 + 1.0 / out.mu) / 2.0;
    out.sparsity = static_cast<std::size_t>(
        std::count_if(x.begin(), x.end(), [&](double v) { return v > tol.zero_tol; }));
    out.holds = static_cast<double>(out.sparsity) < out.bound;
    return out;
}

inline bool coherence_bound_holds(const Matrix& a, std::span<const double> x, const ToleranceConfig& tol) {
    return coherence_bound(a, x, tol).holds;
}

/// Smallest number of linearly dependent columns; n+1 when all columns are
/// independent. Exhaustive in increasing subset size.
inline std::size_t spark(const Matrix& a, const ToleranceConfig& tol, std::uint64_t budget = EnumerationBudget{}.subsets) {
    const std::size_t n = a.cols();
    std::uint64_t visited = 0;
    for (std::size_t k = 1; k <= n; ++k) {
        bool found = false;
        for_each_subset(n, k, [&](const IndexSet& s) {
            if (++visited > budget) {
                throw Error(ErrorKind::BudgetExceeded,
                            "spark enumeration exceeded " + std::to_string(budget) + " subsets");
            }
            if (rank(a, s, tol) < k) {
                found = true;
                return false;
            }
            return true;
        });
        if (found) {
            return k;
        }
    }
    return n + 1;
}

} // namespace rspcert
