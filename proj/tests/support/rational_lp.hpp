#pragma once

// Exact feasibility oracle for {Bx = p, x >= 0} with integer data: phase-1
// simplex over arbitrary-precision rationals with Bland's rule throughout,
// so it terminates and decides feasibility without rounding.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <vector>

namespace rspcert::testing {

using Rational = boost::multiprecision::cpp_rational;

inline bool exactly_feasible(const std::vector<std::vector<long>>& b, const std::vector<long>& p) {
    const std::size_t m = b.size();
    const std::size_t n = m == 0 ? 0 : b.front().size();
    const std::size_t cols = n + m;
    std::vector<std::vector<Rational>> t(m, std::vector<Rational>(cols + 1));
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) {
        const long sign = p[i] < 0 ? -1 : 1;
        for (std::size_t j = 0; j < n; ++j) {
            t[i][j] = Rational(sign * b[i][j]);
        }
        t[i][n + i] = 1;
        t[i][cols] = Rational(sign * p[i]);
        basis[i] = n + i;
    }
    // reduced costs of the phase-1 objective sum(artificials)
    std::vector<Rational> d(cols + 1);
    for (std::size_t j = 0; j <= cols; ++j) {
        Rational s = 0;
        if (j < n || j == cols) {
            for (std::size_t i = 0; i < m; ++i) {
                s += t[i][j];
            }
            d[j] = -s;
        }
    }
    while (true) {
        std::size_t q = cols;
        for (std::size_t j = 0; j < cols; ++j) {
            if (d[j] < 0) {
                q = j;
                break;
            }
        }
        if (q == cols) {
            break;
        }
        std::size_t r = m;
        Rational best;
        for (std::size_t i = 0; i < m; ++i) {
            if (t[i][q] > 0) {
                const Rational ratio = t[i][cols] / t[i][q];
                if (r == m || ratio < best || (ratio == best && basis[i] < basis[r])) {
                    best = ratio;
                    r = i;
                }
            }
        }
        if (r == m) {
            break;  // cannot happen: phase 1 is bounded below
        }
        const Rational pv = t[r][q];
        for (auto& v : t[r]) {
            v /= pv;
        }
        for (std::size_t i = 0; i < m; ++i) {
            if (i != r && t[i][q] != 0) {
                const Rational f = t[i][q];
                for (std::size_t j = 0; j <= cols; ++j) {
                    t[i][j] -= f * t[r][j];
                }
            }
        }
        const Rational f = d[q];
        for (std::size_t j = 0; j <= cols; ++j) {
            d[j] -= f * t[r][j];
        }
        basis[r] = q;
    }
    // -d[cols] is the phase-1 optimum
    return d[cols] == 0;
}

} // namespace rspcert::testing
