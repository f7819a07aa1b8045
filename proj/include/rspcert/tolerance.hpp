#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>

#include "rspcert/errors.hpp"

namespace rspcert {

/// Numerical thresholds shared by every certifier.
struct ToleranceConfig {
    double feas_tol = 1e-8;    ///< LP feasibility residual
    double rank_tol = 1e-8;    ///< relative pivot threshold for rank decisions
    double rsp_margin = 1e-7;  ///< required gap for eta_i < 1 off the support
    double gap_tol = 1e-7;     ///< duality gap / complementary slackness
    double zero_tol = 1e-9;    ///< x_i > zero_tol counts as positive

    void validate() const {
        auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
        if (!positive(feas_tol) || !positive(rank_tol) || !positive(rsp_margin) ||
            !positive(gap_tol) || !positive(zero_tol)) {
            throw Error(ErrorKind::InvalidArgument, "tolerances must be finite and strictly positive");
        }
        if (!(rsp_margin > feas_tol)) {
            throw Error(ErrorKind::InvalidArgument, "rsp_margin must exceed feas_tol");
        }
    }
};

/// Caps on exhaustive subset enumeration.
///
/// Rank-only enumeration (spark) and the sparsest-support search use
/// `subsets`; order-K certification solves one LP per subset and uses the
/// tighter `lp_subsets` cap.
struct EnumerationBudget {
    std::uint64_t subsets = 10'000'000;
    std::uint64_t lp_subsets = 1'000'000;

    /// A single override applied to both caps (CLI --budget / RSPCERT_BUDGET).
    static EnumerationBudget uniform(std::uint64_t cap) { return {cap, cap}; }

    /// Reads RSPCERT_BUDGET; returns nullopt when unset.
    static std::optional<std::uint64_t> from_environment() {
        const char* raw = std::getenv("RSPCERT_BUDGET");
        if (raw == nullptr || *raw == '\0') {
            return std::nullopt;
        }
        char* end = nullptr;
        const auto value = std::strtoull(raw, &end, 10);
        if (end == raw || *end != '\0' || value == 0) {
            throw Error(ErrorKind::InvalidArgument,
                        std::string("RSPCERT_BUDGET is not a positive integer: ") + raw);
        }
        return value;
    }
};

} // namespace rspcert
