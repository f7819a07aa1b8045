#pragma once

// ReportJson serialization. Indices are 0-based; vectors are decimal arrays
// printed with round-trip precision.

#include <string>

#include "json.hpp"

#include "rspcert/l0_oracle.hpp"
#include "rspcert/matrix.hpp"
#include "rspcert/order_k.hpp"
#include "rspcert/rsp.hpp"
#include "rspcert/tolerance.hpp"

namespace rspcert {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";

inline Json to_json(const IndexSet& s) { return Json(s.indices()); }

inline Json to_json(const ToleranceConfig& t) {
    return Json{{"feas_tol", t.feas_tol},
                {"rank_tol", t.rank_tol},
                {"rsp_margin", t.rsp_margin},
                {"gap_tol", t.gap_tol},
                {"zero_tol", t.zero_tol}};
}

inline Json to_json(const RspCertificate& c) {
    Json j{{"holds", std::string(to_string(c.holds))},
           {"support", to_json(c.support)},
           {"lp_status", std::string(to_string(c.lp_status))},
           {"t_star", c.t_star ? Json(*c.t_star) : Json(nullptr)},
           {"witness_y", c.witness_y},
           {"witness_eta", c.witness_eta}};
    if (!c.weights.empty()) {
        j["weights"] = c.weights;
    }
    return j;
}

inline Verdict verdict_from_string(const std::string& s) {
    if (s == "Yes") {
        return Verdict::Yes;
    }
    if (s == "Marginal") {
        return Verdict::Marginal;
    }
    if (s == "No") {
        return Verdict::No;
    }
    throw Error(ErrorKind::Parse, "unknown verdict '" + s + "'");
}

/// Reads back a certificate emitted by to_json so its witness can be
/// re-verified with witness_valid.
inline RspCertificate certificate_from_json(const Json& j) {
    RspCertificate c;
    c.holds = verdict_from_string(j.at("holds").get<std::string>());
    c.support = IndexSet(j.at("support").get<std::vector<std::size_t>>());
    if (!j.at("t_star").is_null()) {
        c.t_star = j.at("t_star").get<double>();
    }
    const auto status = j.at("lp_status").get<std::string>();
    c.lp_status = status == "Optimal" ? LpStatus::Optimal
                  : status == "Unbounded" ? LpStatus::Unbounded
                                          : LpStatus::Infeasible;
    c.witness_y = j.at("witness_y").get<Vec>();
    c.witness_eta = j.at("witness_eta").get<Vec>();
    if (j.contains("weights")) {
        c.weights = j.at("weights").get<Vec>();
    }
    return c;
}

inline Json to_json(const UniquenessVerdict& v) {
    return Json{{"unique", std::string(to_string(v.unique))},
                {"reason", std::string(to_string(v.reason))},
                {"full_column_rank", v.full_column_rank},
                {"rank_found", v.rank_found},
                {"rank_marginal", v.rank_marginal},
                {"augmented_rank", v.augmented_rank},
                {"augmented_full_rank", v.augmented_full_rank},
                {"rsp", to_json(v.rsp)}};
}

inline Json to_json(const SparsestReport& r) {
    Json supports = Json::array();
    for (std::size_t i = 0; i < r.supports.size(); ++i) {
        supports.push_back(Json{{"support", to_json(r.supports[i])},
                                {"representative", r.representatives[i]},
                                {"unique_within_support", static_cast<bool>(r.unique_within_support[i])}});
    }
    return Json{{"k_star", r.k_star}, {"subsets_checked", r.subsets_checked}, {"supports", supports}};
}

inline Json to_json(const RecoveryReport& r) {
    Json marginal = Json::array();
    for (const auto& s : r.marginal_subsets) {
        marginal.push_back(to_json(s));
    }
    return Json{{"property", std::string(to_string(r.property))},
                {"K", r.k},
                {"holds", std::string(to_string(r.holds))},
                {"failure", std::string(to_string(r.failure))},
                {"counterexample", r.counterexample ? to_json(*r.counterexample) : Json(nullptr)},
                {"subsets_checked", r.subsets_checked},
                {"subsets_skipped", r.subsets_skipped},
                {"marginal_subsets", marginal},
                {"fails_below_but_passes_at_k", r.fails_below_but_passes_at_k}};
}

inline Json to_json(const RecoveryOracleReport& r) {
    Json marginal = Json::array();
    for (const auto& s : r.marginal_supports) {
        marginal.push_back(to_json(s));
    }
    return Json{{"recovers", r.recovers},
                {"failing_support", r.failing_support ? to_json(*r.failing_support) : Json(nullptr)},
                {"marginal_supports", marginal},
                {"supports_checked", r.supports_checked},
                {"trials_per_support", r.trials_per_support},
                {"full_rank_subset_exists", r.full_rank_subset_exists},
                {"seed", r.seed}};
}

inline Json dimensions(const Matrix& a) { return Json{{"rows", a.rows()}, {"cols", a.cols()}}; }

} // namespace rspcert
