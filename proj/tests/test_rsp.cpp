#include <gtest/gtest.h>

#include <random>

#include "rspcert/rsp.hpp"
#include "support/worked_examples.hpp"

using namespace rspcert;
namespace fx = rspcert::fixtures;

namespace {

void expect_vec_near(const Vec& got, const Vec& want, double tol) {
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
        EXPECT_NEAR(got[i], want[i], tol) << "index " << i;
    }
}

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no exception thrown";
    return ErrorKind::InvalidArgument;
}

} // namespace

TEST(SupportOf, Examples) {
    const ToleranceConfig tol;
    EXPECT_EQ(support_of(fx::basic_xstar(), tol), (IndexSet{0, 1}));
    EXPECT_TRUE(support_of(Vec(4, 0.0), tol).empty());
    EXPECT_EQ(support_of(Vec{1e-12, 1.0, 0.0}, tol), (IndexSet{1}));
    EXPECT_EQ(support_of(Vec{-5e-10, 1.0}, tol), (IndexSet{1}));
    EXPECT_EQ(kind_of([&] { support_of(Vec{-1e-3, 1.0}, tol); }), ErrorKind::NotNonnegative);
}

TEST(CheckRsp, BasicHoldsAndTextbookWitnessIsValid) {
    const ToleranceConfig tol;
    const Matrix a = fx::basic_a();
    const RspCertificate cert = check_rsp_at(a, IndexSet{0, 1}, tol);
    EXPECT_EQ(cert.holds, Verdict::Yes);
    EXPECT_TRUE(witness_valid(a, cert, tol));
    ASSERT_TRUE(cert.t_star.has_value());
    EXPECT_NEAR(*cert.t_star, -1.0, 1e-9);

    RspCertificate manual;
    manual.holds = Verdict::Yes;
    manual.support = IndexSet{0, 1};
    manual.witness_y = {1.0, -1.0, 0.0};
    manual.witness_eta = a.multiply_transposed(manual.witness_y);
    expect_vec_near(manual.witness_eta, {1.0, 1.0, 0.0, -7.0}, 0.0);
    EXPECT_TRUE(witness_valid(a, manual, tol));
}

TEST(CheckRsp, MultiPerSupport) {
    const ToleranceConfig tol;
    const Matrix a = fx::multi_a();
    const RspCertificate good = check_rsp_at(a, IndexSet{0, 4}, tol);
    EXPECT_EQ(good.holds, Verdict::Yes);
    EXPECT_TRUE(witness_valid(a, good, tol));
    EXPECT_EQ(check_rsp_at(a, IndexSet{1, 4}, tol).holds, Verdict::No);
    EXPECT_EQ(check_rsp_at(a, IndexSet{3, 4}, tol).holds, Verdict::No);

    RspCertificate manual;
    manual.holds = Verdict::Yes;
    manual.support = IndexSet{0, 4};
    manual.witness_y = {5.0, 5.0 / 3.0, 0.0};
    manual.witness_eta = a.multiply_transposed(manual.witness_y);
    expect_vec_near(manual.witness_eta, {1.0, 1.0 / 3.0, -2.0 / 3.0, -1.0 / 6.0, 1.0, -7.0 / 6.0}, 1e-12);
    EXPECT_TRUE(witness_valid(a, manual, tol));
}

TEST(CheckRsp, EmptySupportIsVacuous) {
    const RspCertificate cert = check_rsp_at(fx::multi_a(), IndexSet{}, {});
    EXPECT_EQ(cert.holds, Verdict::Yes);
    expect_vec_near(cert.witness_eta, Vec(6, 0.0), 0.0);
    EXPECT_EQ(cert.t_star, -1.0);
}

TEST(CheckRsp, DerivedMarginValues) {
    const ToleranceConfig tol;
    const RspCertificate c33 = check_rsp_at(fx::antipodal_a(), IndexSet{0, 2}, tol);
    EXPECT_EQ(c33.holds, Verdict::Yes);
    EXPECT_NEAR(*c33.t_star, 0.0, 1e-9);

    const RspCertificate all = check_rsp_at(fx::tie_a(), IndexSet{0, 1, 2, 3}, tol);
    EXPECT_EQ(all.holds, Verdict::Yes);
    EXPECT_NEAR(*all.t_star, -1.0, 1e-9);

    const RspCertificate boundary = check_rsp_at(fx::tie_a(), IndexSet{0, 1}, tol);
    EXPECT_EQ(boundary.holds, Verdict::No);
    EXPECT_NEAR(*boundary.t_star, 1.0, 1e-9);

    EXPECT_EQ(check_rsp_at(fx::antipodal_a(), IndexSet{4, 5}, tol).holds, Verdict::No);
    EXPECT_FALSE(check_rsp_at(fx::antipodal_a(), IndexSet{4, 5}, tol).t_star.has_value());
}

TEST(CheckRsp, MarginalBandBetweenMarginAndFeasTol) {
    // single off-support column with eta = 1 - 5e-8, which sits inside the band
    const ToleranceConfig tol;
    const Matrix a{{1.0, 1.0 - 5e-8}};
    EXPECT_EQ(check_rsp_at(a, IndexSet{0}, tol).holds, Verdict::Marginal);
    const Matrix clear{{1.0, 0.5}};
    EXPECT_EQ(check_rsp_at(clear, IndexSet{0}, tol).holds, Verdict::Yes);
    const Matrix over{{1.0, 1.0 + 1e-3}};
    EXPECT_EQ(check_rsp_at(over, IndexSet{0}, tol).holds, Verdict::No);
}

TEST(CertifyUniqueness, WorkedVerdicts) {
    const ToleranceConfig tol;
    const UniquenessVerdict vb = certify_uniqueness(fx::basic_a(), fx::basic_b(), fx::basic_xstar(), tol);
    EXPECT_EQ(vb.unique, Verdict::Yes);
    EXPECT_EQ(vb.reason, UniquenessReason::None);

    const UniquenessVerdict vts = certify_uniqueness(fx::tie_a(), fx::tie_b(), fx::tie_xstar(), tol);
    EXPECT_EQ(vts.unique, Verdict::No);
    EXPECT_EQ(vts.reason, UniquenessReason::RankDeficient);
    EXPECT_EQ(vts.rsp.holds, Verdict::Yes);
    EXPECT_EQ(vts.rank_found, 3u);

    const UniquenessVerdict vtt = certify_uniqueness(fx::tie_a(), fx::tie_b(), fx::tie_xtilde(), tol);
    EXPECT_EQ(vtt.unique, Verdict::No);
    EXPECT_EQ(vtt.reason, UniquenessReason::RspFailed);

    const Vec xg{1.0 / 3.0, 0.5, 0.0, 0.0, 0.0};
    EXPECT_EQ(certify_uniqueness(fx::gap_a(), fx::gap_b(), xg, tol).unique, Verdict::Yes);
}

TEST(CertifyUniqueness, ZeroRightHandSide) {
    const UniquenessVerdict v = certify_uniqueness(fx::multi_a(), Vec(3, 0.0), Vec(6, 0.0), {});
    EXPECT_EQ(v.unique, Verdict::Yes);
}

TEST(CertifyUniqueness, RejectsNonSolutions) {
    const ToleranceConfig tol;
    EXPECT_EQ(kind_of([&] { certify_uniqueness(fx::basic_a(), fx::basic_b(), Vec{1, 0, 0, 0}, tol); }),
              ErrorKind::NotASolution);
    EXPECT_EQ(kind_of([&] { certify_uniqueness(fx::basic_a(), Vec{-1, 1, 0}, Vec{-1, -1, 0, 0}, tol); }),
              ErrorKind::NotNonnegative);
}

TEST(SolveL1, WorkedInstances) {
    const ToleranceConfig tol;
    const L1Solution sm = solve_l1(fx::multi_a(), fx::multi_b(), tol);
    expect_vec_near(sm.x, {2.0 / 9.0, 0, 0, 0, 1.0 / 9.0, 0}, 1e-9);
    EXPECT_NEAR(sm.objective, 1.0 / 3.0, 1e-9);

    const L1Solution st = solve_l1(fx::tie_a(), fx::tie_b(), tol);
    EXPECT_NEAR(st.objective, 10.5, 1e-9);

    const L1Solution zero = solve_l1(fx::multi_a(), Vec(3, 0.0), tol);
    expect_vec_near(zero.x, Vec(6, 0.0), 0.0);
    EXPECT_EQ(zero.objective, 0.0);

    EXPECT_EQ(kind_of([&] { solve_l1(Matrix{{1.0, 1.0}}, Vec{-1.0}, tol); }), ErrorKind::Infeasible);
}

TEST(SolveAndCertify, WorkedInstances) {
    const ToleranceConfig tol;
    const CertifiedSolution cb = solve_and_certify(fx::basic_a(), fx::basic_b(), tol);
    expect_vec_near(cb.solution.x, fx::basic_xstar(), 1e-9);
    EXPECT_EQ(cb.verdict.unique, Verdict::Yes);

    EXPECT_EQ(solve_and_certify(fx::tie_a(), fx::tie_b(), tol).verdict.unique, Verdict::No);

    const CertifiedSolution cm = solve_and_certify(fx::multi_a(), fx::multi_b(), tol);
    EXPECT_EQ(cm.verdict.unique, Verdict::Yes);
    EXPECT_EQ(cm.verdict.rsp.support, (IndexSet{0, 4}));
}

TEST(WeightedRsp, UnitWeightsReduceToPlainCheck) {
    const ToleranceConfig tol;
    for (const IndexSet& s : {IndexSet{0, 4}, IndexSet{1, 4}, IndexSet{3, 4}}) {
        EXPECT_EQ(check_weighted_rsp_at(fx::multi_a(), s, Vec(6, 1.0), tol).holds,
                  check_rsp_at(fx::multi_a(), s, tol).holds);
    }
}

TEST(WeightedRsp, BasicWeightsMatchScaledMatrix) {
    const ToleranceConfig tol;
    const Vec w{2, 2, 1, 1};
    const RspCertificate weighted = check_weighted_rsp_at(fx::basic_a(), IndexSet{0, 1}, w, tol);
    const RspCertificate scaled = check_rsp_at(fx::basic_a().scale_columns(Vec{0.5, 0.5, 1, 1}), IndexSet{0, 1}, tol);
    EXPECT_EQ(weighted.holds, Verdict::Yes);
    EXPECT_EQ(weighted.holds, scaled.holds);
    EXPECT_NEAR(*weighted.t_star, -1.0, 1e-9);
    EXPECT_TRUE(witness_valid(fx::basic_a(), weighted, tol));
}

TEST(WeightedRsp, TieHoldsOnFullSupport) {
    const RspCertificate c = check_weighted_rsp_at(fx::tie_a(), IndexSet{0, 1, 2, 3}, Vec(4, 1.0), {});
    EXPECT_EQ(c.holds, Verdict::Yes);
    expect_vec_near(c.witness_eta, Vec(4, 1.0), 1e-9);
}

TEST(WeightedRsp, RejectsNonpositiveWeights) {
    EXPECT_EQ(kind_of([] { check_weighted_rsp_at(fx::basic_a(), IndexSet{0}, Vec{1, 0, 1, 1}, {}); }),
              ErrorKind::NonpositiveWeight);
    EXPECT_EQ(kind_of([] {
                  certify_weighted_uniqueness(fx::basic_a(), fx::basic_b(), Vec{1, 1, -2, 1}, fx::basic_xstar(), {});
              }),
              ErrorKind::NonpositiveWeight);
}

TEST(WeightedUniqueness, Examples) {
    const ToleranceConfig tol;
    EXPECT_EQ(certify_weighted_uniqueness(fx::basic_a(), fx::basic_b(), Vec(4, 1.0), fx::basic_xstar(), tol).unique,
              Verdict::Yes);
    EXPECT_EQ(certify_weighted_uniqueness(fx::basic_a(), fx::basic_b(), Vec(4, 3.0), fx::basic_xstar(), tol).unique,
              Verdict::Yes);
    EXPECT_EQ(certify_weighted_uniqueness(fx::tie_a(), fx::tie_b(), Vec(4, 1.0), fx::tie_xstar(), tol).unique,
              Verdict::No);
}

TEST(LpSparsest, ZeroObjectiveMatchesPlainCertify) {
    const ToleranceConfig tol;
    const LpSparsestResult r = lp_sparsest_pipeline(fx::basic_a(), fx::basic_b(), Vec(4, 0.0), tol);
    EXPECT_EQ(r.d_star, 0.0);
    EXPECT_EQ(r.augmented_matrix.rows(), 4u);
    const CertifiedSolution plain = solve_and_certify(fx::basic_a(), fx::basic_b(), tol);
    expect_vec_near(r.certified.solution.x, plain.solution.x, 1e-9);
    EXPECT_EQ(r.certified.verdict.unique, plain.verdict.unique);
}

TEST(LpSparsest, BasicWithUnitCost) {
    const LpSparsestResult r = lp_sparsest_pipeline(fx::basic_a(), fx::basic_b(), Vec(4, 1.0), {});
    EXPECT_NEAR(r.d_star, 1.0, 1e-9);
    expect_vec_near(r.certified.solution.x, fx::basic_xstar(), 1e-9);
    EXPECT_EQ(r.certified.verdict.unique, Verdict::Yes);
}

TEST(LpSparsest, TwoVariableSimplex) {
    const LpSparsestResult r = lp_sparsest_pipeline(Matrix{{1.0, 1.0}}, Vec{1.0}, Vec{0.0, 1.0}, {});
    EXPECT_NEAR(r.d_star, 0.0, 1e-12);
    expect_vec_near(r.certified.solution.x, {1.0, 0.0}, 1e-9);
    EXPECT_EQ(r.certified.verdict.unique, Verdict::Yes);
}

TEST(LpSparsest, InfeasibleAndUnbounded) {
    EXPECT_EQ(kind_of([] { lp_sparsest_pipeline(Matrix{{1.0}}, Vec{-1.0}, Vec{1.0}, {}); }), ErrorKind::Infeasible);
    EXPECT_EQ(kind_of([] { lp_sparsest_pipeline(Matrix{{1.0, -1.0}}, Vec{0.0}, Vec{-1.0, 0.0}, {}); }),
              ErrorKind::Unbounded);
}

namespace {

struct Instance {
    Matrix a;
    Vec b;
};

Instance planted(std::mt19937_64& rng) {
    const Matrix a = fx::gaussian(4, 8, rng);
    std::uniform_int_distribution<std::size_t> pick(0, 7);
    std::uniform_real_distribution<double> mag(0.5, 2.0);
    Vec x(8, 0.0);
    const std::size_t k = 1 + pick(rng) % 3;
    for (std::size_t i = 0; i < k; ++i) {
        x[pick(rng)] = mag(rng);
    }
    return {a, a.multiply(x)};
}

/// Re-solves the l1 LP with 20 objective perturbations of size 1e-6 and
/// reports whether every optimum coincides with x.
bool stable_under_perturbation(const Instance& in, const Vec& x, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> jitter(-1e-6, 1e-6);
    for (int t = 0; t < 20; ++t) {
        Vec c(in.a.cols(), 1.0);
        for (double& v : c) {
            v += jitter(rng);
        }
        const LpSolution sol = solve(StandardLp(c, in.a, in.b));
        if (sol.status != LpStatus::Optimal) {
            return false;
        }
        for (std::size_t j = 0; j < x.size(); ++j) {
            if (std::abs(sol.x[j] - x[j]) > 1e-6) {
                return false;
            }
        }
    }
    return true;
}

} // namespace

TEST(RspProperties, NecessityAndSufficiencyAgainstPerturbation) {
    std::mt19937_64 rng(2024);
    const ToleranceConfig tol;
    int unique_by_perturbation = 0;
    int certified_yes = 0;
    for (int i = 0; i < 100; ++i) {
        const Instance in = planted(rng);
        const CertifiedSolution cs = solve_and_certify(in.a, in.b, tol);
        const bool stable = stable_under_perturbation(in, cs.solution.x, rng);
        if (stable) {
            ++unique_by_perturbation;
            EXPECT_EQ(cs.verdict.unique, Verdict::Yes) << "instance " << i;
        }
        if (cs.verdict.unique == Verdict::Yes) {
            ++certified_yes;
            EXPECT_TRUE(stable) << "instance " << i;
            EXPECT_LE(cs.verdict.rsp.support.size(), in.a.rows());
            EXPECT_TRUE(witness_valid(in.a, cs.verdict.rsp, tol));
        }
    }
    EXPECT_GT(unique_by_perturbation, 50);
    EXPECT_EQ(unique_by_perturbation, certified_yes);
}

TEST(RspProperties, VerdictDependsOnlyOnSupport) {
    std::mt19937_64 rng(77);
    const ToleranceConfig tol;
    std::uniform_real_distribution<double> mag(0.1, 5.0);
    for (int i = 0; i < 30; ++i) {
        const Matrix a = fx::gaussian(3, 6, rng);
        Vec x1(6, 0.0);
        Vec x2(6, 0.0);
        for (std::size_t j : {1u, 4u}) {
            x1[j] = mag(rng);
            x2[j] = mag(rng);
        }
        const UniquenessVerdict v1 = certify_uniqueness(a, a.multiply(x1), x1, tol);
        const UniquenessVerdict v2 = certify_uniqueness(a, a.multiply(x2), x2, tol);
        EXPECT_EQ(v1.unique, v2.unique);
        EXPECT_EQ(v1.rsp.holds, v2.rsp.holds);
    }
}

TEST(RspProperties, RankTestsAgreeWhenRspHolds) {
    std::mt19937_64 rng(5150);
    const ToleranceConfig tol;
    int checked = 0;
    for (int i = 0; i < 60; ++i) {
        Matrix a = fx::gaussian(3, 6, rng);
        if (i % 3 == 0) {
            for (std::size_t r = 0; r < 3; ++r) {
                a(r, 2) = 0.5 * (a(r, 0) + a(r, 1));
            }
        }
        for_each_subset(6, 1 + i % 3, [&](const IndexSet& s) {
            const RspCertificate cert = check_rsp_at(a, s, tol);
            if (cert.holds == Verdict::Yes) {
                ++checked;
                EXPECT_EQ(rank(a, s, tol) == s.size(), augmented_rank(a, s, tol) == s.size()) << s.str();
            }
            return true;
        });
    }
    EXPECT_GT(checked, 50);
}

TEST(RspProperties, WeightedMatchesRescaledProblem) {
    std::mt19937_64 rng(31337);
    std::uniform_real_distribution<double> wdist(0.2, 4.0);
    const ToleranceConfig tol;
    for (int i = 0; i < 40; ++i) {
        const Instance in = planted(rng);
        Vec w(8);
        for (double& v : w) {
            v = wdist(rng);
        }
        const L1Solution sol = solve_l1(in.a, in.b, tol);
        Vec winv(8);
        Vec wx(8);
        for (std::size_t j = 0; j < 8; ++j) {
            winv[j] = 1.0 / w[j];
            wx[j] = w[j] * sol.x[j];
        }
        const UniquenessVerdict lhs = certify_weighted_uniqueness(in.a, in.b, w, sol.x, tol);
        const UniquenessVerdict rhs = certify_uniqueness(in.a.scale_columns(winv), in.b, wx, tol);
        EXPECT_EQ(lhs.unique, rhs.unique) << "instance " << i;
        EXPECT_EQ(lhs.rsp.holds, rhs.rsp.holds) << "instance " << i;
    }
}
