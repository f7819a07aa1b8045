// rspcert: command-line front end for the RSP certification library.
//
// Exit codes: 0 Yes, 1 usage/parse error, 2 problem infeasible / unbounded /
// not a solution, 3 No, 4 Marginal, 5 oracle mismatch, 6 budget exceeded,
// 7 numerical failure (iteration limit, unverifiable certificate).

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>

#include "CLI11.hpp"

#include "rspcert/report.hpp"
#include "rspcert/rspcert.hpp"

namespace {

using namespace rspcert;

enum ExitCode : int {
    kYes = 0,
    kUsage = 1,
    kProblem = 2,
    kNo = 3,
    kMarginal = 4,
    kOracleMismatch = 5,
    kBudget = 6,
    kNumerical = 7,
};

int exit_for(Verdict v) {
    switch (v) {
    case Verdict::Yes: return kYes;
    case Verdict::No: return kNo;
    case Verdict::Marginal: return kMarginal;
    }
    return kUsage;
}

int exit_for(ErrorKind k) {
    switch (k) {
    case ErrorKind::Infeasible:
    case ErrorKind::Unbounded:
    case ErrorKind::NotASolution:
    case ErrorKind::NotNonnegative:
    case ErrorKind::NoSolutionWithin: return kProblem;
    case ErrorKind::BudgetExceeded: return kBudget;
    case ErrorKind::IterationLimit:
    case ErrorKind::CertificateUnavailable: return kNumerical;
    default: return kUsage;
    }
}

struct GlobalOptions {
    ToleranceConfig tol;
    std::optional<std::uint64_t> budget;
    std::uint64_t seed = 0;
    std::string json_path;

    [[nodiscard]] EnumerationBudget enumeration_budget() const {
        if (budget) {
            return EnumerationBudget::uniform(*budget);
        }
        if (auto env = EnumerationBudget::from_environment()) {
            return EnumerationBudget::uniform(*env);
        }
        return {};
    }
};

std::string fmt_vec(const Vec& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        s += (i ? ", " : "") + Json(v[i]).dump();
    }
    return s + ")";
}

class Command {
  public:
    Command(std::string name, const GlobalOptions& opts) : name_(std::move(name)), opts_(opts) {
        report_["schema_version"] = kSchemaVersion;
        report_["command"] = name_;
        report_["inputs"] = Json::object();
        report_["verdicts"] = Json::object();
    }

    Json& inputs() { return report_["inputs"]; }
    Json& verdicts() { return report_["verdicts"]; }
    Json& report() { return report_; }

    Matrix load_matrix(const std::string& key, const std::string& path) {
        Matrix m = read_matrix_file(path);
        inputs()[key] = Json{{"path", path}, {"rows", m.rows()}, {"cols", m.cols()}};
        return m;
    }

    Vec load_vector(const std::string& key, const std::string& path, std::size_t expected) {
        Vec v = read_vector_file(path);
        if (v.size() != expected) {
            throw Error(ErrorKind::InvalidArgument, path + ": expected " + std::to_string(expected) +
                                                        " entries, found " + std::to_string(v.size()));
        }
        inputs()[key] = Json{{"path", path}, {"length", v.size()}};
        return v;
    }

    /// Runs body, records errors and timing, writes the report, returns the exit code.
    template <typename Body>
    int run(Body&& body) {
        const auto start = std::chrono::steady_clock::now();
        inputs()["tolerances"] = to_json(opts_.tol);
        int code = kUsage;
        try {
            opts_.tol.validate();
            code = body(*this);
        } catch (const ParseError& e) {
            report_["error"] = Json{{"kind", "Parse"},
                                    {"message", e.what()},
                                    {"line", e.line()},
                                    {"column", e.column()}};
            std::cerr << "error: " << e.what() << "\n";
            code = kUsage;
        } catch (const Error& e) {
            report_["error"] = Json{{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
            std::cerr << "error: " << e.what() << "\n";
            code = exit_for(e.kind());
        }
        const auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start);
        report_["exit_code"] = code;
        report_["timing_ms"] = elapsed.count();
        if (!opts_.json_path.empty()) {
            std::ofstream out(opts_.json_path);
            if (!out) {
                std::cerr << "error: cannot write " << opts_.json_path << "\n";
                return kUsage;
            }
            out << report_.dump(2) << "\n";
        }
        return code;
    }

  private:
    std::string name_;
    const GlobalOptions& opts_;
    Json report_;
};

void print_verdict(const UniquenessVerdict& v) {
    std::cout << "unique: " << to_string(v.unique);
    if (v.reason != UniquenessReason::None) {
        std::cout << " (" << to_string(v.reason) << ")";
    }
    std::cout << "\nsupport: " << v.rsp.support.str() << "\nrsp: " << to_string(v.rsp.holds);
    if (v.rsp.t_star) {
        std::cout << ", t* = " << *v.rsp.t_star;
    }
    std::cout << "\nrank(A_S) = " << v.rank_found << " of " << v.rsp.support.size()
              << (v.rank_marginal ? " (marginal)" : "") << "\n";
    if (!v.rsp.witness_eta.empty() && v.rsp.holds != Verdict::No) {
        std::cout << "witness eta = " << fmt_vec(v.rsp.witness_eta) << "\n";
    }
}

int cmd_solve_l1(const GlobalOptions& g, const std::string& a_path, const std::string& b_path) {
    Command cmd("solve-l1", g);
    return cmd.run([&](Command& c) {
        const Matrix a = c.load_matrix("A", a_path);
        const Vec b = c.load_vector("b", b_path, a.rows());
        const CertifiedSolution r = solve_and_certify(a, b, g.tol);
        c.verdicts()["x"] = r.solution.x;
        c.verdicts()["objective"] = r.solution.objective;
        c.verdicts()["uniqueness"] = to_json(r.verdict);
        std::cout << "x = " << fmt_vec(r.solution.x) << "\n||x||_1 = " << r.solution.objective << "\n";
        print_verdict(r.verdict);
        return exit_for(r.verdict.unique);
    });
}

int cmd_certify(const GlobalOptions& g, const std::string& a_path, const std::string& b_path,
                const std::string& x_path, const std::string& w_path) {
    Command cmd("certify", g);
    return cmd.run([&](Command& c) {
        const Matrix a = c.load_matrix("A", a_path);
        const Vec b = c.load_vector("b", b_path, a.rows());
        const Vec x = c.load_vector("x", x_path, a.cols());
        UniquenessVerdict v;
        if (w_path.empty()) {
            v = certify_uniqueness(a, b, x, g.tol);
        } else {
            const Vec w = c.load_vector("w", w_path, a.cols());
            v = certify_weighted_uniqueness(a, b, w, x, g.tol);
        }
        c.verdicts()["uniqueness"] = to_json(v);
        print_verdict(v);
        return exit_for(v.unique);
    });
}

std::optional<RecoveryProperty> parse_property(const std::string& s) {
    if (s == "rsp") return RecoveryProperty::Rsp;
    if (s == "wrsp") return RecoveryProperty::Wrsp;
    if (s == "prsp") return RecoveryProperty::Prsp;
    if (s == "pwrsp") return RecoveryProperty::Pwrsp;
    return std::nullopt;
}

int cmd_order_k(const GlobalOptions& g, const std::string& a_path, std::size_t k, const std::string& prop_name,
                bool oracle, std::size_t trials) {
    Command cmd("order-k", g);
    return cmd.run([&](Command& c) {
        const auto property = parse_property(prop_name);
        if (!property) {
            throw Error(ErrorKind::InvalidArgument, "unknown property '" + prop_name + "'");
        }
        const Matrix a = c.load_matrix("A", a_path);
        const EnumerationBudget budget = g.enumeration_budget();
        c.inputs()["K"] = k;
        c.inputs()["budget"] = budget.lp_subsets;
        const RecoveryReport r = certify_order_k(a, k, *property, g.tol, budget.lp_subsets);
        c.verdicts()["certifier"] = to_json(r);
        std::cout << to_string(r.property) << " of order " << k << ": " << to_string(r.holds) << "\n";
        if (r.counterexample) {
            std::cout << "counterexample: " << r.counterexample->str() << "\n";
        }
        if (r.failure == RecoveryFailure::NoFullRankSubset) {
            std::cout << "no " << k << " columns are linearly independent\n";
        }
        std::cout << "subsets checked: " << r.subsets_checked << "\n";
        int code = exit_for(r.holds);
        if (oracle) {
            c.report()["seed"] = g.seed;
            const RecoveryOracleReport o =
                recovery_oracle(a, k, SubsetScope::of(*property), trials, g.seed, g.tol, budget.lp_subsets);
            const Verdict ov = oracle_verdict(o, *property);
            const bool comparable = ov != Verdict::Marginal && r.holds != Verdict::Marginal;
            const bool agree = !comparable || ov == r.holds;
            c.verdicts()["oracle"] = to_json(o);
            c.verdicts()["oracle"]["verdict"] = std::string(to_string(ov));
            c.verdicts()["agreement"] = comparable ? Json(agree) : Json(nullptr);
            std::cout << "oracle: " << to_string(ov) << (comparable ? (agree ? " (agrees)" : " (DISAGREES)") : "")
                      << "\n";
            if (!agree) {
                code = kOracleMismatch;
            }
        }
        return code;
    });
}

int cmd_classify(const GlobalOptions& g, const std::string& a_path, const std::string& b_path) {
    Command cmd("classify", g);
    return cmd.run([&](Command& c) {
        const Matrix a = c.load_matrix("A", a_path);
        const Vec b = c.load_vector("b", b_path, a.rows());
        const EnumerationBudget budget = g.enumeration_budget();
        const SystemClass cls = classify_system(a, b, g.tol, budget.subsets);
        const EquivalenceReport eq = equivalence_verdict(a, b, g.tol, budget.subsets);
        c.verdicts()["class"] = std::string(to_string(cls.kind));
        c.verdicts()["l1_unique"] = std::string(to_string(cls.l1_unique));
        c.verdicts()["sparsest_count"] = cls.sparsest_count;
        c.verdicts()["l1_solution"] = cls.l1.solution.x;
        c.verdicts()["l1_objective"] = cls.l1.solution.objective;
        c.verdicts()["uniqueness"] = to_json(cls.l1.verdict);
        c.verdicts()["sparsest"] = to_json(cls.sparsest);
        c.verdicts()["equivalence"] = std::string(to_string(eq.verdict));
        c.verdicts()["rsp_passing_support"] = eq.passing_support ? to_json(*eq.passing_support) : Json(nullptr);
        Json certs = Json::array();
        for (const auto& cert : eq.certificates) {
            certs.push_back(to_json(cert));
        }
        c.verdicts()["sparsest_certificates"] = certs;
        std::cout << "class: " << to_string(cls.kind) << "\nl1 solution: " << fmt_vec(cls.l1.solution.x)
                  << " (unique: " << to_string(cls.l1_unique) << ")\nsparsest k* = " << cls.sparsest.k_star
                  << ", supports:";
        for (const auto& s : cls.sparsest.supports) {
            std::cout << " " << s.str();
        }
        std::cout << "\nequivalence: " << to_string(eq.verdict);
        if (eq.passing_support) {
            std::cout << " (RSP holds at " << eq.passing_support->str() << ")";
        }
        std::cout << "\n";
        return kYes;
    });
}

int cmd_lp_sparse(const GlobalOptions& g, const std::string& a_path, const std::string& b_path,
                  const std::string& c_path) {
    Command cmd("lp-sparse", g);
    return cmd.run([&](Command& c) {
        const Matrix a = c.load_matrix("A", a_path);
        const Vec b = c.load_vector("b", b_path, a.rows());
        const Vec cost = c.load_vector("c", c_path, a.cols());
        const LpSparsestResult r = lp_sparsest_pipeline(a, b, cost, g.tol);
        c.verdicts()["d_star"] = r.d_star;
        c.verdicts()["augmented"] = dimensions(r.augmented_matrix);
        c.verdicts()["augmented_rhs"] = r.augmented_rhs;
        c.verdicts()["x"] = r.certified.solution.x;
        c.verdicts()["objective"] = r.certified.solution.objective;
        c.verdicts()["uniqueness"] = to_json(r.certified.verdict);
        std::cout << "d* = " << r.d_star << "\nx = " << fmt_vec(r.certified.solution.x) << "\n";
        print_verdict(r.certified.verdict);
        return exit_for(r.certified.verdict.unique);
    });
}

Matrix gaussian_matrix(std::size_t m, std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix a(m, n);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            a(i, j) = normal(rng);
        }
    }
    return a;
}

int cmd_random_batch(const GlobalOptions& g, std::size_t m, std::size_t n, std::size_t k, std::size_t count) {
    std::ofstream file;
    if (!g.json_path.empty()) {
        file.open(g.json_path);
        if (!file) {
            std::cerr << "error: cannot write " << g.json_path << "\n";
            return kUsage;
        }
    }
    std::ostream& out = g.json_path.empty() ? std::cout : file;
    const auto start = std::chrono::steady_clock::now();
    std::size_t compared = 0;
    std::size_t agreements = 0;
    std::size_t marginal = 0;
    try {
        g.tol.validate();
        if (m == 0 || n == 0 || k == 0 || k > n) {
            throw Error(ErrorKind::InvalidArgument, "need m, n >= 1 and 1 <= K <= n");
        }
        const EnumerationBudget budget = g.enumeration_budget();
        std::mt19937_64 rng(g.seed);
        for (std::size_t i = 0; i < count; ++i) {
            const Matrix a = gaussian_matrix(m, n, rng);
            const std::uint64_t oracle_seed = g.seed ^ (0x9E3779B97F4A7C15ULL * (i + 1));
            const RecoveryReport r = rsp_order_k(a, k, g.tol, budget.lp_subsets);
            const RecoveryOracleReport o = uniform_recovery_oracle(a, k, 1, oracle_seed, g.tol, budget.lp_subsets);
            const Verdict ov = oracle_verdict(o, RecoveryProperty::Rsp);
            Json rec{{"schema_version", kSchemaVersion},
                     {"command", "random-batch"},
                     {"instance", i},
                     {"m", m},
                     {"n", n},
                     {"K", k},
                     {"rsp", std::string(to_string(r.holds))},
                     {"counterexample", r.counterexample ? to_json(*r.counterexample) : Json(nullptr)},
                     {"oracle", std::string(to_string(ov))},
                     {"oracle_failing_support", o.failing_support ? to_json(*o.failing_support) : Json(nullptr)},
                     {"oracle_seed", oracle_seed}};
            if (r.holds == Verdict::Marginal || ov == Verdict::Marginal) {
                ++marginal;
                rec["agree"] = nullptr;
            } else {
                ++compared;
                const bool agree = r.holds == ov;
                agreements += agree ? 1 : 0;
                rec["agree"] = agree;
            }
            out << rec.dump() << "\n";
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        out << Json{{"schema_version", kSchemaVersion},
                    {"command", "random-batch"},
                    {"error", Json{{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}}}}
                   .dump()
            << "\n";
        return exit_for(e.kind());
    }
    const double rate = compared == 0 ? 1.0 : static_cast<double>(agreements) / static_cast<double>(compared);
    const auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start);
    out << Json{{"schema_version", kSchemaVersion},
                {"command", "random-batch"},
                {"summary", true},
                {"count", count},
                {"compared", compared},
                {"agreements", agreements},
                {"marginal", marginal},
                {"agreement_rate", rate},
                {"seed", g.seed},
                {"tolerances", to_json(g.tol)},
                {"timing_ms", elapsed.count()}}
               .dump()
        << "\n";
    return agreements == compared ? kYes : kOracleMismatch;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Certify unique least-l1-norm nonnegative solutions and order-K recovery properties"};
    app.require_subcommand(1);
    GlobalOptions g;
    std::uint64_t budget = 0;
    auto add_globals = [&](CLI::App* sub) {
        sub->add_option("--tol-feas", g.tol.feas_tol, "LP feasibility residual tolerance");
        sub->add_option("--tol-rank", g.tol.rank_tol, "relative pivot threshold for rank");
        sub->add_option("--rsp-margin", g.tol.rsp_margin, "required gap eta_i <= 1 - margin off the support");
        sub->add_option("--gap-tol", g.tol.gap_tol, "duality gap tolerance");
        sub->add_option("--zero-tol", g.tol.zero_tol, "x_i > zero_tol counts as nonzero");
        sub->add_option("--budget", budget, "subset enumeration cap (overrides RSPCERT_BUDGET)");
        sub->add_option("--seed", g.seed, "seed for randomized procedures");
        sub->add_option("--json", g.json_path, "write the JSON report to this path");
    };

    std::string a_path, b_path, x_path, w_path, c_path;

    auto* solve = app.add_subcommand("solve-l1", "least-l1-norm nonnegative solution and its uniqueness verdict");
    solve->add_option("A", a_path)->required();
    solve->add_option("b", b_path)->required();
    add_globals(solve);

    auto* certify = app.add_subcommand("certify", "certify that x is the unique least-(weighted-)l1 solution");
    certify->add_option("A", a_path)->required();
    certify->add_option("b", b_path)->required();
    certify->add_option("x", x_path)->required();
    certify->add_option("--weights", w_path, "positive weight vector");
    add_globals(certify);

    std::size_t k = 1;
    std::string property = "rsp";
    bool oracle = false;
    std::size_t trials = 1;
    auto* order = app.add_subcommand("order-k", "RSP/WRSP/PRSP/PWRSP of order K");
    order->add_option("A", a_path)->required();
    order->add_option("K", k)->required();
    order->add_option("--property", property, "rsp | wrsp | prsp | pwrsp")
        ->check(CLI::IsMember({"rsp", "wrsp", "prsp", "pwrsp"}));
    order->add_flag("--oracle", oracle, "cross-check with the brute-force recovery oracle");
    order->add_option("--trials", trials, "oracle trials per support")->check(CLI::PositiveNumber);
    add_globals(order);

    auto* classify = app.add_subcommand("classify", "G1/G2/G3 class, sparsest supports, l0/l1 equivalence");
    classify->add_option("A", a_path)->required();
    classify->add_option("b", b_path)->required();
    add_globals(classify);

    auto* lp_sparse = app.add_subcommand("lp-sparse", "sparsest optimal solution of min c^T x, Ax = b, x >= 0");
    lp_sparse->add_option("A", a_path)->required();
    lp_sparse->add_option("b", b_path)->required();
    lp_sparse->add_option("c", c_path)->required();
    add_globals(lp_sparse);

    std::size_t m = 0, n = 0, count = 0;
    auto* batch = app.add_subcommand("random-batch", "seeded Gaussian matrices: RSP_K certifier vs recovery oracle");
    batch->add_option("m", m)->required();
    batch->add_option("n", n)->required();
    batch->add_option("K", k)->required();
    batch->add_option("count", count)->required();
    add_globals(batch);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }
    if (budget > 0) {
        g.budget = budget;
    }

    try {
        if (*solve) return cmd_solve_l1(g, a_path, b_path);
        if (*certify) return cmd_certify(g, a_path, b_path, x_path, w_path);
        if (*order) return cmd_order_k(g, a_path, k, property, oracle, trials);
        if (*classify) return cmd_classify(g, a_path, b_path);
        if (*lp_sparse) return cmd_lp_sparse(g, a_path, b_path, c_path);
        if (*batch) return cmd_random_batch(g, m, n, k, count);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
