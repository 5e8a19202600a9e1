// rayq: constrained Rayleigh-quotient suprema and structured eigenvalue
// backward errors of matrix polynomials.
//
// Exit codes: 0 = exact result, 2 = bound-only result, 1 = usage/input error.
// experiment and rank-check exit 0 on any successful run.

#include <chrono>
#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "rayq/experiment.hpp"
#include "rayq/io.hpp"
#include "rayq/oracle.hpp"

namespace {

using namespace rayq;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("RQ_SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0') return v;
        throw InputError(std::string("RQ_SEED is not an unsigned integer: '") + env + "'");
    }
    return 0;
}

int status_exit_code(MinStatus s) { return s == MinStatus::exact ? 0 : 2; }
int status_exit_code(EtaStatus s) { return s == EtaStatus::exact ? 0 : 2; }

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

int cmd_mhs(const std::string& input, bool tilde, SolverOptions opts, bool csv,
            bool with_timings) {
    const ConstraintSystem sys = io::parse_system(input);
    Timer timer;
    const MValue m = tilde ? m_tilde_value(sys, opts) : m_value(sys, opts);
    if (csv) {
        std::cout << io::mhs_csv_header() << "\n" << io::mhs_csv_row(m, tilde) << "\n";
    } else {
        std::cout << io::mhs_report_to_json(sys, m, tilde, with_timings, timer.seconds()).dump(2)
                  << "\n";
    }
    return status_exit_code(m.status);
}

int cmd_backward_error(const std::string& poly_path, const std::string& lambda_text,
                       const std::string& structure_override, SolverOptions opts, bool csv,
                       bool with_timings, bool verify) {
    MatrixPolynomial p = io::parse_polynomial(poly_path);
    if (!structure_override.empty())
        p = MatrixPolynomial(p.coefficients(), structure_from_string(structure_override));
    const Complex lambda = io::parse_complex(lambda_text);

    Timer timer;
    io::ReportRecord record;
    record.lambda = lambda;
    record.eta_unstructured = eta_unstructured(p, lambda);
    const BackwardErrorReport rep = eta_structured(p, lambda, opts);
    record.eta_structured = rep.eta;
    record.status = rep.status;
    record.m_value = rep.m_value;
    if (rep.minimization) record.t_hat = rep.minimization->t_hat;
    record.seconds = timer.seconds();

    if (csv) {
        std::cout << io::record_csv_header() << "\n" << io::record_csv_row(record) << "\n";
        return status_exit_code(rep.status);
    }

    io::json j = io::record_to_json(record, with_timings);
    if (verify && rep.system) {
        io::json v;
        const auto penalty = penalty_maximize(*rep.system, 20, opts.seed);
        if (penalty) {
            v["penalty_value"] = penalty->value;
            v["penalty_delta"] = rep.m_value - penalty->value;  // >= -1e-6 expected
        } else {
            v["penalty_value"] = nullptr;
        }
        if (rep.system->k() == 0) {
            const KarowResult karow =
                karow_single(rep.system->h(), rep.system->constraint(0));
            v["karow_value"] = karow.value;
            v["karow_delta"] =
                std::abs(rep.m_value - karow.value) / std::max(std::abs(karow.value), 1e-300);
        }
        j["verify"] = std::move(v);
    }
    std::cout << j.dump(2) << "\n";
    return status_exit_code(rep.status);
}

int cmd_experiment(const std::string& kind, Index n, Index degree, std::uint64_t seed,
                   const std::string& out_path) {
    ExperimentConfig config;
    config.kind = experiment_kind_from_string(kind);
    config.n = n;
    config.degree = degree;
    config.seed = seed;
    const ExperimentResult result = run_experiment(config);
    if (out_path.empty())
        std::cout << result.csv;
    else
        io::write_text(out_path, result.csv);
    return 0;
}

int cmd_mu_skew(const std::string& matrix_path, SolverOptions opts) {
    const Matrix m = io::parse_matrix_file(matrix_path);
    const MuResult mu = mu_skew_value(m, opts);

    io::json j;
    j["mu"] = mu.mu;
    j["m_value"] = mu.m.value;
    j["status"] = to_string(mu.m.status);
    j["rank_warning"] = mu.rank_warning;
    if (!mu.rank_warning) {
        // Cross-check against the one-parameter formula for k = 0.
        const Matrix s0 = m + m.transpose();
        const KarowResult karow =
            karow_single(trusted_hermitian(m.adjoint() * m), trusted_symmetric(s0));
        const double mu_karow = karow.value > 0.0 ? std::sqrt(karow.value) : 0.0;
        j["mu_karow"] = mu_karow;
        j["karow_delta"] = std::abs(mu.mu - mu_karow) / std::max(mu_karow, 1e-300);
    }
    std::cout << j.dump(2) << "\n";
    return status_exit_code(mu.m.status);
}

int cmd_rank_check(const std::string& input, const std::string& poly_path,
                   const std::string& lambda_text, Index trials, std::uint64_t seed) {
    std::optional<ConstraintSystem> sys;
    std::optional<Index> claimed;
    std::vector<RealVector> directed;

    if (!poly_path.empty()) {
        const MatrixPolynomial p = io::parse_polynomial(poly_path);
        if (lambda_text.empty())
            throw InputError("rank-check: --lambda is required together with --poly");
        const Complex lambda = io::parse_complex(lambda_text);
        sys = reduce_to_constraints(p, lambda);
        claimed = claimed_reduction_rank(p);
        if (p.structure() == Structure::skew_T && p.degree() == 1)
            directed.push_back(skew_pencil_witness(lambda));
    } else if (!input.empty()) {
        sys = io::parse_system(input);
    } else {
        throw InputError("rank-check: provide --input SYSTEM or --poly POLY --lambda L");
    }

    const RankProbeReport report = rank_condition_probe(*sys, trials, seed, claimed, directed);
    io::json j;
    j["verdict"] = to_string(report.verdict);
    j["min_rank"] = report.min_rank;
    j["max_rank"] = report.max_rank;
    j["points_checked"] = report.points_checked;
    if (claimed) j["claimed_rank"] = *claimed;
    if (report.witness) {
        io::json w = io::json::array();
        for (Index i = 0; i < report.witness->size(); ++i) w.push_back((*report.witness)[i]);
        j["witness"] = std::move(w);
    }
    std::cout << j.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Constrained Rayleigh-quotient suprema and structured eigenvalue "
                 "backward errors of matrix polynomials"};
    app.require_subcommand(1);

    std::string input, poly_path, lambda_text, structure_override, out_path, kind;
    std::string matrix_path;
    bool tilde = false, csv = false, with_timings = false, verify = false;
    Index n = 0, degree = 3, trials = 100;
    SolverOptions opts;

    auto add_solver_flags = [&](CLI::App* cmd) {
        cmd->add_option("--starts", opts.starts, "multistart points (default 30)");
        cmd->add_option("--seed", opts.seed, "RNG seed (default: RQ_SEED env or 0)");
    };

    CLI::App* mhs = app.add_subcommand("mhs", "Rayleigh-quotient supremum of a system file");
    mhs->add_option("--input", input, "system JSON file")->required();
    mhs->add_flag("--tilde", tilde, "compute the infimum variant instead");
    mhs->add_flag("--csv", csv, "CSV output instead of JSON");
    mhs->add_flag("--timings", with_timings, "include wall time in the report");
    add_solver_flags(mhs);

    CLI::App* be = app.add_subcommand("backward-error",
                                      "structured and unstructured eigenvalue backward error");
    be->add_option("--poly", poly_path, "polynomial JSON file")->required();
    be->add_option("--lambda", lambda_text, "evaluation point, 'a+bi' or 'a,b'")->required();
    be->add_option("--structure", structure_override,
                   "override the file's structure tag");
    be->add_flag("--csv", csv, "CSV output instead of JSON");
    be->add_flag("--timings", with_timings, "include wall time in the report");
    be->add_flag("--verify", verify, "cross-check with the penalty and one-parameter oracles");
    add_solver_flags(be);

    CLI::App* exp = app.add_subcommand("experiment", "seeded random study, CSV output");
    exp->add_option("--kind", kind, "pal-table | even-table | approach-sweep")->required();
    exp->add_option("--n", n, "matrix size (default: kind-specific)");
    exp->add_option("--degree", degree, "polynomial degree (default 3)");
    exp->add_option("--seed", opts.seed, "RNG seed (default: RQ_SEED env or 0)");
    exp->add_option("--out", out_path, "output CSV path (default: stdout)");

    CLI::App* mu = app.add_subcommand("mu-skew",
                                      "mu-value under skew-symmetric perturbations");
    mu->add_option("--matrix", matrix_path, "matrix JSON file")->required();
    add_solver_flags(mu);

    CLI::App* rank = app.add_subcommand("rank-check", "sample the pencil rank condition");
    rank->add_option("--input", input, "system JSON file");
    rank->add_option("--poly", poly_path, "polynomial JSON file (with --lambda)");
    rank->add_option("--lambda", lambda_text, "evaluation point for --poly");
    rank->add_option("--trials", trials, "sample count (default 100)");
    rank->add_option("--seed", opts.seed, "RNG seed (default: RQ_SEED env or 0)");

    bool seed_given = false;
    try {
        app.parse(argc, argv);
        seed_given = mhs->count("--seed") || be->count("--seed") || exp->count("--seed") ||
                     mu->count("--seed") || rank->count("--seed");
        if (!seed_given) opts.seed = default_seed();

        if (app.got_subcommand(mhs)) return cmd_mhs(input, tilde, opts, csv, with_timings);
        if (app.got_subcommand(be))
            return cmd_backward_error(poly_path, lambda_text, structure_override, opts, csv,
                                      with_timings, verify);
        if (app.got_subcommand(exp)) return cmd_experiment(kind, n, degree, opts.seed, out_path);
        if (app.got_subcommand(mu)) return cmd_mu_skew(matrix_path, opts);
        if (app.got_subcommand(rank))
            return cmd_rank_check(input, poly_path, lambda_text, trials, opts.seed);
        return 1;
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const rayq::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
