#include "rayq/experiment.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "rayq/random.hpp"

namespace rayq {

MatrixPolynomial random_polynomial(Structure structure, Index n, Index degree,
                                   std::uint64_t seed) {
    if (n < 1 || degree < 1)
        throw InputError("random_polynomial: need n >= 1 and degree >= 1");
    Rng rng = derive_stream(seed, 0x501Fu);
    const Index m = degree;
    std::vector<Matrix> coeffs(static_cast<size_t>(m) + 1, Matrix::Zero(n, n));

    switch (structure) {
        case Structure::pal_T:
            for (Index j = 0; j <= (m - 1) / 2; ++j) {
                coeffs[j] = random_complex_matrix(n, n, rng);
                coeffs[m - j] = coeffs[j].transpose();
            }
            if (m % 2 == 0) coeffs[m / 2] = random_symmetric(n, rng);
            break;
        case Structure::antipal_T:
            for (Index j = 0; j <= (m - 1) / 2; ++j) {
                coeffs[j] = random_complex_matrix(n, n, rng);
                coeffs[m - j] = -coeffs[j].transpose();
            }
            if (m % 2 == 0) coeffs[m / 2] = random_skew_symmetric(n, rng);
            break;
        case Structure::even_T:
            for (Index j = 0; j <= m; ++j)
                coeffs[j] = j % 2 == 0 ? random_symmetric(n, rng) : random_skew_symmetric(n, rng);
            break;
        case Structure::odd_T:
            for (Index j = 0; j <= m; ++j)
                coeffs[j] = j % 2 == 0 ? random_skew_symmetric(n, rng) : random_symmetric(n, rng);
            break;
        case Structure::skew_T:
            for (Index j = 0; j <= m; ++j) coeffs[j] = random_skew_symmetric(n, rng);
            break;
        case Structure::none:
            for (Index j = 0; j <= m; ++j) coeffs[j] = random_complex_matrix(n, n, rng);
            break;
    }
    return MatrixPolynomial(std::move(coeffs), structure);
}

Vector polynomial_eigenvalues(const MatrixPolynomial& p) {
    const Index m = p.degree();
    const Index n = p.size();

    auto companion_eigs = [&](const std::vector<Matrix>& coeffs) {
        const Matrix& lead = coeffs.back();
        const RealVector sv = singular_values(lead);
        if (sv[sv.size() - 1] <= 1e-10 * std::max(sv[0], 1e-300)) return Vector();
        const auto lu = lead.partialPivLu();
        Matrix comp = Matrix::Zero(m * n, m * n);
        for (Index b = 0; b + 1 < m; ++b)
            comp.block(b * n, (b + 1) * n, n, n) = Matrix::Identity(n, n);
        for (Index b = 0; b < m; ++b)
            comp.block((m - 1) * n, b * n, n, n) = -lu.solve(coeffs[static_cast<size_t>(b)]);
        Eigen::ComplexEigenSolver<Matrix> solver(comp);
        return Vector(solver.eigenvalues());
    };

    Vector eigs = companion_eigs(p.coefficients());
    if (eigs.size() > 0) return eigs;

    // Leading coefficient singular: use the reversal, whose eigenvalues are
    // the reciprocals.
    std::vector<Matrix> reversed(p.coefficients().rbegin(), p.coefficients().rend());
    Vector rev = companion_eigs(reversed);
    if (rev.size() == 0)
        throw InputError(
            "polynomial_eigenvalues: both leading and trailing coefficients are singular");
    Vector out(rev.size());
    Index kept = 0;
    for (Index i = 0; i < rev.size(); ++i)
        if (std::abs(rev[i]) > 1e-12) out[kept++] = 1.0 / rev[i];
    return out.head(kept).eval();
}

ExperimentKind experiment_kind_from_string(const std::string& name) {
    if (name == "pal-table") return ExperimentKind::pal_table;
    if (name == "even-table") return ExperimentKind::even_table;
    if (name == "approach-sweep") return ExperimentKind::approach_sweep;
    throw InputError("unknown experiment kind '" + name +
                     "' (expected pal-table, even-table or approach-sweep)");
}

namespace {

// Random lambda away from the structured reductions' excluded points.
Complex admissible_lambda(Rng& rng) {
    for (;;) {
        const double r = rng.uniform(0.4, 1.6);
        const double theta = rng.uniform(0.0, 6.283185307179586);
        const Complex lam = std::polar(r, theta);
        if (std::abs(lam - 1.0) < 0.15 || std::abs(lam + 1.0) < 0.15) continue;
        return lam;
    }
}

io::ReportRecord evaluate_point(const MatrixPolynomial& p, Complex lam,
                                const SolverOptions& solver) {
    io::ReportRecord row;
    row.lambda = lam;
    row.eta_unstructured = eta_unstructured(p, lam);
    const BackwardErrorReport rep = eta_structured(p, lam, solver);
    row.eta_structured = rep.eta;
    row.status = rep.status;
    row.m_value = rep.m_value;
    if (rep.minimization) row.t_hat = rep.minimization->t_hat;
    return row;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
    constexpr Index kTableRows = 6;
    constexpr Index kSweepRows = 10;

    const Structure structure =
        config.kind == ExperimentKind::even_table ? Structure::even_T : Structure::pal_T;
    const Index n = config.n > 0 ? config.n
                                 : (config.kind == ExperimentKind::even_table ? 4 : 3);

    const MatrixPolynomial p = random_polynomial(structure, n, config.degree, config.seed);
    SolverOptions solver = config.solver;
    solver.seed = config.seed;

    ExperimentResult out;
    if (config.kind == ExperimentKind::approach_sweep) {
        const Vector eigs = polynomial_eigenvalues(p);
        // Deterministic pick: an eigenvalue of moderate modulus, clear of the
        // excluded points, with |lambda| closest to 1.
        std::optional<Complex> target;
        double best_score = std::numeric_limits<double>::infinity();
        for (Index i = 0; i < eigs.size(); ++i) {
            const Complex lam = eigs[i];
            const double mod = std::abs(lam);
            if (!std::isfinite(mod) || mod < 0.25 || mod > 4.0) continue;
            if (std::abs(lam - 1.0) < 0.15 || std::abs(lam + 1.0) < 0.15) continue;
            const double score = std::abs(mod - 1.0);
            if (score < best_score) {
                best_score = score;
                target = lam;
            }
        }
        if (!target)
            throw std::runtime_error("approach-sweep: no admissible eigenvalue found; "
                                     "try another seed");

        const Complex direction = std::polar(1.0, std::arg(*target) + 0.4);
        const double d0 = 0.08 * std::max(1.0, std::abs(*target));
        double dist = d0;
        for (Index i = 0; i < kSweepRows; ++i, dist *= 0.5)
            out.rows.push_back(evaluate_point(p, *target + dist * direction, solver));
    } else {
        Rng rng = derive_stream(config.seed, 0x7AB1Eu);
        for (Index i = 0; i < kTableRows; ++i)
            out.rows.push_back(evaluate_point(p, admissible_lambda(rng), solver));
    }

    out.csv = io::experiment_csv_header() + "\n";
    for (const auto& row : out.rows) out.csv += io::experiment_csv_row(row) + "\n";
    return out;
}

}  // namespace rayq
