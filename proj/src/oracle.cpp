#include "rayq/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "rayq/random.hpp"

namespace rayq {

namespace {

// g(t) = lambda_2 of [[H, t conj(S)], [t S, conj(H)]], evaluated directly so
// the oracle does not route through the pencil module it cross-checks.
double karow_objective(const Matrix& h, const Matrix& s, double t) {
    const Index n = h.rows();
    Matrix big(2 * n, 2 * n);
    big.topLeftCorner(n, n) = h;
    big.topRightCorner(n, n) = t * s.conjugate();
    big.bottomLeftCorner(n, n) = t * s;
    big.bottomRightCorner(n, n) = h.conjugate();
    Eigen::SelfAdjointEigenSolver<Matrix> solver(big, Eigen::EigenvaluesOnly);
    return solver.eigenvalues()[2 * n - 2];
}

}  // namespace

KarowResult karow_single(const HermitianMatrix& h, const SymmetricMatrix& s,
                         double tol, Index grid_points) {
    if (h.dim() != s.dim())
        throw InputError("karow_single: dimension mismatch");
    if (tol <= 0 || grid_points < 8)
        throw InputError("karow_single: tol must be > 0 and grid_points >= 8");

    const Matrix& hm = h.get();
    const Matrix& sm = s.get();
    const RealVector sv = singular_values(sm);
    const double h_norm = spectral_norm(hm);

    KarowResult out;
    double t_end;
    if (h.dim() >= 2 && sv[1] > kRankTol * sv[0] && sv[0] > 0.0) {
        // Minimum attained in [0, 2||H|| / sigma_2(S)].
        t_end = 2.0 * h_norm / sv[1];
    } else {
        out.rank_warning = true;
        t_end = 8.0 * (1.0 + h_norm) / std::max(sv[0], 1e-12);
    }
    if (t_end <= 0.0) t_end = 1.0;

    auto g = [&](double t) { return karow_objective(hm, sm, t); };

    // Dense scan, then golden-section inside the best bracket.
    Index best_i = 0;
    double best_val = std::numeric_limits<double>::infinity();
    const double step = t_end / static_cast<double>(grid_points - 1);
    for (Index i = 0; i < grid_points; ++i) {
        const double val = g(step * static_cast<double>(i));
        if (val < best_val) {
            best_val = val;
            best_i = i;
        }
    }

    double lo = step * static_cast<double>(best_i > 0 ? best_i - 1 : 0);
    double hi = step * static_cast<double>(best_i + 1 < grid_points ? best_i + 1 : grid_points - 1);
    const double inv_phi = 0.6180339887498948482;
    double a = hi - inv_phi * (hi - lo);
    double b = lo + inv_phi * (hi - lo);
    double fa = g(a), fb = g(b);
    while (hi - lo > tol) {
        if (fa < fb) {
            hi = b;
            b = a;
            fb = fa;
            a = hi - inv_phi * (hi - lo);
            fa = g(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + inv_phi * (hi - lo);
            fb = g(b);
        }
    }
    const double t_ref = 0.5 * (lo + hi);
    const double f_ref = g(t_ref);
    if (f_ref < best_val) {
        out.value = f_ref;
        out.t_min = t_ref;
    } else {
        out.value = best_val;
        out.t_min = step * static_cast<double>(best_i);
    }
    return out;
}

std::optional<Vector> feasible_newton(const std::vector<SymmetricMatrix>& constraints,
                                      Vector v0, int max_iterations, double rtol) {
    const Index m = static_cast<Index>(constraints.size());
    if (m == 0 || v0.size() == 0) return std::nullopt;
    const Index n = v0.size();

    std::vector<double> scales(constraints.size());
    for (size_t j = 0; j < constraints.size(); ++j)
        scales[j] = std::max(spectral_norm(constraints[j].get()), 1e-300);

    Vector v = std::move(v0);
    for (int it = 0; it < max_iterations; ++it) {
        Vector r(m);
        Matrix jac(m, n);
        double worst = 0.0;
        const double vv = v.squaredNorm();
        for (Index j = 0; j < m; ++j) {
            const Vector sv = constraints[static_cast<size_t>(j)].get() * v;
            r[j] = dotu(v, sv);
            jac.row(j) = 2.0 * sv.transpose();
            worst = std::max(worst, std::abs(r[j]) / (scales[static_cast<size_t>(j)] * vv));
        }
        if (worst <= rtol) return v;

        // Minimum-norm correction for the underdetermined quadric system.
        Vector delta = jac.completeOrthogonalDecomposition().solve(Vector(-r));
        if (!delta.allFinite()) return std::nullopt;
        // Keep steps sane relative to the iterate.
        const double max_step = 2.0 * v.norm() + 1.0;
        if (delta.norm() > max_step) delta *= max_step / delta.norm();
        v += delta;
        if (v.norm() < 1e-12) return std::nullopt;  // collapsed into the trivial zero
    }
    return std::nullopt;
}

std::vector<Vector> feasible_sample(const std::vector<SymmetricMatrix>& constraints,
                                    Index count, std::uint64_t seed) {
    std::vector<Vector> out;
    if (constraints.empty() || count < 1) return out;
    const Index n = constraints.front().dim();

    const Index max_tries = 25 * count;
    for (Index attempt = 0; attempt < max_tries && static_cast<Index>(out.size()) < count; ++attempt) {
        Rng rng = derive_stream(seed, 0xFEA51B1Eu + static_cast<std::uint64_t>(attempt));
        Vector v0 = random_complex_unit_vector(n, rng);
        auto v = feasible_newton(constraints, v0);
        if (!v) continue;
        Vector unit = *v / v->norm();
        double worst = 0.0;
        for (const auto& s : constraints)
            worst = std::max(worst, std::abs(quadric(s.get(), unit)));
        if (worst <= 1e-8) out.push_back(std::move(unit));
    }
    return out;
}

namespace {

struct AscentResult {
    Vector v;
    double objective;
};

// Projected gradient ascent of v*Hv - rho sum |v^T S_j v|^2 on the unit
// sphere. Ascent direction is the Wirtinger gradient projected tangent.
AscentResult penalty_ascent(const ConstraintSystem& sys, Vector v, double rho,
                            int iterations) {
    const Matrix& h = sys.h().get();
    auto objective = [&](const Vector& u) {
        double val = rayleigh_numerator(h, u);
        for (const auto& s : sys.constraints()) val -= rho * std::norm(quadric(s.get(), u));
        return val;
    };

    double fv = objective(v);
    double step = 1.0 / (spectral_norm(h) + rho + 1.0);
    for (int it = 0; it < iterations; ++it) {
        Vector grad = h * v;
        for (const auto& s : sys.constraints()) {
            const Vector sv = s.get() * v;
            grad -= 2.0 * rho * dotu(v, sv) * sv.conjugate();
        }
        // Tangent component on the sphere.
        grad -= std::real(v.dot(grad)) * v;
        if (grad.norm() <= 1e-12 * (1.0 + std::abs(fv))) break;

        bool moved = false;
        for (int bt = 0; bt < 25; ++bt) {
            Vector cand = v + step * grad;
            cand /= cand.norm();
            const double fc = objective(cand);
            if (fc > fv + 1e-14 * std::abs(fv)) {
                v = std::move(cand);
                fv = fc;
                step *= 1.4;
                moved = true;
                break;
            }
            step *= 0.4;
        }
        if (!moved) break;
    }
    return {std::move(v), fv};
}

}  // namespace

std::optional<PenaltyResult> penalty_maximize(const ConstraintSystem& sys,
                                              Index starts, std::uint64_t seed) {
    if (starts < 1) throw InputError("penalty_maximize: starts must be >= 1");
    const Index n = sys.dim();
    const Matrix& h = sys.h().get();

    std::optional<PenaltyResult> best;
    for (Index start = 0; start < starts; ++start) {
        Rng rng = derive_stream(seed, 0x9E41A11Cu + static_cast<std::uint64_t>(start));
        Vector v = random_complex_unit_vector(n, rng);
        for (double rho : {1e1, 1e3, 1e5, 1e7})
            v = penalty_ascent(sys, std::move(v), rho, 200).v;

        auto polished = feasible_newton(sys.constraints(), v);
        if (!polished) continue;
        Vector unit = *polished / polished->norm();

        double residual = 0.0;
        for (const auto& s : sys.constraints())
            residual = std::max(residual, std::abs(quadric(s.get(), unit)));
        if (residual > 1e-6) continue;

        const double value = rayleigh_numerator(h, unit);
        if (!best || value > best->value) best = PenaltyResult{value, std::move(unit), residual};
    }
    return best;
}

}  // namespace rayq
