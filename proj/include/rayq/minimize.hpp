#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "rayq/pencil.hpp"

namespace rayq {

struct SolverOptions {
    Index starts = 30;              // random multistart points inside the search ball
    std::uint64_t seed = 0;
    double local_tol = 1e-10;       // gradient-norm stop, scaled by max_j ||S_j||
    double gap_tol = 1e-8;          // eigen-gap simplicity threshold, relative to ||F||
    Index max_ball_growth = 3;      // fallback ball doublings when beta is absent
    Index c_sphere_starts = 50;     // sphere samples for the c estimate

    void validate() const {
        if (starts < 1 || c_sphere_starts < 1 || max_ball_growth < 1)
            throw InputError("SolverOptions: counts must be >= 1");
        if (local_tol <= 0 || gap_tol <= 0)
            throw InputError("SolverOptions: tolerances must be > 0");
    }
};

enum class MinStatus {
    exact,                     // validated certificate: the value equals m
    upper_bound_only,          // no certificate; value is an upper bound on m
    unbounded_region_warning,  // additionally, no finite search region (c <= 0)
};

std::string to_string(MinStatus s);

struct MinimizationResult {
    RealVector t_hat;
    double lambda2_hat = 0.0;
    PsiVariant variant = PsiVariant::second_largest;
    bool is_simple = false;
    std::optional<Vector> certificate;  // unit vector v with v^T S_j v = 0, v*Hv = lambda2_hat
    std::optional<double> beta;
    std::optional<double> c_value;
    MinStatus status = MinStatus::upper_bound_only;

    // Search diagnostics.
    Index best_start = -1;
    int evaluations = 0;
    double certificate_residual = std::numeric_limits<double>::quiet_NaN();
};

/// Global minimization of psi over R^{2k+1}: deterministic seeded multistart
/// (origin, axis points, and `starts` uniform draws in the search ball),
/// BFGS on the analytic gradient away from eigenvalue coalescence and a
/// simplex fallback on it. Deterministic for fixed (input, seed); ties are
/// broken by value, then smaller ||t||, then start index.
MinimizationResult minimize_psi(const ConstraintSystem& sys,
                                PsiVariant variant = PsiVariant::second_largest,
                                const SolverOptions& opts = {});

struct MValue {
    double value = 0.0;
    MinStatus status = MinStatus::upper_bound_only;
    MinimizationResult minimization;
};

/// m_{hs_0...s_k}: the constrained Rayleigh-quotient supremum. Exact when
/// status == exact; otherwise the value is an upper bound on m.
MValue m_value(const ConstraintSystem& sys, const SolverOptions& opts = {});

/// The infimum variant via the identity m~(H, S) = -m(-H, -S); when not
/// exact the value is a lower bound on m~.
MValue m_tilde_value(const ConstraintSystem& sys, const SolverOptions& opts = {});

/// Certificate vector for a finished minimization: a unit v with
/// |v^T S_j v| <= 1e-7 ||S_j|| for all j and |v*Hv - lambda2_hat| <= 1e-7 ||H||.
/// For a simple optimum v is the top half of the lambda_2 eigenvector of
/// F(t_hat) (the proof's y = alpha x alignment); for a small eigenvalue
/// cluster a feasibility Newton over the cluster eigenspace is tried.
/// Absent when validation fails.
std::optional<Vector> extract_certificate(const ConstraintSystem& sys,
                                          const MinimizationResult& result,
                                          double gap_tol = 1e-8);

/// Max over j of |v^T S_j v| / ||S_j|| combined with |v*Hv - lambda2| / ||H||;
/// the quantity the 1e-7 certificate validation thresholds bound.
double certificate_residual(const ConstraintSystem& sys, const Vector& v, double lambda2);

}  // namespace rayq
