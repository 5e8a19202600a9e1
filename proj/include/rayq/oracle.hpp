#pragma once

#include <optional>
#include <vector>

#include "rayq/pencil.hpp"

namespace rayq {

struct KarowResult {
    double value = 0.0;
    double t_min = 0.0;
    bool rank_warning = false;  // rank(S) < 2: no finite bracket, interval was grown
};

/// One-parameter formula for the single-constraint supremum:
/// inf over t >= 0 of lambda_2([[H, t conj(S)], [t S, conj(H)]]), scanned on a
/// dense grid over [0, 2||H||/sigma_2(S)] and refined by golden section.
/// Independent of the multistart pencil minimizer; used to cross-check it.
KarowResult karow_single(const HermitianMatrix& h, const SymmetricMatrix& s,
                         double tol = 1e-10, Index grid_points = 2000);

/// min-norm Newton for the residual map v -> (v^T S_j v)_j. Returns the
/// converged vector (not normalized) or nullopt. The map is holomorphic, so
/// plain complex Newton steps apply; rtol is relative to ||S_j|| ||v||^2.
std::optional<Vector> feasible_newton(const std::vector<SymmetricMatrix>& constraints,
                                      Vector v0, int max_iterations = 60,
                                      double rtol = 1e-12);

/// Unit vectors with max_j |v^T S_j v| <= 1e-8, from Newton on random starts.
/// Returns however many of `count` converged (possibly none).
std::vector<Vector> feasible_sample(const std::vector<SymmetricMatrix>& constraints,
                                    Index count, std::uint64_t seed);

struct PenaltyResult {
    double value = 0.0;   // v*Hv at the best feasible point: a lower bound on m
    Vector v;
    double residual = 0.0;  // max_j |v^T S_j v| at the returned point
};

/// Direct attack on the constrained supremum: maximize
/// v*Hv - rho sum_j |v^T S_j v|^2 on the unit sphere by projected gradient
/// ascent with penalty continuation rho in {1e1, 1e3, 1e5, 1e7}, then polish
/// feasibility by Newton. nullopt when no start reaches residual <= 1e-6.
std::optional<PenaltyResult> penalty_maximize(const ConstraintSystem& sys,
                                              Index starts, std::uint64_t seed);

}  // namespace rayq
