#pragma once

#include <functional>
#include <optional>

#include "rayq/types.hpp"

namespace rayq::detail {

/// Objective for the local searches. The gradient is optional per point:
/// an engaged result means the analytic gradient is trustworthy there,
/// disengaged means the point is on (or too close to) an eigenvalue
/// coalescence and the caller should fall back to derivative-free steps.
using ValueFn = std::function<double(const RealVector&)>;
using GradFn = std::function<std::optional<RealVector>(const RealVector&)>;

struct LocalResult {
    RealVector x;
    double value = 0.0;
    double grad_norm = std::numeric_limits<double>::quiet_NaN();
    int evaluations = 0;
    bool used_simplex_fallback = false;
};

struct LocalOptions {
    double grad_tol = 1e-10;       // scaled by the caller
    int max_iterations = 200;
    double ball_radius = std::numeric_limits<double>::infinity();  // projection radius
    int simplex_max_evals_per_dim = 400;
    double simplex_scale = 0.05;   // initial simplex edge relative to radius
};

/// Clamp x into the closed ball of the given radius (no-op when infinite).
RealVector project_ball(const RealVector& x, double radius);

/// BFGS with Armijo backtracking, iterates projected onto the ball.
/// Switches to Nelder-Mead from the current point as soon as the gradient
/// callback reports an untrustworthy (coalescent) point.
LocalResult minimize_local(const ValueFn& value, const GradFn& grad,
                           const RealVector& x0, const LocalOptions& opts);

/// Plain Nelder-Mead, vertices projected onto the ball.
LocalResult nelder_mead(const ValueFn& value, const RealVector& x0,
                        const LocalOptions& opts, double initial_scale);

}  // namespace rayq::detail
