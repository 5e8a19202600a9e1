#include "rayq/detail/optim.hpp"

#include <algorithm>
#include <vector>

namespace rayq::detail {

RealVector project_ball(const RealVector& x, double radius) {
    if (!std::isfinite(radius)) return x;
    if (radius <= 0.0) return RealVector::Zero(x.size());
    const double nrm = x.norm();
    if (nrm <= radius) return x;
    return x * (radius / nrm);
}

namespace {

struct Simplex {
    std::vector<RealVector> pts;
    std::vector<double> vals;
};

void sort_simplex(Simplex& s) {
    const size_t n = s.pts.size();
    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return s.vals[a] < s.vals[b]; });
    std::vector<RealVector> pts(n);
    std::vector<double> vals(n);
    for (size_t i = 0; i < n; ++i) {
        pts[i] = s.pts[order[i]];
        vals[i] = s.vals[order[i]];
    }
    s.pts = std::move(pts);
    s.vals = std::move(vals);
}

}  // namespace

LocalResult nelder_mead(const ValueFn& value, const RealVector& x0,
                        const LocalOptions& opts, double initial_scale) {
    const Index d = x0.size();
    int evals = 0;
    auto eval = [&](const RealVector& x) {
        ++evals;
        return value(x);
    };

    Simplex s;
    s.pts.reserve(static_cast<size_t>(d) + 1);
    s.pts.push_back(project_ball(x0, opts.ball_radius));
    for (Index i = 0; i < d; ++i) {
        RealVector p = x0;
        p[i] += initial_scale;
        s.pts.push_back(project_ball(p, opts.ball_radius));
    }
    for (const auto& p : s.pts) s.vals.push_back(eval(p));
    sort_simplex(s);

    const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;
    const int max_evals = opts.simplex_max_evals_per_dim * static_cast<int>(d);

    while (evals < max_evals) {
        // Converged when both the value spread and the simplex diameter are tiny.
        const double spread = s.vals.back() - s.vals.front();
        double diam = 0.0;
        for (size_t i = 1; i < s.pts.size(); ++i)
            diam = std::max(diam, (s.pts[i] - s.pts[0]).norm());
        if (spread <= 1e-13 * (1.0 + std::abs(s.vals.front())) &&
            diam <= 1e-10 * (1.0 + s.pts[0].norm()))
            break;

        RealVector centroid = RealVector::Zero(d);
        for (size_t i = 0; i + 1 < s.pts.size(); ++i) centroid += s.pts[i];
        centroid /= static_cast<double>(d);

        RealVector xr = project_ball(centroid + alpha * (centroid - s.pts.back()), opts.ball_radius);
        const double fr = eval(xr);
        if (fr < s.vals.front()) {
            RealVector xe = project_ball(centroid + gamma * (centroid - s.pts.back()), opts.ball_radius);
            const double fe = eval(xe);
            if (fe < fr) {
                s.pts.back() = xe;
                s.vals.back() = fe;
            } else {
                s.pts.back() = xr;
                s.vals.back() = fr;
            }
        } else if (fr < s.vals[s.vals.size() - 2]) {
            s.pts.back() = xr;
            s.vals.back() = fr;
        } else {
            RealVector xc = project_ball(centroid + rho * (s.pts.back() - centroid), opts.ball_radius);
            const double fc = eval(xc);
            if (fc < s.vals.back()) {
                s.pts.back() = xc;
                s.vals.back() = fc;
            } else {
                for (size_t i = 1; i < s.pts.size(); ++i) {
                    s.pts[i] = project_ball(s.pts[0] + sigma * (s.pts[i] - s.pts[0]), opts.ball_radius);
                    s.vals[i] = eval(s.pts[i]);
                }
            }
        }
        sort_simplex(s);
    }

    LocalResult out;
    out.x = s.pts.front();
    out.value = s.vals.front();
    out.evaluations = evals;
    out.used_simplex_fallback = true;
    return out;
}

LocalResult minimize_local(const ValueFn& value, const GradFn& grad,
                           const RealVector& x0, const LocalOptions& opts) {
    const Index d = x0.size();
    int evals = 0;

    RealVector x = project_ball(x0, opts.ball_radius);
    auto fallback = [&](const RealVector& from) {
        const double scale = std::isfinite(opts.ball_radius)
                                 ? std::max(opts.simplex_scale * opts.ball_radius, 1e-8)
                                 : std::max(1e-3 * (1.0 + from.norm()), 1e-6);
        LocalResult r = nelder_mead(value, from, opts, scale);
        r.evaluations += evals;
        return r;
    };

    std::optional<RealVector> g0 = grad(x);
    if (!g0) return fallback(x);

    double fx = value(x);
    ++evals;
    RealVector gx = *g0;
    RealMatrix h_inv = RealMatrix::Identity(d, d);
    const double c1 = 1e-4;

    for (int it = 0; it < opts.max_iterations; ++it) {
        if (gx.norm() <= opts.grad_tol) break;

        RealVector p = -(h_inv * gx);
        double slope = gx.dot(p);
        if (slope >= 0.0) {
            h_inv = RealMatrix::Identity(d, d);
            p = -gx;
            slope = gx.dot(p);
        }

        double step = 1.0;
        bool accepted = false;
        RealVector x_new = x;
        double f_new = fx;
        for (int ls = 0; ls < 40; ++ls) {
            x_new = project_ball(x + step * p, opts.ball_radius);
            f_new = value(x_new);
            ++evals;
            if (f_new <= fx + c1 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            // Gradient model no longer explains the function (likely close
            // to a coalescence kink); hand over to the simplex.
            LocalResult r = fallback(x);
            if (r.value > fx) {
                r.x = x;
                r.value = fx;
            }
            return r;
        }

        std::optional<RealVector> g_new = grad(x_new);
        if (!g_new) {
            LocalResult r = fallback(x_new);
            if (r.value > std::min(fx, f_new)) {
                r.x = f_new < fx ? x_new : x;
                r.value = std::min(fx, f_new);
            }
            return r;
        }

        const RealVector s = x_new - x;
        const RealVector y = *g_new - gx;
        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            const RealVector hy = h_inv * y;
            const double yhy = y.dot(hy);
            h_inv += ((sy + yhy) / (sy * sy)) * (s * s.transpose()) -
                     (hy * s.transpose() + s * hy.transpose()) / sy;
        }
        x = x_new;
        fx = f_new;
        gx = *g_new;
        if (s.norm() <= 1e-14 * (1.0 + x.norm())) break;
    }

    LocalResult out;
    out.x = x;
    out.value = fx;
    out.grad_norm = gx.norm();
    out.evaluations = evals;
    return out;
}

}  // namespace rayq::detail
