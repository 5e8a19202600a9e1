#include "rayq/pencil.hpp"

#include <Eigen/Eigenvalues>

#include "rayq/detail/optim.hpp"
#include "rayq/random.hpp"

namespace rayq {

ConstraintSystem::ConstraintSystem(HermitianMatrix h, std::vector<SymmetricMatrix> constraints)
    : h_(std::move(h)), constraints_(std::move(constraints)) {
    if (constraints_.empty())
        throw InputError("ConstraintSystem: at least one constraint is required");
    for (size_t j = 0; j < constraints_.size(); ++j)
        if (constraints_[j].dim() != h_.dim())
            throw InputError("ConstraintSystem: constraint " + std::to_string(j) + " is " +
                             std::to_string(constraints_[j].dim()) + "x" +
                             std::to_string(constraints_[j].dim()) + ", expected " +
                             std::to_string(h_.dim()) + "x" + std::to_string(h_.dim()));
}

ConstraintSystem ConstraintSystem::negated() const {
    std::vector<SymmetricMatrix> neg;
    neg.reserve(constraints_.size());
    for (const auto& s : constraints_) neg.push_back(s.negated());
    return ConstraintSystem(h_.negated(), std::move(neg));
}

namespace {

void check_param(const ConstraintSystem& sys, const RealVector& t) {
    if (t.size() != sys.param_dim())
        throw InputError("parameter vector has length " + std::to_string(t.size()) +
                         ", expected 2k+1 = " + std::to_string(sys.param_dim()));
    if (!t.allFinite()) throw InputError("parameter vector has non-finite entries");
}

Matrix assemble_f_raw(const ConstraintSystem& sys, const RealVector& t) {
    const Index n = sys.dim();
    const Index k = sys.k();
    Matrix f = Matrix::Zero(n, n);
    for (Index j = 0; j < k; ++j)
        f += Complex(t[2 * j], t[2 * j + 1]) * sys.constraint(j).get();
    f += t[2 * k] * sys.constraint(k).get();
    return f;
}

// F(t) = [[H, conj(f)], [f, conj(H)]]; Hermitian because f is symmetric.
Matrix assemble_F_raw(const ConstraintSystem& sys, const RealVector& t) {
    const Index n = sys.dim();
    const Matrix f = assemble_f_raw(sys, t);
    Matrix big(2 * n, 2 * n);
    big.topLeftCorner(n, n) = sys.h().get();
    big.topRightCorner(n, n) = f.conjugate();
    big.bottomLeftCorner(n, n) = f;
    big.bottomRightCorner(n, n) = sys.h().get().conjugate();
    return big;
}

}  // namespace

PencilAssembly assemble_blocks(const ConstraintSystem& sys) {
    const Index n = sys.dim();
    const Index k = sys.k();
    PencilAssembly out;
    out.g = Matrix::Zero(2 * n, 2 * n);
    out.g.topLeftCorner(n, n) = sys.h().get();
    out.g.bottomRightCorner(n, n) = sys.h().get().conjugate();

    auto off_diag = [n](const Matrix& s) {
        Matrix b = Matrix::Zero(2 * n, 2 * n);
        b.topRightCorner(n, n) = s.conjugate();
        b.bottomLeftCorner(n, n) = s;
        return b;
    };
    out.blocks.reserve(static_cast<size_t>(sys.param_dim()));
    for (Index j = 0; j < k; ++j) {
        const Matrix& s = sys.constraint(j).get();
        out.blocks.push_back(off_diag(s));
        out.blocks.push_back(off_diag(Complex(0, 1) * s));
    }
    out.blocks.push_back(off_diag(sys.constraint(k).get()));
    return out;
}

Matrix assemble_f(const ConstraintSystem& sys, const RealVector& t) {
    check_param(sys, t);
    return assemble_f_raw(sys, t);
}

HermitianMatrix assemble_F(const ConstraintSystem& sys, const RealVector& t) {
    check_param(sys, t);
    return trusted_hermitian(assemble_F_raw(sys, t));
}

double psi(const ConstraintSystem& sys, const RealVector& t, PsiVariant variant) {
    check_param(sys, t);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(assemble_F_raw(sys, t), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("psi: eigensolver did not converge");
    const Index two_n = 2 * sys.dim();
    // Ascending storage: lambda_2 (descending) sits at two_n - 2,
    // lambda_{2n-1} (descending) at index 1.
    return variant == PsiVariant::second_largest ? solver.eigenvalues()[two_n - 2]
                                                 : solver.eigenvalues()[1];
}

PsiGradient psi_gradient(const ConstraintSystem& sys, const RealVector& t, double gap_tol) {
    check_param(sys, t);
    const Index n = sys.dim();
    const Index k = sys.k();
    Eigen::SelfAdjointEigenSolver<Matrix> solver(assemble_F_raw(sys, t));
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("psi_gradient: eigensolver did not converge");
    const RealVector& evals = solver.eigenvalues();  // ascending
    const Index idx = 2 * n - 2;                     // lambda_2 in descending order

    PsiGradient out;
    out.value = evals[idx];
    out.f_norm = std::max(std::abs(evals[0]), std::abs(evals[2 * n - 1]));
    const double gap_up = evals[idx + 1] - evals[idx];
    const double gap_down = idx > 0 ? evals[idx] - evals[idx - 1]
                                    : std::numeric_limits<double>::infinity();
    out.gap = std::min(gap_up, gap_down);
    out.is_simple = out.gap > gap_tol * std::max(out.f_norm, 1e-300);

    // d psi / d t_j = v* H_j v with v the lambda_2 eigenvector. With
    // v = [a; b] this reduces to 2 Re(w) and -2 Im(w) for w = b* S_j a,
    // which avoids forming the 2n x 2n direction blocks.
    const Vector v = solver.eigenvectors().col(idx);
    const Vector a = v.head(n);
    const Vector b = v.tail(n);
    out.grad.resize(sys.param_dim());
    for (Index j = 0; j < k; ++j) {
        const Complex w = b.dot(sys.constraint(j).get() * a);  // Eigen dot conjugates b
        out.grad[2 * j] = 2.0 * w.real();
        out.grad[2 * j + 1] = -2.0 * w.imag();
    }
    const Complex w_last = b.dot(sys.constraint(k).get() * a);
    out.grad[2 * k] = 2.0 * w_last.real();
    return out;
}

double lambda2_direction(const ConstraintSystem& sys, const RealVector& t) {
    check_param(sys, t);
    // Eigenvalues of [[0, conj(f)], [f, 0]] are the +/- singular values of f,
    // so lambda_2 is sigma_2(f) for n >= 2 and -sigma_1(f) for n = 1.
    const RealVector sv = singular_values(assemble_f_raw(sys, t));
    return sys.dim() >= 2 ? sv[1] : -sv[0];
}

CBeta compute_c_beta(const ConstraintSystem& sys, Index sphere_starts, std::uint64_t seed) {
    const Index d = sys.param_dim();

    double s_scale = 0.0;
    for (const auto& s : sys.constraints()) s_scale = std::max(s_scale, spectral_norm(s.get()));

    auto objective = [&](const RealVector& t) {
        const double nrm = t.norm();
        if (nrm < 1e-14) return std::numeric_limits<double>::infinity();
        return lambda2_direction(sys, RealVector(t / nrm));
    };

    double best = std::numeric_limits<double>::infinity();
    RealVector best_t;
    auto consider = [&](const RealVector& t) {
        const double val = objective(t);
        if (val < best) {
            best = val;
            best_t = t / t.norm();
        }
    };

    // Axis directions first (exact for k = 0, where the sphere is {+-1}),
    // then random directions, then a simplex refinement from the best one.
    for (Index j = 0; j < d; ++j) consider(RealVector::Unit(d, j));
    Rng rng = derive_stream(seed, 0x53504845u);
    for (Index s = 0; s < sphere_starts; ++s) consider(random_unit_vector(d, rng));

    if (d > 1 && best_t.size() == d) {
        detail::LocalOptions opts;
        opts.simplex_max_evals_per_dim = 200;
        detail::LocalResult refined = detail::nelder_mead(objective, best_t, opts, 0.2);
        if (refined.value < best) best = refined.value;
    }

    CBeta out;
    out.c = best;
    const auto spec = eig_hermitian(sys.h());
    const double range = spec.values[0] - spec.values[spec.values.size() - 1];
    if (best > 1e-12 * std::max(s_scale, 1e-300)) out.beta = range / best;
    return out;
}

}  // namespace rayq
