#include "rayq/matrix.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace rayq {

namespace {

void check_square(const Matrix& a, const char* what) {
    if (a.rows() != a.cols())
        throw InputError(std::string(what) + ": matrix must be square, got " +
                         std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
    if (a.rows() < 1) throw InputError(std::string(what) + ": empty matrix");
}

}  // namespace

HermitianMatrix::HermitianMatrix(const Matrix& a, double tol) {
    check_square(a, "HermitianMatrix");
    require_finite(a, "HermitianMatrix");
    const double scale = a.norm();
    const double resid = (a - a.adjoint()).norm();
    if (resid > tol * std::max(scale, 1e-300))
        throw StructureError("HermitianMatrix: input is not Hermitian (relative residual " +
                             std::to_string(resid / std::max(scale, 1e-300)) + ")");
    m_ = 0.5 * (a + a.adjoint());
}

HermitianMatrix HermitianMatrix::negated() const {
    return HermitianMatrix(Matrix(-m_), Trusted{});
}

SymmetricMatrix::SymmetricMatrix(const Matrix& a, double tol) {
    check_square(a, "SymmetricMatrix");
    require_finite(a, "SymmetricMatrix");
    const double scale = a.norm();
    const double resid = (a - a.transpose()).norm();
    if (resid > tol * std::max(scale, 1e-300))
        throw StructureError("SymmetricMatrix: input is not symmetric (relative residual " +
                             std::to_string(resid / std::max(scale, 1e-300)) + ")");
    m_ = 0.5 * (a + a.transpose());
}

SymmetricMatrix SymmetricMatrix::negated() const {
    return SymmetricMatrix(Matrix(-m_), Trusted{});
}

SymmetricMatrix SymmetricMatrix::scaled(Complex c) const {
    return SymmetricMatrix(Matrix(c * m_), Trusted{});
}

HermitianMatrix trusted_hermitian(Matrix m) {
    Matrix sym = 0.5 * (m + m.adjoint());
    return HermitianMatrix(std::move(sym), HermitianMatrix::Trusted{});
}

SymmetricMatrix trusted_symmetric(Matrix m) {
    Matrix sym = 0.5 * (m + m.transpose());
    return SymmetricMatrix(std::move(sym), SymmetricMatrix::Trusted{});
}

SpectrumDescending eig_hermitian(const HermitianMatrix& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(a.get());
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eig_hermitian: eigensolver did not converge");
    SpectrumDescending out;
    out.values = solver.eigenvalues().reverse();
    out.vectors = solver.eigenvectors().rowwise().reverse();
    return out;
}

double lambda_k(const HermitianMatrix& a, Index k) {
    const Index n = a.dim();
    if (k < 1 || k > n)
        throw InputError("lambda_k: k = " + std::to_string(k) + " out of range [1, " +
                         std::to_string(n) + "]");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(a.get(), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("lambda_k: eigensolver did not converge");
    // solver returns ascending order; k-th largest sits at n - k.
    return solver.eigenvalues()[n - k];
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

RealVector singular_values(const Matrix& a) {
    if (a.rows() >= 32 && a.cols() >= 32) {
        Eigen::BDCSVD<Matrix> svd(a);
        return svd.singularValues();
    }
    Eigen::JacobiSVD<Matrix> svd(a);
    return svd.singularValues();
}

Index numerical_rank(const Matrix& a, double tol) {
    if (tol <= 0.0) throw InputError("numerical_rank: tol must be > 0");
    const RealVector sv = singular_values(a);
    if (sv.size() == 0) return 0;
    const double cutoff = tol * sv[0];
    if (sv[0] == 0.0) return 0;
    Index r = 0;
    while (r < sv.size() && sv[r] > cutoff) ++r;
    return r;
}

double spectral_norm(const Matrix& a) {
    const RealVector sv = singular_values(a);
    return sv.size() ? sv[0] : 0.0;
}

}  // namespace rayq
