#pragma once

#include <vector>

#include "rayq/types.hpp"

namespace rayq {

/// Default relative tolerance for accepting a matrix as Hermitian/symmetric
/// on construction. File round-trips introduce last-bit asymmetry, so inputs
/// are canonically symmetrized instead of rejected outright.
inline constexpr double kSymmetryTol = 1e-12;

/// Default relative singular-value cutoff for numerical rank decisions.
inline constexpr double kRankTol = 1e-10;

/// Square complex matrix stored canonically symmetrized as (A + A^*)/2.
/// Construction rejects inputs farther than tol * ||A||_F from Hermitian.
class HermitianMatrix {
  public:
    explicit HermitianMatrix(const Matrix& a, double tol = kSymmetryTol);

    const Matrix& get() const { return m_; }
    Index dim() const { return m_.rows(); }

    HermitianMatrix negated() const;

  private:
    struct Trusted {};
    HermitianMatrix(Matrix m, Trusted) : m_(std::move(m)) {}
    Matrix m_;

    friend HermitianMatrix trusted_hermitian(Matrix m);
};

/// Complex symmetric matrix (S = S^T over C, not Hermitian in general),
/// stored as (A + A^T)/2.
class SymmetricMatrix {
  public:
    explicit SymmetricMatrix(const Matrix& a, double tol = kSymmetryTol);

    const Matrix& get() const { return m_; }
    Index dim() const { return m_.rows(); }

    SymmetricMatrix negated() const;
    SymmetricMatrix scaled(Complex c) const;

  private:
    struct Trusted {};
    SymmetricMatrix(Matrix m, Trusted) : m_(std::move(m)) {}
    Matrix m_;

    friend SymmetricMatrix trusted_symmetric(Matrix m);
};

/// Internal factories for matrices exactly symmetric by construction;
/// they skip the residual check but still symmetrize bit-noise away.
HermitianMatrix trusted_hermitian(Matrix m);
SymmetricMatrix trusted_symmetric(Matrix m);

/// Full eigendecomposition of a Hermitian matrix, eigenvalues sorted
/// non-increasing (values[1] is the second largest), column j of vectors
/// paired with values[j].
struct SpectrumDescending {
    RealVector values;
    Matrix vectors;
};

SpectrumDescending eig_hermitian(const HermitianMatrix& a);

/// k-th largest eigenvalue, 1-based, counted with multiplicity.
double lambda_k(const HermitianMatrix& a, Index k);

Matrix kron(const Matrix& a, const Matrix& b);

/// All singular values, descending.
RealVector singular_values(const Matrix& a);

/// Number of singular values > tol * sigma_max. Zero matrix has rank 0.
Index numerical_rank(const Matrix& a, double tol = kRankTol);

/// Spectral norm (largest singular value; |lambda|_max for Hermitian input).
double spectral_norm(const Matrix& a);

}  // namespace rayq
