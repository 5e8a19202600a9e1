#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace rayq {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RowVector = Eigen::RowVectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Invalid user-supplied data (bad shapes, non-finite entries, out-of-range
/// arguments, malformed files). Maps to exit code 1 in the CLI.
struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A matrix failed its declared symmetry structure on construction.
struct StructureError : InputError {
    using InputError::InputError;
};

/// Signal: P(lambda) is numerically singular, i.e. lambda already is an
/// eigenvalue of the polynomial. Callers translate this into a zero
/// backward error rather than propagating it as a failure.
struct SingularEvaluation : std::runtime_error {
    Complex lambda;
    explicit SingularEvaluation(Complex l)
        : std::runtime_error("P(lambda) is singular: lambda is an eigenvalue"),
          lambda(l) {}
};

inline bool is_finite(const Matrix& a) {
    return a.allFinite();
}

/// Unconjugated dot product x^T y (Eigen's dot() conjugates the left side).
inline Complex dotu(const Vector& x, const Vector& y) {
    return (x.array() * y.array()).sum();
}

/// Bilinear form v^T S v (no conjugation; the quadric the constraints live on).
inline Complex quadric(const Matrix& s, const Vector& v) {
    return dotu(v, s * v);
}

/// Hermitian quadratic form v^* H v, real by symmetry.
inline double rayleigh_numerator(const Matrix& h, const Vector& v) {
    return std::real(v.dot(h * v));
}

inline void require_finite(const Matrix& a, const std::string& what) {
    if (!a.allFinite())
        throw InputError(what + ": matrix has non-finite entries");
}

}  // namespace rayq
