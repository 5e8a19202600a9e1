#pragma once

#include <optional>
#include <vector>

#include "rayq/matrix.hpp"

namespace rayq {

/// The data of the constrained Rayleigh-quotient problem: maximize
/// v*Hv / v*v over nonzero v with v^T S_j v = 0 for all j.
/// Constraints are ordered; the last one carries the real pencil weight,
/// every earlier one a complex weight.
class ConstraintSystem {
  public:
    ConstraintSystem(HermitianMatrix h, std::vector<SymmetricMatrix> constraints);

    const HermitianMatrix& h() const { return h_; }
    const std::vector<SymmetricMatrix>& constraints() const { return constraints_; }
    const SymmetricMatrix& constraint(Index j) const { return constraints_.at(static_cast<size_t>(j)); }

    Index dim() const { return h_.dim(); }
    Index num_constraints() const { return static_cast<Index>(constraints_.size()); }
    Index k() const { return num_constraints() - 1; }
    /// Real parameter dimension 2k+1.
    Index param_dim() const { return 2 * k() + 1; }

    /// (-H, -S_0, ..., -S_k); same feasible set, negated objective.
    ConstraintSystem negated() const;

  private:
    HermitianMatrix h_;
    std::vector<SymmetricMatrix> constraints_;
};

/// The constant and direction blocks of the parameter-dependent pencil:
/// G = [[H, 0], [0, conj(H)]], blocks[2j] = [[0, conj(S_j)], [S_j, 0]],
/// blocks[2j+1] = [[0, conj(i S_j)], [i S_j, 0]] (no imaginary block for
/// the last constraint). F(t) = G + sum_j t_j blocks[j].
struct PencilAssembly {
    Matrix g;
    std::vector<Matrix> blocks;
};

PencilAssembly assemble_blocks(const ConstraintSystem& sys);

/// Weighted constraint combination
/// f(t) = sum_{j<k} (t_{2j} + i t_{2j+1}) S_j + t_{2k} S_k; complex symmetric.
Matrix assemble_f(const ConstraintSystem& sys, const RealVector& t);

/// The 2n x 2n Hermitian pencil F(t) = [[H, conj(f(t))], [f(t), conj(H)]].
HermitianMatrix assemble_F(const ConstraintSystem& sys, const RealVector& t);

enum class PsiVariant {
    second_largest,   // lambda_2(F(t)), upper-bounds the supremum m
    second_smallest,  // lambda_{2n-1}(F(t)), lower-bounds the infimum m~
};

double psi(const ConstraintSystem& sys, const RealVector& t,
           PsiVariant variant = PsiVariant::second_largest);

struct PsiGradient {
    RealVector grad;     // d psi / d t_j = v^* blocks[j] v for the lambda_2 eigenvector
    bool is_simple;      // eigen-gap of lambda_2 exceeded gap_tol * ||F||
    double value;        // psi(t)
    double gap;          // min distance of lambda_2 to its neighbours
    double f_norm;       // spectral norm of F(t)
};

/// Analytic gradient of psi at t. When the lambda_2 eigenvalue is not
/// numerically simple the same formula is evaluated with an arbitrary
/// eigenvector of the cluster and is_simple = false; callers must treat
/// the result as a subgradient surrogate.
PsiGradient psi_gradient(const ConstraintSystem& sys, const RealVector& t,
                         double gap_tol);

struct CBeta {
    double c;                     // min over the unit sphere of lambda_2(sum t_j blocks[j])
    std::optional<double> beta;   // (lambda_max(H) - lambda_min(H)) / c when c > 0
};

/// Search-region bound. lambda_2(sum t_j blocks[j]) equals the second
/// singular value of f(t) (the +/- pairing of the off-diagonal block
/// pencil), so c is estimated by multistart minimization of sigma_2(f(t))
/// over the unit sphere. c below 1e-12 * max_j ||S_j|| is reported as
/// non-positive and beta stays absent.
CBeta compute_c_beta(const ConstraintSystem& sys, Index sphere_starts,
                     std::uint64_t seed);

/// lambda_2 of sum t_j blocks[j] without forming the 2n x 2n matrix.
double lambda2_direction(const ConstraintSystem& sys, const RealVector& t);

}  // namespace rayq
