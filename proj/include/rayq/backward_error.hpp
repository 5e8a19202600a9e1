#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rayq/minimize.hpp"

namespace rayq {

/// Coefficient symmetry classes of a matrix polynomial P(z) = sum z^j A_j:
///   pal_T     A_j^T =  A_{m-j}        antipal_T  A_j^T = -A_{m-j}
///   even_T    A_j^T = (-1)^j     A_j  odd_T      A_j^T = (-1)^{j+1} A_j
///   skew_T    A_j^T = -A_j            none       no structure enforced
enum class Structure { pal_T, antipal_T, even_T, odd_T, skew_T, none };

std::string to_string(Structure s);
Structure structure_from_string(const std::string& tag);

/// Degree-m matrix polynomial with a verified structure tag. The tag is
/// checked on construction to 1e-10 relative to the largest coefficient.
class MatrixPolynomial {
  public:
    MatrixPolynomial(std::vector<Matrix> coefficients, Structure structure,
                     double tol = 1e-10);

    Index degree() const { return static_cast<Index>(coeffs_.size()) - 1; }
    Index size() const { return coeffs_.front().rows(); }
    const std::vector<Matrix>& coefficients() const { return coeffs_; }
    const Matrix& coefficient(Index j) const { return coeffs_.at(static_cast<size_t>(j)); }
    Structure structure() const { return structure_; }

    /// P(lambda) by Horner evaluation.
    Matrix eval(Complex lambda) const;

  private:
    std::vector<Matrix> coeffs_;
    Structure structure_;
};

/// [1, lambda, ..., lambda^m] as a 1 x (m+1) row.
RowVector lambda_row(Complex lambda, Index m);

/// Diagonal balancing for the palindromic reductions: entries
/// gamma_{j1} = sqrt(2 / (1 + |lambda|^{m-2j})),
/// gamma_{j2} = sqrt(2 |lambda|^{m-2j} / (1 + |lambda|^{m-2j})),
/// arranged (gamma_01..gamma_k1 [, 1] , gamma_k2..gamma_02) x I_n.
/// Identity exactly when |lambda| = 1.
struct GammaScaling {
    RealVector block_factors;  // the m+1 per-block scalars
    RealVector diagonal;       // the full (m+1) n diagonal
};

GammaScaling gamma_scaling(Complex lambda, Index m, Index n);

/// P(lambda) inverted, with the pieces every reduction needs.
struct EvaluationPoint {
    Complex lambda;
    Matrix m_inv;         // M = P(lambda)^{-1}
    RowVector lam_row;    // [1, lambda, ..., lambda^m]
    double sigma_min = 0.0;
    double sigma_max = 0.0;
};

/// Throws SingularEvaluation when sigma_min(P(lambda)) <= 1e-12 sigma_max,
/// i.e. lambda already is an eigenvalue of P.
EvaluationPoint make_evaluation_point(const MatrixPolynomial& p, Complex lambda);

/// Constraint system of dimension (m+1)n whose Rayleigh supremum m gives the
/// structured backward error as m^{-1/2}. lambda must avoid 0 for every
/// structure and +-1 additionally for pal_T/antipal_T.
ConstraintSystem reduce_to_constraints(const MatrixPolynomial& p, Complex lambda);

/// sigma_min(P(lambda)) / ||[1, lambda, ..., lambda^m]||_2. Zero exactly
/// when lambda is an eigenvalue; singular P(lambda) is fine here.
double eta_unstructured(const MatrixPolynomial& p, Complex lambda);

enum class EtaStatus { exact, bound_only };

std::string to_string(EtaStatus s);

struct BackwardErrorReport {
    double eta = 0.0;
    double m_value = 0.0;
    EtaStatus status = EtaStatus::bound_only;
    std::optional<ConstraintSystem> system;
    std::optional<MinimizationResult> minimization;
};

/// Structured eigenvalue backward error. status == exact means the value is
/// certified (validated certificate); with bound_only the reported eta is a
/// lower bound on the true structured backward error.
BackwardErrorReport eta_structured(const MatrixPolynomial& p, Complex lambda,
                                   const SolverOptions& opts = {});

struct MuResult {
    double mu = 0.0;
    bool rank_warning = false;  // rank(M + M^T) < 2
    MValue m;
};

/// mu-value of M under skew-symmetric perturbations:
/// sqrt(m) for H = M^* M, S_0 = M + M^T.
MuResult mu_skew_value(const Matrix& m, const SolverOptions& opts = {});

enum class RankVerdict { verified_full, verified_ge2, failed, inconclusive };

std::string to_string(RankVerdict v);

struct RankProbeReport {
    RankVerdict verdict = RankVerdict::inconclusive;
    std::optional<RealVector> witness;  // parameter point breaking the claim
    Index min_rank = 0;
    Index max_rank = 0;
    Index points_checked = 0;
};

/// Samples rank(f(t)) at `trials` random unit parameter points (plus any
/// caller-supplied directed points). With a claimed rank: verified_full when
/// every point matches it, failed (with witness) when some point drops below
/// it or below 2. Without a claim: failed below 2, else verified_ge2.
RankProbeReport rank_condition_probe(const ConstraintSystem& sys, Index trials,
                                     std::uint64_t seed,
                                     std::optional<Index> claimed_rank = std::nullopt,
                                     const std::vector<RealVector>& directed_points = {});

/// The claimed generic rank of the reduced pencil direction for a
/// polynomial-derived system: 2n in the (m+1)n ambient space.
Index claimed_reduction_rank(const MatrixPolynomial& p);

/// The rank-deficient direction of the degree-1 skew_T reduction:
/// with z = conj(lambda)/|lambda| and t = (Re z, Im z, |lambda|) the weight
/// of S_1 equals lambda z in R, collapsing f(t) to rank <= n.
RealVector skew_pencil_witness(Complex lambda);

}  // namespace rayq
