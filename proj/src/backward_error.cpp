#include "rayq/backward_error.hpp"

#include <Eigen/LU>

#include "rayq/random.hpp"

namespace rayq {

std::string to_string(Structure s) {
    switch (s) {
        case Structure::pal_T: return "pal_T";
        case Structure::antipal_T: return "antipal_T";
        case Structure::even_T: return "even_T";
        case Structure::odd_T: return "odd_T";
        case Structure::skew_T: return "skew_T";
        case Structure::none: return "none";
    }
    return "none";
}

Structure structure_from_string(const std::string& tag) {
    if (tag == "pal_T") return Structure::pal_T;
    if (tag == "antipal_T") return Structure::antipal_T;
    if (tag == "even_T") return Structure::even_T;
    if (tag == "odd_T") return Structure::odd_T;
    if (tag == "skew_T") return Structure::skew_T;
    if (tag == "none") return Structure::none;
    throw InputError("unknown structure tag '" + tag +
                     "' (expected pal_T, antipal_T, even_T, odd_T, skew_T or none)");
}

MatrixPolynomial::MatrixPolynomial(std::vector<Matrix> coefficients, Structure structure,
                                   double tol)
    : coeffs_(std::move(coefficients)), structure_(structure) {
    if (coeffs_.size() < 2)
        throw InputError("MatrixPolynomial: degree must be >= 1 (need at least two coefficients)");
    const Index n = coeffs_.front().rows();
    if (n < 1) throw InputError("MatrixPolynomial: empty coefficient matrix");
    for (size_t j = 0; j < coeffs_.size(); ++j) {
        if (coeffs_[j].rows() != n || coeffs_[j].cols() != n)
            throw InputError("MatrixPolynomial: coefficient " + std::to_string(j) +
                             " is not " + std::to_string(n) + "x" + std::to_string(n));
        require_finite(coeffs_[j], "MatrixPolynomial coefficient " + std::to_string(j));
    }

    double scale = 0.0;
    for (const auto& a : coeffs_) scale = std::max(scale, a.norm());
    scale = std::max(scale, 1e-300);
    const Index m = degree();
    auto check = [&](const Matrix& lhs, const Matrix& rhs, Index j) {
        if ((lhs - rhs).norm() > tol * scale)
            throw StructureError("MatrixPolynomial: coefficient " + std::to_string(j) +
                                 " violates the declared " + to_string(structure_) +
                                 " structure");
    };
    switch (structure_) {
        case Structure::pal_T:
            for (Index j = 0; j <= m; ++j) check(coeffs_[j].transpose(), coeffs_[m - j], j);
            break;
        case Structure::antipal_T:
            for (Index j = 0; j <= m; ++j) check(coeffs_[j].transpose(), -coeffs_[m - j], j);
            break;
        case Structure::even_T:
            for (Index j = 0; j <= m; ++j)
                check(coeffs_[j].transpose(), (j % 2 == 0 ? 1.0 : -1.0) * coeffs_[j], j);
            break;
        case Structure::odd_T:
            for (Index j = 0; j <= m; ++j)
                check(coeffs_[j].transpose(), (j % 2 == 0 ? -1.0 : 1.0) * coeffs_[j], j);
            break;
        case Structure::skew_T:
            for (Index j = 0; j <= m; ++j) check(coeffs_[j].transpose(), -coeffs_[j], j);
            break;
        case Structure::none: break;
    }
}

Matrix MatrixPolynomial::eval(Complex lambda) const {
    const Index m = degree();
    Matrix acc = coeffs_[static_cast<size_t>(m)];
    for (Index j = m - 1; j >= 0; --j) acc = lambda * acc + coeffs_[static_cast<size_t>(j)];
    return acc;
}

RowVector lambda_row(Complex lambda, Index m) {
    if (m < 0) throw InputError("lambda_row: degree must be >= 0");
    RowVector row(m + 1);
    Complex p = 1.0;
    for (Index j = 0; j <= m; ++j) {
        row[j] = p;
        p *= lambda;
    }
    return row;
}

GammaScaling gamma_scaling(Complex lambda, Index m, Index n) {
    if (std::abs(lambda) == 0.0) throw InputError("gamma_scaling: lambda must be nonzero");
    if (m < 1 || n < 1) throw InputError("gamma_scaling: need degree >= 1 and size >= 1");
    const double mod = std::abs(lambda);
    const Index k = (m - 1) / 2;

    GammaScaling out;
    out.block_factors.resize(m + 1);
    for (Index j = 0; j <= k; ++j) {
        const double pw = std::pow(mod, static_cast<double>(m - 2 * j));
        out.block_factors[j] = std::sqrt(2.0 / (1.0 + pw));            // gamma_{j1}
        out.block_factors[m - j] = std::sqrt(2.0 * pw / (1.0 + pw));   // gamma_{j2}
    }
    if (m % 2 == 0) out.block_factors[m / 2] = 1.0;

    out.diagonal.resize((m + 1) * n);
    for (Index j = 0; j <= m; ++j)
        out.diagonal.segment(j * n, n).setConstant(out.block_factors[j]);
    return out;
}

EvaluationPoint make_evaluation_point(const MatrixPolynomial& p, Complex lambda) {
    EvaluationPoint out;
    out.lambda = lambda;
    out.lam_row = lambda_row(lambda, p.degree());

    const Matrix value = p.eval(lambda);
    const RealVector sv = singular_values(value);
    out.sigma_max = sv[0];
    out.sigma_min = sv[sv.size() - 1];
    if (out.sigma_min <= 1e-12 * std::max(out.sigma_max, 1e-300))
        throw SingularEvaluation(lambda);

    out.m_inv = value.partialPivLu().inverse();
    const double resid = (value * out.m_inv - Matrix::Identity(p.size(), p.size())).norm();
    const double cond = out.sigma_max / out.sigma_min;
    if (resid > 1e-8 * cond)
        throw std::runtime_error("make_evaluation_point: inversion residual too large");
    return out;
}

namespace {

void check_lambda_exclusions(Structure s, Complex lambda) {
    if (std::abs(lambda) < 1e-8)
        throw InputError("lambda = 0 is excluded for every structured reduction");
    if (s == Structure::pal_T || s == Structure::antipal_T) {
        if (std::abs(lambda - 1.0) < 1e-8 || std::abs(lambda + 1.0) < 1e-8)
            throw InputError("lambda in {+1, -1} is excluded for " + to_string(s) +
                             " (structured and unstructured errors coincide there)");
    }
}

// (Lambda^T e_{idx}^T) (x) M^T: e_{idx} is the idx-th canonical basis vector
// of R^{m+1}, 1-based, so the product touches coefficient index idx-1.
Matrix column_shape(const RowVector& lam, Index idx_1based, const Matrix& m_t) {
    const Index mp1 = lam.size();
    Matrix e = Matrix::Zero(mp1, mp1);
    e.col(idx_1based - 1) = lam.transpose();
    return kron(e, m_t);
}

Matrix row_shape(const RowVector& lam, Index idx_1based, const Matrix& m) {
    const Index mp1 = lam.size();
    Matrix e = Matrix::Zero(mp1, mp1);
    e.row(idx_1based - 1) = lam;
    return kron(e, m);
}

Matrix scale_both_sides(const RealVector& inv_diag, const Matrix& x) {
    return inv_diag.asDiagonal() * x * inv_diag.asDiagonal();
}

}  // namespace

ConstraintSystem reduce_to_constraints(const MatrixPolynomial& p, Complex lambda) {
    const Structure st = p.structure();
    if (st == Structure::none)
        throw InputError("reduce_to_constraints: polynomial carries no structure tag");
    check_lambda_exclusions(st, lambda);

    const EvaluationPoint ev = make_evaluation_point(p, lambda);
    const Index m = p.degree();
    const Index n = p.size();
    const Matrix m_t = ev.m_inv.transpose();
    const Matrix gram = kron((ev.lam_row.adjoint() * ev.lam_row).eval(),
                             (ev.m_inv.adjoint() * ev.m_inv).eval());

    std::vector<SymmetricMatrix> constraints;
    Matrix h;

    if (st == Structure::pal_T || st == Structure::antipal_T) {
        const GammaScaling gamma = gamma_scaling(lambda, m, n);
        const RealVector inv_diag = gamma.diagonal.cwiseInverse();
        h = scale_both_sides(inv_diag, gram);

        const Index k = (m - 1) / 2;
        const double sign = st == Structure::pal_T ? -1.0 : 1.0;
        for (Index j = 0; j <= k; ++j) {
            const Matrix c = column_shape(ev.lam_row, j + 1, m_t) +
                             sign * row_shape(ev.lam_row, m - j + 1, ev.m_inv);
            constraints.push_back(
                trusted_symmetric(scale_both_sides(inv_diag, (c + c.transpose()).eval())));
        }
        if (st == Structure::antipal_T && m % 2 == 0) {
            // The middle matrix is symmetric as built; assert instead of symmetrize.
            const Matrix c = column_shape(ev.lam_row, m / 2 + 1, m_t) +
                             row_shape(ev.lam_row, m / 2 + 1, ev.m_inv);
            constraints.emplace_back(SymmetricMatrix(scale_both_sides(inv_diag, c)));
        }
    } else {
        h = gram;
        if (st == Structure::even_T) {
            const Index k = (m - 1) / 2;
            for (Index j = 0; j <= k; ++j) {
                const Matrix c = column_shape(ev.lam_row, 2 * j + 2, m_t);
                constraints.push_back(trusted_symmetric((c + c.transpose()).eval()));
            }
        } else if (st == Structure::odd_T) {
            const Index k = m / 2;
            for (Index j = 0; j <= k; ++j) {
                const Matrix c = column_shape(ev.lam_row, 2 * j + 1, m_t);
                constraints.push_back(trusted_symmetric((c + c.transpose()).eval()));
            }
        } else {  // skew_T
            for (Index j = 0; j <= m; ++j) {
                const Matrix c = column_shape(ev.lam_row, j + 1, m_t);
                constraints.push_back(trusted_symmetric((c + c.transpose()).eval()));
            }
        }
    }
    return ConstraintSystem(trusted_hermitian(std::move(h)), std::move(constraints));
}

double eta_unstructured(const MatrixPolynomial& p, Complex lambda) {
    const RealVector sv = singular_values(p.eval(lambda));
    return sv[sv.size() - 1] / lambda_row(lambda, p.degree()).norm();
}

std::string to_string(EtaStatus s) {
    return s == EtaStatus::exact ? "exact" : "bound_only";
}

BackwardErrorReport eta_structured(const MatrixPolynomial& p, Complex lambda,
                                   const SolverOptions& opts) {
    if (p.structure() == Structure::none)
        throw InputError("eta_structured: polynomial carries no structure tag");

    BackwardErrorReport report;
    std::optional<ConstraintSystem> sys;
    try {
        sys = reduce_to_constraints(p, lambda);
    } catch (const SingularEvaluation&) {
        // lambda already is an eigenvalue: zero perturbation suffices.
        report.eta = 0.0;
        report.m_value = std::numeric_limits<double>::infinity();
        report.status = EtaStatus::exact;
        return report;
    }

    MValue m = m_value(*sys, opts);
    report.m_value = m.value;
    report.status = m.status == MinStatus::exact ? EtaStatus::exact : EtaStatus::bound_only;
    report.eta = m.value > 0.0 ? 1.0 / std::sqrt(m.value)
                               : std::numeric_limits<double>::infinity();
    report.system = std::move(sys);
    report.minimization = std::move(m.minimization);
    return report;
}

MuResult mu_skew_value(const Matrix& m, const SolverOptions& opts) {
    if (m.rows() != m.cols() || m.rows() < 1)
        throw InputError("mu_skew_value: matrix must be square and nonempty");
    require_finite(m, "mu_skew_value");

    const Matrix h = m.adjoint() * m;
    const Matrix s0 = m + m.transpose();
    ConstraintSystem sys(trusted_hermitian(h), {trusted_symmetric(s0)});

    MuResult out;
    out.rank_warning = numerical_rank(s0) < 2;
    out.m = m_value(sys, opts);
    out.mu = out.m.value > 0.0 ? std::sqrt(out.m.value) : 0.0;
    return out;
}

std::string to_string(RankVerdict v) {
    switch (v) {
        case RankVerdict::verified_full: return "verified_full";
        case RankVerdict::verified_ge2: return "verified_ge2";
        case RankVerdict::failed: return "failed";
        case RankVerdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

RankProbeReport rank_condition_probe(const ConstraintSystem& sys, Index trials,
                                     std::uint64_t seed, std::optional<Index> claimed_rank,
                                     const std::vector<RealVector>& directed_points) {
    if (trials < 1) throw InputError("rank_condition_probe: trials must be >= 1");
    const Index d = sys.param_dim();

    RankProbeReport report;
    report.min_rank = std::numeric_limits<Index>::max();
    report.max_rank = 0;

    // Rank cutoff relative to the constraint family, not to sigma_max of the
    // probed point: a direction where f(t) collapses to rounding noise must
    // count as rank 0, not as full-rank noise.
    double family_scale = 0.0;
    for (const auto& s : sys.constraints())
        family_scale = std::max(family_scale, spectral_norm(s.get()));
    family_scale = std::max(family_scale, 1e-300);

    bool claim_matched = claimed_rank.has_value();
    auto probe_point = [&](const RealVector& t) {
        const RealVector sv = singular_values(assemble_f(sys, t));
        const double cutoff = kRankTol * std::max(sv[0], family_scale);
        Index rank = 0;
        while (rank < sv.size() && sv[rank] > cutoff) ++rank;
        report.min_rank = std::min(report.min_rank, rank);
        report.max_rank = std::max(report.max_rank, rank);
        ++report.points_checked;
        const bool breaks_claim = claimed_rank && rank < *claimed_rank;
        if (claimed_rank && rank != *claimed_rank) claim_matched = false;
        if ((rank <= 1 || breaks_claim) && !report.witness) report.witness = t;
    };

    for (const auto& t : directed_points) {
        if (t.size() != d)
            throw InputError("rank_condition_probe: directed point has wrong dimension");
        probe_point(RealVector(t / std::max(t.norm(), 1e-300)));
    }
    for (Index i = 0; i < trials; ++i) {
        Rng rng = derive_stream(seed, 0x4A5ECDu + static_cast<std::uint64_t>(i));
        probe_point(random_unit_vector(d, rng));
    }

    if (report.points_checked == 0) {
        report.verdict = RankVerdict::inconclusive;
    } else if (report.witness) {
        report.verdict = RankVerdict::failed;
    } else if (claimed_rank && claim_matched) {
        report.verdict = RankVerdict::verified_full;
    } else if (report.min_rank >= 2) {
        report.verdict = RankVerdict::verified_ge2;
    } else {
        report.verdict = RankVerdict::failed;  // rank <= 1 somewhere (already witnessed)
    }
    return report;
}

Index claimed_reduction_rank(const MatrixPolynomial& p) {
    return 2 * p.size();
}

RealVector skew_pencil_witness(Complex lambda) {
    if (std::abs(lambda) == 0.0)
        throw InputError("skew_pencil_witness: lambda must be nonzero");
    const Complex z = std::conj(lambda) / std::abs(lambda);
    RealVector t(3);
    t << z.real(), z.imag(), std::abs(lambda);
    return t / t.norm();
}

}  // namespace rayq
