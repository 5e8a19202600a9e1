#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rayq/backward_error.hpp"
#include "rayq/experiment.hpp"
#include "rayq/oracle.hpp"
#include "rayq/random.hpp"

using namespace rayq;

namespace {

SolverOptions quick_opts(std::uint64_t seed) {
    SolverOptions opts;
    opts.seed = seed;
    opts.starts = 20;
    return opts;
}

}  // namespace

TEST_CASE("lambda_row anchors") {
    const RowVector r = lambda_row(2.0, 2);
    CHECK(r[0] == Complex(1));
    CHECK(r[1] == Complex(2));
    CHECK(r[2] == Complex(4));

    const RowVector z = lambda_row(0.0, 3);
    CHECK(z[0] == Complex(1));
    CHECK(z.tail(3).norm() == doctest::Approx(0.0));

    const RowVector im = lambda_row(Complex(0, 1), 2);
    CHECK(std::abs(im[1] - Complex(0, 1)) <= 1e-15);
    CHECK(std::abs(im[2] - Complex(-1, 0)) <= 1e-15);
}

TEST_CASE("gamma_scaling anchors and identities") {
    // |lambda| = 1 gives the exact identity.
    const GammaScaling unit = gamma_scaling(Complex(0, 1), 3, 2);
    CHECK((unit.diagonal - RealVector::Ones(8)).norm() == doctest::Approx(0.0));

    const GammaScaling g = gamma_scaling(2.0, 1, 1);
    CHECK(g.block_factors[0] == doctest::Approx(std::sqrt(2.0 / 3.0)));
    CHECK(g.block_factors[1] == doctest::Approx(std::sqrt(4.0 / 3.0)));

    // gamma_{j1}^2 + gamma_{j2}^2 = 2 and the entries live in (0, sqrt(2)).
    Rng rng(71);
    for (int trial = 0; trial < 8; ++trial) {
        const Complex lambda(rng.normal(), rng.normal());
        if (std::abs(lambda) < 0.1) continue;
        const Index m = 1 + trial % 4;
        const GammaScaling gs = gamma_scaling(lambda, m, 2);
        const double mod = std::abs(lambda);
        for (Index j = 0; j <= (m - 1) / 2; ++j) {
            const double g1 = gs.block_factors[j];
            const double g2 = gs.block_factors[m - j];
            CHECK(g1 * g1 + g2 * g2 == doctest::Approx(2.0).epsilon(1e-12));
            const double pw = std::pow(mod, static_cast<double>(m - 2 * j));
            CHECK(g1 * g2 ==
                  doctest::Approx(2.0 * std::sqrt(pw) / (1.0 + pw)).epsilon(1e-12));
            CHECK(g1 * g1 > 0.0);
            CHECK(g1 * g1 < 2.0);
            CHECK(g2 * g2 > 0.0);
            CHECK(g2 * g2 < 2.0);
        }
        CHECK(gs.diagonal.minCoeff() > 0.0);
    }

    CHECK_THROWS_AS((void)gamma_scaling(0.0, 2, 2), InputError);
}

TEST_CASE("structure tags are validated on construction") {
    Rng rng(72);
    const Matrix a = random_complex_matrix(2, 2, rng);
    const Matrix b = random_complex_matrix(2, 2, rng);

    CHECK_NOTHROW(MatrixPolynomial({a, b, b.transpose(), a.transpose()}, Structure::pal_T));
    CHECK_THROWS_AS(MatrixPolynomial({a, b, b, a}, Structure::pal_T), StructureError);

    CHECK_NOTHROW(
        MatrixPolynomial({a, b, -b.transpose(), -a.transpose()}, Structure::antipal_T));

    const Matrix sym = random_symmetric(2, rng);
    const Matrix skew = random_skew_symmetric(2, rng);
    CHECK_NOTHROW(MatrixPolynomial({sym, skew, sym, skew}, Structure::even_T));
    CHECK_THROWS_AS(MatrixPolynomial({skew, skew, sym, skew}, Structure::even_T),
                    StructureError);
    CHECK_NOTHROW(MatrixPolynomial({skew, sym, skew, sym}, Structure::odd_T));
    CHECK_NOTHROW(MatrixPolynomial({skew, skew, skew}, Structure::skew_T));
    CHECK_THROWS_AS(MatrixPolynomial({skew, sym}, Structure::skew_T), StructureError);

    CHECK_THROWS_AS(MatrixPolynomial({a}, Structure::none), InputError);
}

TEST_CASE("random_polynomial honors every tag") {
    for (Structure st : {Structure::pal_T, Structure::antipal_T, Structure::even_T,
                         Structure::odd_T, Structure::skew_T}) {
        for (Index m : {1, 2, 3, 4})
            CHECK_NOTHROW((void)random_polynomial(st, 3, m, 7));
    }
}

TEST_CASE("even_T reduction touches exactly the odd-index coefficients") {
    const MatrixPolynomial p = random_polynomial(Structure::even_T, 2, 3, 73);
    const Complex lambda(0.6, 0.4);
    const ConstraintSystem sys = reduce_to_constraints(p, lambda);
    REQUIRE(sys.num_constraints() == 2);
    REQUIRE(sys.dim() == 8);

    // Independent assembly of (Lambda^T e_idx^T) (x) M^T + transpose for the
    // 1-based indices {2, 4}.
    const EvaluationPoint ev = make_evaluation_point(p, lambda);
    for (Index j = 0; j < 2; ++j) {
        const Index idx = 2 * j + 2;
        Matrix e = Matrix::Zero(4, 4);
        e.col(idx - 1) = ev.lam_row.transpose();
        const Matrix c = kron(e, ev.m_inv.transpose());
        CHECK((sys.constraint(j).get() - (c + c.transpose())).norm() <=
              1e-12 * std::max(1.0, c.norm()));
    }
}

TEST_CASE("odd_T reduction touches exactly the even-index coefficients") {
    const MatrixPolynomial p = random_polynomial(Structure::odd_T, 2, 3, 74);
    const ConstraintSystem sys = reduce_to_constraints(p, Complex(0.5, -0.7));
    CHECK(sys.num_constraints() == 2);  // floor(3/2) + 1
    CHECK(sys.dim() == 8);
}

TEST_CASE("pal_T reduction at |lambda| = 1 has the rank-one Gram spectrum") {
    const MatrixPolynomial p = random_polynomial(Structure::pal_T, 3, 3, 75);
    const Complex lambda(0, 1);  // modulus exactly 1, away from +-1
    const ConstraintSystem sys = reduce_to_constraints(p, lambda);
    REQUIRE(sys.num_constraints() == 2);  // k + 1 with k = 1
    REQUIRE(sys.dim() == 12);

    const EvaluationPoint ev = make_evaluation_point(p, lambda);
    const double sigma_max = singular_values(ev.m_inv)[0];
    CHECK(lambda_k(sys.h(), 1) ==
          doctest::Approx(4.0 * sigma_max * sigma_max).epsilon(1e-9));
    // Rank-one factor times Gram: everything past lambda_1 collapses per
    // Kronecker block.
    CHECK(lambda_k(sys.h(), 4) <= 1e-9 * sigma_max * sigma_max);
}

TEST_CASE("antipal_T constraint counts for odd and even degree") {
    const MatrixPolynomial odd = random_polynomial(Structure::antipal_T, 2, 3, 76);
    CHECK(reduce_to_constraints(odd, Complex(0.4, 0.8)).num_constraints() == 2);

    const MatrixPolynomial even = random_polynomial(Structure::antipal_T, 2, 4, 77);
    const ConstraintSystem sys = reduce_to_constraints(even, Complex(0.4, 0.8));
    CHECK(sys.num_constraints() == 3);  // k + 2 with k = 1
}

TEST_CASE("pal_T constraint count for even degree") {
    const MatrixPolynomial p = random_polynomial(Structure::pal_T, 2, 4, 78);
    CHECK(reduce_to_constraints(p, Complex(1.3, 0.4)).num_constraints() == 2);
}

TEST_CASE("skew_T degree-1 reduction matches its closed block forms") {
    // Even n: odd-dimensional skew-symmetric pencils are singular everywhere.
    const MatrixPolynomial p = random_polynomial(Structure::skew_T, 4, 1, 79);
    const Complex lambda(0.8, 0.5);
    const ConstraintSystem sys = reduce_to_constraints(p, lambda);
    REQUIRE(sys.num_constraints() == 2);

    const EvaluationPoint ev = make_evaluation_point(p, lambda);
    const Matrix& m = ev.m_inv;
    const Index n = 4;

    Matrix s0 = Matrix::Zero(2 * n, 2 * n);
    s0.topLeftCorner(n, n) = m + m.transpose();
    s0.topRightCorner(n, n) = lambda * m;
    s0.bottomLeftCorner(n, n) = lambda * m.transpose();

    Matrix s1 = Matrix::Zero(2 * n, 2 * n);
    s1.topRightCorner(n, n) = m.transpose();
    s1.bottomLeftCorner(n, n) = m;
    s1.bottomRightCorner(n, n) = lambda * (m + m.transpose());

    CHECK((sys.constraint(0).get() - s0).norm() <= 1e-12 * std::max(1.0, s0.norm()));
    CHECK((sys.constraint(1).get() - s1).norm() <= 1e-12 * std::max(1.0, s1.norm()));
}

TEST_CASE("every reduction produces symmetric constraints and a Hermitian H") {
    struct Case {
        Structure st;
        Index m;
        Index expected_constraints;
    };
    const Case cases[] = {
        {Structure::pal_T, 3, 2},   {Structure::pal_T, 5, 3},
        {Structure::antipal_T, 4, 3}, {Structure::even_T, 3, 2},
        {Structure::even_T, 4, 2},  {Structure::odd_T, 4, 3},
        {Structure::skew_T, 2, 3},
    };
    int index = 0;
    for (const Case& c : cases) {
        const Index n = c.st == Structure::skew_T ? 4 : 2;  // skew needs even n
        const MatrixPolynomial p = random_polynomial(c.st, n, c.m, 80 + index++);
        const ConstraintSystem sys = reduce_to_constraints(p, Complex(0.7, 0.6));
        CHECK(sys.num_constraints() == c.expected_constraints);
        CHECK(sys.dim() == (c.m + 1) * n);
        CHECK((sys.h().get() - sys.h().get().adjoint()).norm() <=
              1e-12 * std::max(1.0, sys.h().get().norm()));
        for (Index j = 0; j < sys.num_constraints(); ++j) {
            const Matrix& s = sys.constraint(j).get();
            CHECK((s - s.transpose()).norm() <= 1e-12 * std::max(1.0, s.norm()));
        }
    }
}

TEST_CASE("lambda exclusions raise input errors naming the exclusion") {
    const MatrixPolynomial pal = random_polynomial(Structure::pal_T, 2, 3, 90);
    CHECK_THROWS_WITH_AS((void)reduce_to_constraints(pal, Complex(1.0, 0.0)),
                         doctest::Contains("{+1, -1}"), InputError);
    CHECK_THROWS_AS((void)reduce_to_constraints(pal, Complex(-1.0, 1e-12)), InputError);
    CHECK_THROWS_WITH_AS((void)reduce_to_constraints(pal, Complex(0.0, 0.0)),
                         doctest::Contains("lambda = 0"), InputError);

    const MatrixPolynomial even = random_polynomial(Structure::even_T, 2, 3, 91);
    CHECK_THROWS_AS((void)reduce_to_constraints(even, Complex(0.0, 0.0)), InputError);
    CHECK_NOTHROW((void)reduce_to_constraints(even, Complex(1.0, 0.0)));  // +-1 fine here
}

TEST_CASE("eta_unstructured anchors") {
    Rng rng(92);
    // lambda = 0: the denominator is 1.
    std::vector<Matrix> coeffs{random_complex_matrix(3, 3, rng),
                               random_complex_matrix(3, 3, rng)};
    const MatrixPolynomial p(coeffs, Structure::none);
    const RealVector sv = singular_values(coeffs[0]);
    CHECK(eta_unstructured(p, 0.0) == doctest::Approx(sv[sv.size() - 1]).epsilon(1e-12));

    // P(z) = I with a zero tail at lambda = 1: sigma_min = 1, norm = sqrt(2).
    const MatrixPolynomial id({Matrix::Identity(2, 2), Matrix::Zero(2, 2)}, Structure::none);
    CHECK(eta_unstructured(id, 1.0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("eta_unstructured vanishes at a planted eigenvalue") {
    Rng rng(93);
    const Complex lambda0(0.4, -1.1);
    const Vector v = random_complex_unit_vector(3, rng);
    std::vector<Matrix> coeffs;
    for (int j = 0; j < 4; ++j) coeffs.push_back(random_complex_matrix(3, 3, rng));
    // Correct A_0 so that P(lambda0) v = 0.
    Vector image = Vector::Zero(3);
    Complex pw = 1.0;
    for (int j = 0; j < 4; ++j) {
        image += pw * (coeffs[static_cast<size_t>(j)] * v);
        pw *= lambda0;
    }
    coeffs[0] -= image * v.adjoint();
    const MatrixPolynomial p(coeffs, Structure::none);
    CHECK(eta_unstructured(p, lambda0) <= 1e-10);
}

TEST_CASE("eta_structured: planted eigenvalue gives zero backward error") {
    // A skew_T polynomial is singular wherever det P = 0; pick an actual
    // eigenvalue via the companion route and feed it back in.
    const MatrixPolynomial p = random_polynomial(Structure::even_T, 4, 3, 94);
    const Vector eigs = polynomial_eigenvalues(p);
    REQUIRE(eigs.size() > 0);
    Complex lambda = eigs[0];
    for (Index i = 0; i < eigs.size(); ++i)
        if (std::abs(eigs[i]) > 0.3 && std::abs(eigs[i]) < 3.0) lambda = eigs[i];

    const BackwardErrorReport rep = eta_structured(p, lambda, quick_opts(94));
    CHECK(rep.eta <= 1e-6);
    CHECK(rep.status == EtaStatus::exact);
    CHECK(eta_unstructured(p, lambda) <= 1e-6);
}

TEST_CASE("structured error dominates the unstructured one") {
    Rng rng(95);
    int exact_rows = 0;
    for (int trial = 0; trial < 6; ++trial) {
        const Structure st = trial % 2 == 0 ? Structure::pal_T : Structure::even_T;
        const Index n = st == Structure::pal_T ? 3 : 4;
        const MatrixPolynomial p = random_polynomial(st, n, 3, 950 + trial);
        const double r = rng.uniform(0.5, 1.4);
        const double theta = rng.uniform(0.3, 2.8);
        const Complex lambda = std::polar(r, theta);

        const double eta_u = eta_unstructured(p, lambda);
        const BackwardErrorReport rep = eta_structured(p, lambda, quick_opts(960 + trial));
        CHECK(rep.eta >= eta_u - 1e-8);
        if (rep.status == EtaStatus::exact) {
            ++exact_rows;
            CHECK(rep.eta == doctest::Approx(1.0 / std::sqrt(rep.m_value)));
        }
    }
    CHECK(exact_rows >= 4);
}

TEST_CASE("mu_skew anchors") {
    // Skew-symmetric M: the constraint is vacuous and mu = ||M||.
    Rng rng(96);
    const Matrix skew = random_skew_symmetric(4, rng);
    const MuResult vac = mu_skew_value(skew, quick_opts(96));
    CHECK(vac.rank_warning);
    CHECK(vac.mu == doctest::Approx(spectral_norm(skew)).epsilon(1e-8));

    // M = I_2: isotropic vectors are feasible and the quotient is constant.
    const MuResult id = mu_skew_value(Matrix::Identity(2, 2), quick_opts(97));
    CHECK(id.mu == doctest::Approx(1.0).epsilon(1e-8));
    CHECK_FALSE(id.rank_warning);
}

TEST_CASE("mu_skew agrees with the one-parameter oracle") {
    Rng rng(98);
    for (int trial = 0; trial < 5; ++trial) {
        const Index n = 2 + trial % 4;
        const Matrix m = random_complex_matrix(n, n, rng);
        if (numerical_rank((m + m.transpose()).eval()) < 2) continue;
        const MuResult mu = mu_skew_value(m, quick_opts(980 + trial));
        const KarowResult k = karow_single(trusted_hermitian(m.adjoint() * m),
                                           trusted_symmetric(m + m.transpose()));
        const double mu_oracle = std::sqrt(std::max(k.value, 0.0));
        CHECK(mu.mu == doctest::Approx(mu_oracle).epsilon(1e-6));
    }
}

TEST_CASE("rank probe: pal_T systems sample at full claimed rank") {
    const MatrixPolynomial p = random_polynomial(Structure::pal_T, 2, 3, 99);
    const ConstraintSystem sys = reduce_to_constraints(p, Complex(0.5, 0.9));
    const RankProbeReport rep =
        rank_condition_probe(sys, 100, 99, claimed_reduction_rank(p));
    CHECK(rep.verdict == RankVerdict::verified_full);
    CHECK(rep.min_rank == 4);
    CHECK(rep.max_rank == 4);
}

TEST_CASE("rank probe: even_T systems stay at rank >= 2n") {
    const MatrixPolynomial p = random_polynomial(Structure::even_T, 2, 3, 100);
    const ConstraintSystem sys = reduce_to_constraints(p, Complex(0.9, 0.2));
    const RankProbeReport rep = rank_condition_probe(sys, 100, 100);
    CHECK(rep.verdict != RankVerdict::failed);
    CHECK(rep.min_rank >= 4);
}

TEST_CASE("rank probe: the skew_T witness direction breaks the claim") {
    const MatrixPolynomial p = random_polynomial(Structure::skew_T, 4, 1, 101);
    const Complex lambda(1.1, -0.6);
    const ConstraintSystem sys = reduce_to_constraints(p, lambda);

    const RealVector witness = skew_pencil_witness(lambda);
    // The collapse is analytic: f(witness) is proportional to a rank-one
    // Kronecker factor times M + M^T, which vanishes for a skew pencil.
    const double family_scale = spectral_norm(sys.constraint(0).get());
    CHECK(spectral_norm(assemble_f(sys, witness)) <= 1e-12 * family_scale);

    const RankProbeReport rep = rank_condition_probe(sys, 50, 101,
                                                     claimed_reduction_rank(p), {witness});
    CHECK(rep.verdict == RankVerdict::failed);
    REQUIRE(rep.witness.has_value());
    CHECK(rep.min_rank < claimed_reduction_rank(p));
    CHECK(rep.min_rank <= 4);
}

TEST_CASE("singular evaluation point raises the eigenvalue signal") {
    const MatrixPolynomial p = random_polynomial(Structure::even_T, 4, 3, 102);
    const Vector eigs = polynomial_eigenvalues(p);
    REQUIRE(eigs.size() > 0);
    CHECK_THROWS_AS((void)make_evaluation_point(p, eigs[0]), SingularEvaluation);
}

TEST_CASE("pal and antipal share the Gram H at |lambda| = 1") {
    // Gamma is the identity for both structures there, so H reduces to
    // (Lambda* Lambda) (x) (M* M) in each case.
    const Complex lambda(0, 1);
    for (Structure st : {Structure::pal_T, Structure::antipal_T}) {
        const MatrixPolynomial p = random_polynomial(st, 2, 3, 130);
        const ConstraintSystem sys = reduce_to_constraints(p, lambda);
        const EvaluationPoint ev = make_evaluation_point(p, lambda);
        const Matrix gram = kron((ev.lam_row.adjoint() * ev.lam_row).eval(),
                                 (ev.m_inv.adjoint() * ev.m_inv).eval());
        CHECK((sys.h().get() - gram).norm() <= 1e-12 * std::max(1.0, gram.norm()));
    }
}
