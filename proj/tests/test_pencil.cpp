#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rayq/pencil.hpp"
#include "rayq/random.hpp"

using namespace rayq;

namespace {

ConstraintSystem diag_anchor() {
    Matrix h = Matrix::Zero(3, 3);
    h.diagonal() << 2, 1, 0;
    Matrix s = Matrix::Zero(3, 3);
    s.diagonal() << 1, -1, 0;
    return ConstraintSystem(HermitianMatrix(h), {SymmetricMatrix(s)});
}

ConstraintSystem random_system(Index n, Index k, Rng& rng) {
    std::vector<SymmetricMatrix> constraints;
    for (Index j = 0; j <= k; ++j) constraints.emplace_back(random_symmetric(n, rng));
    return ConstraintSystem(HermitianMatrix(random_hermitian(n, rng)), std::move(constraints));
}

RealVector vec1(double a) {
    RealVector t(1);
    t << a;
    return t;
}

}  // namespace

TEST_CASE("assemble_f anchors") {
    Rng rng(21);
    const Matrix s0 = random_symmetric(3, rng);
    const Matrix s1 = random_symmetric(3, rng);
    ConstraintSystem single(HermitianMatrix(random_hermitian(3, rng)), {SymmetricMatrix(s0)});
    ConstraintSystem pair(HermitianMatrix(random_hermitian(3, rng)),
                          {SymmetricMatrix(s0), SymmetricMatrix(s1)});

    CHECK((assemble_f(single, vec1(2.0)) - 2.0 * s0).norm() <= 1e-15);
    CHECK(assemble_f(single, vec1(0.0)).norm() == doctest::Approx(0.0));

    RealVector imag_only(3);
    imag_only << 0, 1, 0;
    const Matrix f = assemble_f(pair, imag_only);
    CHECK((f - Complex(0, 1) * s0).norm() <= 1e-15);
    CHECK((f - f.transpose()).norm() <= 1e-12 * std::max(1.0, f.norm()));

    RealVector wrong(2);
    wrong << 1, 1;
    CHECK_THROWS_AS((void)assemble_f(pair, wrong), InputError);
}

TEST_CASE("assemble_F: block-diagonal at t = 0 and single-constraint form") {
    Rng rng(22);
    const Matrix h = random_hermitian(3, rng);
    ConstraintSystem sys(HermitianMatrix(h), {SymmetricMatrix(random_symmetric(3, rng))});

    const Matrix f0 = assemble_F(sys, vec1(0.0)).get();
    CHECK((f0.topLeftCorner(3, 3) - h).norm() <= 1e-14);
    CHECK((f0.bottomRightCorner(3, 3) - h.conjugate()).norm() <= 1e-14);
    CHECK(f0.topRightCorner(3, 3).norm() == doctest::Approx(0.0));

    const Matrix s0 = random_symmetric(2, rng);
    ConstraintSystem id_sys(HermitianMatrix(Matrix::Identity(2, 2)), {SymmetricMatrix(s0)});
    const double w = 0.7;
    const Matrix fw = assemble_F(id_sys, vec1(w)).get();
    CHECK((fw.topRightCorner(2, 2) - w * s0.conjugate()).norm() <= 1e-14);
    CHECK((fw.bottomLeftCorner(2, 2) - w * s0).norm() <= 1e-14);
}

TEST_CASE("assemble_F agrees with G + sum t_j H_j on random input") {
    Rng rng(23);
    for (int trial = 0; trial < 5; ++trial) {
        const Index n = 2 + trial % 3;
        const Index k = trial % 3;
        const ConstraintSystem sys = random_system(n, k, rng);
        const PencilAssembly blocks = assemble_blocks(sys);
        REQUIRE(static_cast<Index>(blocks.blocks.size()) == sys.param_dim());

        RealVector t(sys.param_dim());
        for (Index i = 0; i < t.size(); ++i) t[i] = rng.normal();

        Matrix via_blocks = blocks.g;
        for (Index j = 0; j < sys.param_dim(); ++j)
            via_blocks += t[j] * blocks.blocks[static_cast<size_t>(j)];
        const Matrix direct = assemble_F(sys, t).get();
        CHECK((via_blocks - direct).norm() <= 1e-14 * std::max(1.0, direct.norm()));

        for (const auto& b : blocks.blocks) {
            CHECK((b - b.adjoint()).norm() <= 1e-12 * std::max(1.0, b.norm()));
            CHECK(b.topLeftCorner(n, n).norm() == doctest::Approx(0.0));
            CHECK(b.bottomRightCorner(n, n).norm() == doctest::Approx(0.0));
        }
    }
}

TEST_CASE("psi anchors") {
    Rng rng(24);
    // psi(0) duplicates the spectrum of H, so it equals lambda_max(H).
    for (int trial = 0; trial < 3; ++trial) {
        const ConstraintSystem sys = random_system(3, trial % 2, rng);
        const RealVector zero = RealVector::Zero(sys.param_dim());
        CHECK(psi(sys, zero) ==
              doctest::Approx(lambda_k(sys.h(), 1)).epsilon(1e-12));
    }

    // H = I with a rank >= 2 constraint: psi(s) = 1 + |s| sigma_2(S).
    const Matrix s0 = random_symmetric(4, rng);
    ConstraintSystem id_sys(HermitianMatrix(Matrix::Identity(4, 4)), {SymmetricMatrix(s0)});
    const double sigma2 = singular_values(s0)[1];
    for (double s : {0.3, -0.8, 1.7})
        CHECK(psi(id_sys, vec1(s)) == doctest::Approx(1.0 + std::abs(s) * sigma2).epsilon(1e-10));

    // Anchor system: scanning s locates the analytic minimum 1.5 at s = 0.5.
    const ConstraintSystem anchor = diag_anchor();
    double best = std::numeric_limits<double>::infinity();
    double best_s = 0;
    for (int i = 0; i <= 2000; ++i) {
        const double s = 2.0 * i / 2000.0;
        const double val = psi(anchor, vec1(s));
        if (val < best) {
            best = val;
            best_s = s;
        }
    }
    CHECK(best == doctest::Approx(1.5).epsilon(1e-6));
    CHECK(best_s == doctest::Approx(0.5).epsilon(1e-2));
}

TEST_CASE("psi variant second_smallest matches the negation identity") {
    Rng rng(25);
    for (int trial = 0; trial < 4; ++trial) {
        const ConstraintSystem sys = random_system(3, 1, rng);
        const ConstraintSystem neg = sys.negated();
        RealVector t(sys.param_dim());
        for (Index i = 0; i < t.size(); ++i) t[i] = rng.normal();
        // lambda_{2n-1}(F(t)) = -lambda_2(F_neg(-t)).
        const double lhs = psi(sys, t, PsiVariant::second_smallest);
        const double rhs = -psi(neg, RealVector(-t), PsiVariant::second_largest);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("psi_gradient matches central finite differences away from coalescence") {
    Rng rng(26);
    const double step = 1e-6;
    int checked = 0;
    for (int trial = 0; trial < 40 && checked < 12; ++trial) {
        const Index n = 2 + trial % 3;
        const Index k = trial % 2;
        const ConstraintSystem sys = random_system(n, k, rng);
        RealVector t(sys.param_dim());
        for (Index i = 0; i < t.size(); ++i) t[i] = rng.normal();

        const PsiGradient g = psi_gradient(sys, t, 1e-8);
        if (g.gap <= 1e-6 * g.f_norm) continue;
        ++checked;
        REQUIRE(g.is_simple);
        for (Index j = 0; j < t.size(); ++j) {
            RealVector tp = t, tm = t;
            tp[j] += step;
            tm[j] -= step;
            const double fd = (psi(sys, tp) - psi(sys, tm)) / (2 * step);
            CHECK(g.grad[j] ==
                  doctest::Approx(fd).epsilon(1e-5));
        }
    }
    CHECK(checked == 12);
}

TEST_CASE("psi_gradient flags t = 0 as non-simple (lambda_1 = lambda_2 there)") {
    Rng rng(27);
    Matrix h = random_hermitian(3, rng);
    // Make lambda_max simple as an eigenvalue of H; F(0) still duplicates it.
    h += 2.0 * Matrix::Identity(3, 3);
    ConstraintSystem sys(HermitianMatrix(h), {SymmetricMatrix(random_symmetric(3, rng))});
    const PsiGradient g = psi_gradient(sys, RealVector::Zero(1), 1e-8);
    CHECK_FALSE(g.is_simple);
}

TEST_CASE("psi_gradient slope matches 1 + s sigma_2 for H = I") {
    Rng rng(28);
    const Matrix s0 = random_symmetric(4, rng);
    ConstraintSystem sys(HermitianMatrix(Matrix::Identity(4, 4)), {SymmetricMatrix(s0)});
    const RealVector sv = singular_values(s0);
    const PsiGradient g = psi_gradient(sys, vec1(0.9), 1e-8);
    if (g.is_simple)  // sigma_2 could tie with sigma_1/sigma_3 only by accident
        CHECK(g.grad[0] == doctest::Approx(sv[1]).epsilon(1e-8));
}

TEST_CASE("compute_c_beta anchors") {
    Rng rng(29);
    // S_0 = I: lambda_2 of the direction pencil is sigma_2(I) = 1 on either
    // sphere point, so c = 1 and beta is the spectral spread of H.
    const Matrix h = random_hermitian(4, rng);
    ConstraintSystem sys(HermitianMatrix(h), {SymmetricMatrix(Matrix::Identity(4, 4))});
    const CBeta cb = compute_c_beta(sys, 10, 1);
    CHECK(cb.c == doctest::Approx(1.0).epsilon(1e-10));
    const auto spec = eig_hermitian(sys.h());
    REQUIRE(cb.beta.has_value());
    CHECK(*cb.beta == doctest::Approx(spec.values[0] - spec.values[3]).epsilon(1e-10));

    // H = I: beta = 0.
    ConstraintSystem id_sys(HermitianMatrix(Matrix::Identity(3, 3)),
                            {SymmetricMatrix(random_symmetric(3, rng))});
    const CBeta cb_id = compute_c_beta(id_sys, 10, 1);
    REQUIRE(cb_id.beta.has_value());
    CHECK(*cb_id.beta == doctest::Approx(0.0));
}

TEST_CASE("direction pencil spectrum comes in +- pairs") {
    Rng rng(30);
    for (int trial = 0; trial < 4; ++trial) {
        const Index n = 2 + trial;
        const ConstraintSystem sys = random_system(n, 1, rng);
        const PencilAssembly blocks = assemble_blocks(sys);
        RealVector t(sys.param_dim());
        for (Index i = 0; i < t.size(); ++i) t[i] = rng.normal();

        Matrix direction = Matrix::Zero(2 * n, 2 * n);
        for (Index j = 0; j < sys.param_dim(); ++j)
            direction += t[j] * blocks.blocks[static_cast<size_t>(j)];
        const auto spec = eig_hermitian(trusted_hermitian(direction));
        const double scale = std::max(1.0, std::abs(spec.values[0]));
        for (Index j = 0; j < 2 * n; ++j)
            CHECK(spec.values[j] == doctest::Approx(-spec.values[2 * n - 1 - j])
                                        .epsilon(1e-9 * scale));

        // And lambda2_direction agrees with the explicit 2n x 2n eigenvalue.
        CHECK(lambda2_direction(sys, t) == doctest::Approx(spec.values[1]).epsilon(1e-10));
    }
}

TEST_CASE("psi is even in t for a single constraint") {
    Rng rng(31);
    const ConstraintSystem sys = random_system(3, 0, rng);
    for (double s : {0.2, 1.1, 3.7})
        CHECK(psi(sys, vec1(s)) == doctest::Approx(psi(sys, vec1(-s))).epsilon(1e-12));
}

TEST_CASE("psi is invariant under unitary congruence of the data") {
    Rng rng(32);
    for (int trial = 0; trial < 3; ++trial) {
        const Index n = 3;
        const ConstraintSystem sys = random_system(n, 1, rng);
        // Random unitary from the QR of a random matrix.
        const Eigen::HouseholderQR<Matrix> qr(random_complex_matrix(n, n, rng));
        const Matrix u = qr.householderQ();

        std::vector<SymmetricMatrix> rotated;
        for (const auto& s : sys.constraints())
            rotated.push_back(trusted_symmetric(u.transpose() * s.get() * u));
        ConstraintSystem rot(trusted_hermitian(u.adjoint() * sys.h().get() * u),
                             std::move(rotated));

        RealVector t(sys.param_dim());
        for (Index i = 0; i < t.size(); ++i) t[i] = rng.normal();
        CHECK(psi(rot, t) == doctest::Approx(psi(sys, t)).epsilon(1e-9));
    }
}

TEST_CASE("psi is Lipschitz in t with the direction-block norms") {
    Rng rng(33);
    const ConstraintSystem sys = random_system(3, 1, rng);
    std::vector<double> block_norms;
    for (Index j = 0; j <= sys.k(); ++j)
        block_norms.push_back(spectral_norm(sys.constraint(j).get()));

    for (int trial = 0; trial < 10; ++trial) {
        RealVector t1(sys.param_dim()), t2(sys.param_dim());
        for (Index i = 0; i < t1.size(); ++i) {
            t1[i] = 2.0 * rng.normal();
            t2[i] = 2.0 * rng.normal();
        }
        double bound = 0.0;
        for (Index j = 0; j < sys.k(); ++j) {
            bound += std::abs(t1[2 * j] - t2[2 * j]) * block_norms[static_cast<size_t>(j)];
            bound += std::abs(t1[2 * j + 1] - t2[2 * j + 1]) * block_norms[static_cast<size_t>(j)];
        }
        bound += std::abs(t1[2 * sys.k()] - t2[2 * sys.k()]) * block_norms.back();
        CHECK(std::abs(psi(sys, t1) - psi(sys, t2)) <= bound + 1e-9);
    }
}
