#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rayq/experiment.hpp"
#include "rayq/oracle.hpp"

namespace py = pybind11;
using namespace rayq;

namespace {

ConstraintSystem make_system(const Matrix& h, const std::vector<Matrix>& constraints) {
    std::vector<SymmetricMatrix> s;
    s.reserve(constraints.size());
    for (const auto& c : constraints) s.emplace_back(c);
    return ConstraintSystem(HermitianMatrix(h), std::move(s));
}

SolverOptions make_options(Index starts, std::uint64_t seed) {
    SolverOptions opts;
    opts.starts = starts;
    opts.seed = seed;
    return opts;
}

MatrixPolynomial make_polynomial(const std::vector<Matrix>& coefficients,
                                 const std::string& structure) {
    return MatrixPolynomial(coefficients, structure_from_string(structure));
}

}  // namespace

PYBIND11_MODULE(rayq, m) {
    m.doc() = "Constrained Rayleigh-quotient suprema and structured eigenvalue "
              "backward errors of matrix polynomials";

    py::class_<MinimizationResult>(m, "MinimizationResult")
        .def_readonly("t_hat", &MinimizationResult::t_hat)
        .def_readonly("lambda2_hat", &MinimizationResult::lambda2_hat)
        .def_readonly("is_simple", &MinimizationResult::is_simple)
        .def_readonly("certificate", &MinimizationResult::certificate)
        .def_readonly("beta", &MinimizationResult::beta)
        .def_readonly("c_value", &MinimizationResult::c_value)
        .def_property_readonly(
            "status", [](const MinimizationResult& r) { return to_string(r.status); })
        .def("__repr__", [](const MinimizationResult& r) {
            return "<MinimizationResult lambda2_hat=" + io::format_number(r.lambda2_hat) +
                   " status=" + to_string(r.status) + ">";
        });

    m.def(
        "psi",
        [](const Matrix& h, const std::vector<Matrix>& constraints, const RealVector& t,
           const std::string& variant) {
            return psi(make_system(h, constraints), t,
                       variant == "second_smallest" ? PsiVariant::second_smallest
                                                    : PsiVariant::second_largest);
        },
        py::arg("h"), py::arg("constraints"), py::arg("t"),
        py::arg("variant") = "second_largest",
        "lambda_2 (or lambda_{2n-1}) of the pencil F(t)");

    m.def(
        "minimize_psi",
        [](const Matrix& h, const std::vector<Matrix>& constraints, Index starts,
           std::uint64_t seed) {
            return minimize_psi(make_system(h, constraints), PsiVariant::second_largest,
                                make_options(starts, seed));
        },
        py::arg("h"), py::arg("constraints"), py::arg("starts") = 30, py::arg("seed") = 0,
        "Global minimization of lambda_2(F(t)); deterministic for a fixed seed");

    m.def(
        "m_value",
        [](const Matrix& h, const std::vector<Matrix>& constraints, Index starts,
           std::uint64_t seed) {
            const MValue v = m_value(make_system(h, constraints), make_options(starts, seed));
            return py::make_tuple(v.value, to_string(v.status));
        },
        py::arg("h"), py::arg("constraints"), py::arg("starts") = 30, py::arg("seed") = 0,
        "Constrained Rayleigh-quotient supremum; returns (value, status)");

    m.def(
        "m_tilde_value",
        [](const Matrix& h, const std::vector<Matrix>& constraints, Index starts,
           std::uint64_t seed) {
            const MValue v =
                m_tilde_value(make_system(h, constraints), make_options(starts, seed));
            return py::make_tuple(v.value, to_string(v.status));
        },
        py::arg("h"), py::arg("constraints"), py::arg("starts") = 30, py::arg("seed") = 0,
        "Constrained Rayleigh-quotient infimum; returns (value, status)");

    m.def(
        "karow_single",
        [](const Matrix& h, const Matrix& s) {
            const KarowResult r = karow_single(HermitianMatrix(h), SymmetricMatrix(s));
            return py::make_tuple(r.value, r.t_min);
        },
        py::arg("h"), py::arg("s"),
        "One-parameter single-constraint formula; returns (value, t_min)");

    m.def(
        "penalty_maximize",
        [](const Matrix& h, const std::vector<Matrix>& constraints, Index starts,
           std::uint64_t seed) -> py::object {
            const auto r = penalty_maximize(make_system(h, constraints), starts, seed);
            if (!r) return py::none();
            return py::make_tuple(r->value, r->v);
        },
        py::arg("h"), py::arg("constraints"), py::arg("starts") = 20, py::arg("seed") = 0,
        "Feasible-point lower bound on m; returns (value, v) or None");

    m.def(
        "feasible_sample",
        [](const std::vector<Matrix>& constraints, Index count, std::uint64_t seed) {
            std::vector<SymmetricMatrix> s;
            for (const auto& c : constraints) s.emplace_back(c);
            return feasible_sample(s, count, seed);
        },
        py::arg("constraints"), py::arg("count") = 10, py::arg("seed") = 0,
        "Unit vectors satisfying every quadric constraint to 1e-8");

    m.def(
        "reduce_to_constraints",
        [](const std::vector<Matrix>& coefficients, const std::string& structure,
           Complex lambda) {
            const ConstraintSystem sys =
                reduce_to_constraints(make_polynomial(coefficients, structure), lambda);
            std::vector<Matrix> cs;
            for (const auto& s : sys.constraints()) cs.push_back(s.get());
            return py::make_tuple(sys.h().get(), cs);
        },
        py::arg("coefficients"), py::arg("structure"), py::arg("lambda_"),
        "Constraint system (H, [S_0, ...]) of the structured reduction");

    m.def(
        "eta_unstructured",
        [](const std::vector<Matrix>& coefficients, Complex lambda) {
            return eta_unstructured(MatrixPolynomial(coefficients, Structure::none), lambda);
        },
        py::arg("coefficients"), py::arg("lambda_"),
        "Unstructured eigenvalue backward error");

    m.def(
        "eta_structured",
        [](const std::vector<Matrix>& coefficients, const std::string& structure,
           Complex lambda, Index starts, std::uint64_t seed) {
            const BackwardErrorReport r = eta_structured(
                make_polynomial(coefficients, structure), lambda, make_options(starts, seed));
            return py::make_tuple(r.eta, to_string(r.status), r.m_value);
        },
        py::arg("coefficients"), py::arg("structure"), py::arg("lambda_"),
        py::arg("starts") = 30, py::arg("seed") = 0,
        "Structured eigenvalue backward error; returns (eta, status, m_value)");

    m.def(
        "mu_skew",
        [](const Matrix& mat, Index starts, std::uint64_t seed) {
            const MuResult r = mu_skew_value(mat, make_options(starts, seed));
            return py::make_tuple(r.mu, to_string(r.m.status), r.rank_warning);
        },
        py::arg("m"), py::arg("starts") = 30, py::arg("seed") = 0,
        "mu-value under skew-symmetric perturbations; returns (mu, status, rank_warning)");

    m.def(
        "random_polynomial",
        [](const std::string& structure, Index n, Index degree, std::uint64_t seed) {
            return random_polynomial(structure_from_string(structure), n, degree, seed)
                .coefficients();
        },
        py::arg("structure"), py::arg("n"), py::arg("degree") = 3, py::arg("seed") = 0,
        "Seeded random coefficients with the requested structure");

    m.attr("__version__") = "1.0.0";
}
