#pragma once

#include <string>
#include <vector>

#include "rayq/backward_error.hpp"
#include "rayq/io.hpp"

namespace rayq {

/// Seeded random polynomial with the requested coefficient structure:
/// independent standard-normal real/imaginary parts, then reflected or
/// (skew-)symmetrized as the tag demands.
MatrixPolynomial random_polynomial(Structure structure, Index n, Index degree,
                                   std::uint64_t seed);

/// All finite eigenvalues of P via the companion linearization. Requires an
/// invertible leading (or, failing that, trailing) coefficient.
Vector polynomial_eigenvalues(const MatrixPolynomial& p);

enum class ExperimentKind { pal_table, even_table, approach_sweep };

ExperimentKind experiment_kind_from_string(const std::string& name);

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::pal_table;
    Index n = 0;       // 0 = kind default (3 for pal, 4 for even)
    Index degree = 3;
    std::uint64_t seed = 0;
    SolverOptions solver;
};

struct ExperimentResult {
    std::vector<io::ReportRecord> rows;
    std::string csv;  // header + one line per row, '\n' separated
};

/// Seeded study: a random structured polynomial evaluated at random lambda
/// points (tables) or on a geometric sequence approaching one of its
/// computed eigenvalues (approach-sweep).
ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace rayq
