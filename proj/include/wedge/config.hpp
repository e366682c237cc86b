#pragma once

#include <cstdint>

namespace wedge {

// Tolerances and solver knobs shared across the numeric paths. Values are
// the pinned defaults of the acceptance suite; callers may override.
struct Config {
    // Singular values below rank_rel_tol * max(largest, 1) count as zero.
    double rank_rel_tol = 1e-8;

    // Max-norm convergence bound for the curvature-prescription solver.
    double residual_tol = 1e-9;

    // Max-norm bound on the linear identity residual at a solution.
    double cartan_tol = 1e-12;

    // Admissibility bounds when constructing the embedding ideal from a
    // numerically solved second fundamental form.
    double embed_gauss_tol = 1e-8;
    double embed_cartan_tol = 1e-10;

    // Smallest/largest singular value ratio for the independence check.
    double independence_rel_tol = 1e-6;

    // Perturbation radius for sampled rank-constancy checks.
    double sample_radius = 1e-3;

    int max_iterations = 500;
    int starts = 8;
    std::uint64_t seed = 0;

    int json_indent = 2;
};

} // namespace wedge
