#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "wedge/config.hpp"
#include "wedge/error.hpp"
#include "wedge/gauss_map.hpp"
#include "wedge/linalg.hpp"
#include "wedge/rng.hpp"

namespace wedge {

struct SubmersionReport {
    bool submersion = false;
    int jacobian_rank = 0;
    int expected_rank = 0;
};

// Rank of the differential restricted to the linear-identity nullspace;
// submersion iff it equals dim of the curvature space.
[[nodiscard]] inline SubmersionReport verify_submersion(const SecondFF& h,
                                                        const PhiCoefficients& psi,
                                                        const ProblemDims& d,
                                                        const Config& cfg = {}) {
    const Eigen::MatrixXd nullbasis = cartan_nullspace(psi, d, cfg);
    const Eigen::MatrixXd restricted = gauss_jacobian(h) * nullbasis;
    SubmersionReport rep;
    rep.expected_rank = curvature_space_dim(d.m, d.n);
    rep.jacobian_rank = svd_rank(restricted, cfg.rank_rel_tol);
    rep.submersion = rep.jacobian_rank == rep.expected_rank;
    return rep;
}

struct DimensionAudit {
    int dim_sigma = 0;   // m + n(n-1)/2 + n*kappa
    int dim_K = 0;       // curvature-space dimension
    int dim_fiber = 0;   // (nm-1)kappa - dim_K
    int dim_Z = 0;       // dim_sigma + dim_fiber
};

[[nodiscard]] inline DimensionAudit dimension_audit(const ProblemDims& d) {
    validate_dims(d);
    if (d.kappa < kappa_min(d.m, d.n))
        throw Error("codimension is below the surjectivity bound (m-1)(n-1)");
    DimensionAudit a;
    a.dim_sigma = d.m + d.n * (d.n - 1) / 2 + d.n * d.kappa;
    a.dim_K = curvature_space_dim(d.m, d.n);
    a.dim_fiber = (d.n * d.m - 1) * d.kappa - a.dim_K;
    a.dim_Z = a.dim_sigma + a.dim_fiber;
    return a;
}

// Numeric fiber dimension at h: nullity of the differential restricted to the
// linear-identity nullspace.
[[nodiscard]] inline int numeric_fiber_dim(const SecondFF& h, const PhiCoefficients& psi,
                                           const ProblemDims& d, const Config& cfg = {}) {
    const Eigen::MatrixXd nullbasis = cartan_nullspace(psi, d, cfg);
    const Eigen::MatrixXd restricted = gauss_jacobian(h) * nullbasis;
    return static_cast<int>(nullbasis.cols()) - svd_rank(restricted, cfg.rank_rel_tol);
}

struct SolveReport {
    SecondFF h;
    double residual_gauss = 0.0;   // max-norm of G(H) - R
    double residual_cartan = 0.0;  // max-norm of the linear identity residual
    int jacobian_rank = 0;
    bool submersion = false;
    int iterations = 0;
    std::uint64_t seed = 0;
};

namespace detail {

[[nodiscard]] inline SecondFF unvec_h(const Eigen::VectorXd& v, const ProblemDims& d) {
    SecondFF h(d.kappa, d.n, d.m);
    for (long k = 0; k < v.size(); ++k) h.h[static_cast<std::size_t>(k)] = v(k);
    return h;
}

[[nodiscard]] inline Eigen::VectorXd gauss_residual_vec(const SecondFF& h,
                                                        const CurvatureTensor& target) {
    const CurvatureTensor g = gauss_map(h);
    Eigen::VectorXd r(static_cast<long>(g.r.size()));
    for (std::size_t k = 0; k < g.r.size(); ++k)
        r(static_cast<long>(k)) = g.r[k] - target.r[k];
    return r;
}

} // namespace detail

// Solve G(H) = R for H in the linear-identity nullspace with independent
// {H_{i lambda}}.  Damped Gauss-Newton in nullspace coordinates with a
// Levenberg-Marquardt trust parameter; multi-start with consecutive seeds,
// first converging admissible start wins.  Throws SolveFailure with the best
// residual seen when every start fails.
[[nodiscard]] inline SolveReport solve_gauss(const CurvatureTensor& target,
                                             const PhiCoefficients& psi, const ProblemDims& d,
                                             const Config& cfg = {}) {
    validate_dims(d);
    if (d.kappa < kappa_min(d.m, d.n))
        throw Error("codimension is below the surjectivity bound (m-1)(n-1)");
    if (target.n != d.n || target.m != d.m || psi.n != d.n || psi.m != d.m)
        throw Error("coefficient table shape mismatch");
    if (psi.is_zero()) throw Error("the bundle-valued form must be nonzero");

    const Eigen::MatrixXd nullbasis = cartan_nullspace(psi, d, cfg);
    const long q = nullbasis.cols();
    if (q == 0) throw Error("the linear identity constraints admit only the zero solution");

    double scale = 1.0;
    for (double v : target.r) scale = std::max(scale, std::abs(v));
    scale = std::sqrt(scale);

    double best_residual = std::numeric_limits<double>::infinity();

    for (int start = 0; start < cfg.starts; ++start) {
        const std::uint64_t start_seed = cfg.seed + static_cast<std::uint64_t>(start);
        Rng rng(start_seed);
        Eigen::VectorXd raw(nullbasis.rows());
        for (long k = 0; k < raw.size(); ++k) raw(k) = scale * rng.gaussian();
        Eigen::VectorXd z = nullbasis.transpose() * raw;

        double mu = 1e-3;
        SecondFF h = detail::unvec_h(nullbasis * z, d);
        Eigen::VectorXd r = detail::gauss_residual_vec(h, target);
        int iterations = 0;
        bool converged = false;

        while (iterations < cfg.max_iterations) {
            if (r.lpNorm<Eigen::Infinity>() <= cfg.residual_tol) {
                converged = true;
                break;
            }
            ++iterations;
            const Eigen::MatrixXd jz = gauss_jacobian(h) * nullbasis;
            const Eigen::MatrixXd normal =
                jz.transpose() * jz + mu * Eigen::MatrixXd::Identity(q, q);
            const Eigen::VectorXd step = normal.ldlt().solve(-jz.transpose() * r);
            const Eigen::VectorXd z_trial = z + step;
            const SecondFF h_trial = detail::unvec_h(nullbasis * z_trial, d);
            const Eigen::VectorXd r_trial = detail::gauss_residual_vec(h_trial, target);
            if (r_trial.squaredNorm() < r.squaredNorm()) {
                z = z_trial;
                h = h_trial;
                r = r_trial;
                mu = std::max(mu * 0.3, 1e-14);
            } else {
                mu *= 10.0;
                if (!(mu < 1e60)) break; // damping blew up: stuck
            }
        }
        if (r.lpNorm<Eigen::Infinity>() <= cfg.residual_tol) converged = true;
        best_residual = std::min(best_residual, r.lpNorm<Eigen::Infinity>());
        if (!converged) continue;
        if (!is_independent(h, cfg)) continue; // admissibility failed: next seed

        SolveReport rep;
        rep.h = h;
        rep.residual_gauss = r.lpNorm<Eigen::Infinity>();
        double rc = 0.0;
        for (double v : cartan_identities_residual(h, psi)) rc = std::max(rc, std::abs(v));
        rep.residual_cartan = rc;
        const SubmersionReport sub = verify_submersion(h, psi, d, cfg);
        rep.jacobian_rank = sub.jacobian_rank;
        rep.submersion = sub.submersion;
        rep.iterations = iterations;
        rep.seed = start_seed;
        return rep;
    }
    throw SolveFailure("no start converged to an admissible solution", best_residual);
}

} // namespace wedge
