#pragma once

#include <string>
#include <utility>
#include <vector>

#include "wedge/cartan_test.hpp"
#include "wedge/config.hpp"
#include "wedge/error.hpp"
#include "wedge/exterior_system.hpp"
#include "wedge/form.hpp"
#include "wedge/gauss_map.hpp"
#include "wedge/poly.hpp"
#include "wedge/rational.hpp"

namespace wedge {

// Exterior ideal of the isometric-embedding problem at a point of the frame
// space, together with the coordinate m-plane it is built around.
struct EmbeddingIdeal {
    ExteriorSystem system;
    Flag plane;
    std::vector<std::string> coframe_names;
};

namespace detail {

[[nodiscard]] inline Form scaled_form(const Form& f, const Rational& s, int chart_dim) {
    Form out(f.dim(), f.degree());
    for (const auto& [k, c] : f.terms()) out.add_term(k, c * Poly::constant(chart_dim, s));
    return out;
}

} // namespace detail

// Ideal generated by the rotation-block coframe elements, the quadratic
// curvature generators, and the linear-identity generators, all written in
// the reduced one-forms pi^a_i = w^{n+a}_i - sum_lambda H^a_{i lambda} eta^lambda.
// The structure table carries the flat frame-space relations with the
// curvature block frozen to the exact quadratic image of H, so the returned
// plane annihilates the closed ideal exactly.
[[nodiscard]] inline EmbeddingIdeal build_embedding_ideal(const ProblemDims& d,
                                                          const CurvatureTensor& target,
                                                          const PhiCoefficients& psi,
                                                          const SecondFF& h,
                                                          const Config& cfg = {}) {
    validate_dims(d);
    if (target.n != d.n || target.m != d.m || psi.n != d.n || psi.m != d.m ||
        h.kappa != d.kappa || h.n != d.n || h.m != d.m)
        throw Error("coefficient table shape mismatch");
    if (psi.is_zero()) throw Error("the bundle-valued form must be nonzero");

    const CurvatureTensor g = gauss_map(h);
    double gauss_err = 0.0;
    for (std::size_t k = 0; k < g.r.size(); ++k)
        gauss_err = std::max(gauss_err, std::abs(g.r[k] - target.r[k]));
    if (gauss_err > cfg.embed_gauss_tol)
        throw Error("second fundamental form violates the curvature equation beyond tolerance");
    double cartan_err = 0.0;
    for (double v : cartan_identities_residual(h, psi))
        cartan_err = std::max(cartan_err, std::abs(v));
    if (cartan_err > cfg.embed_cartan_tol)
        throw Error("second fundamental form violates the linear identities beyond tolerance");
    if (!is_independent(h, cfg))
        throw Error("second fundamental form fails the independence condition");

    const int m = d.m, n = d.n, kappa = d.kappa;
    const int rot = n * (n - 1) / 2;
    const int dim = m + rot + n * kappa;
    const auto w = [&](int i, int j) { return m + detail::pair_index(i, j, n); };
    const auto ext = [&](int a, int i) { return m + rot + a * n + i; };
    const Poly one = Poly::constant(dim, Rational(1));

    // Exact coefficient tables: dyadic images of the floating-point inputs.
    std::vector<std::vector<std::vector<Rational>>> hr(
        static_cast<std::size_t>(kappa),
        std::vector<std::vector<Rational>>(static_cast<std::size_t>(n),
                                           std::vector<Rational>(static_cast<std::size_t>(m))));
    for (int a = 0; a < kappa; ++a)
        for (int i = 0; i < n; ++i)
            for (int lam = 0; lam < m; ++lam)
                hr[a][i][lam] = Rational::from_double(h.at(a, i, lam));
    const auto r_exact = [&](int i, int j, int lam, int mu) {
        Rational acc(0);
        for (int a = 0; a < kappa; ++a)
            acc += hr[a][i][lam] * hr[a][j][mu] - hr[a][i][mu] * hr[a][j][lam];
        return acc;
    };

    // pi^a_i = theta_{ext(a,i)} - sum_lambda H^a_{i lambda} theta_lambda.
    std::vector<std::vector<Form>> pi(static_cast<std::size_t>(kappa));
    for (int a = 0; a < kappa; ++a)
        for (int i = 0; i < n; ++i) {
            Form f(dim, 1);
            f.add_term({ext(a, i)}, one);
            for (int lam = 0; lam < m; ++lam)
                f.add_term({lam}, Poly::constant(dim, -hr[a][i][lam]));
            pi[static_cast<std::size_t>(a)].push_back(std::move(f));
        }

    std::vector<Form> gens;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            Form f(dim, 1);
            f.add_term({w(i, j)}, one);
            gens.push_back(std::move(f));
        }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            Form f(dim, 2);
            for (int a = 0; a < kappa; ++a) {
                const auto& pa = pi[static_cast<std::size_t>(a)];
                f += wedge::wedge(pa[static_cast<std::size_t>(i)],
                                  pa[static_cast<std::size_t>(j)]);
                for (int lam = 0; lam < m; ++lam) {
                    Form eta(dim, 1);
                    eta.add_term({lam}, one);
                    const Form cross =
                        detail::scaled_form(pa[static_cast<std::size_t>(i)], hr[a][j][lam], dim) -
                        detail::scaled_form(pa[static_cast<std::size_t>(j)], hr[a][i][lam], dim);
                    f += wedge::wedge(cross, eta);
                }
            }
            gens.push_back(std::move(f));
        }
    for (int a = 0; a < kappa; ++a) {
        Form f(dim, m);
        for (int i = 0; i < n; ++i)
            for (int lam = 0; lam < m; ++lam) {
                const Rational c = Rational::from_double(psi.at(i, lam));
                if (c.is_zero()) continue;
                MultiIndex omit;
                for (int k = 0; k < m; ++k)
                    if (k != lam) omit.push_back(k);
                Form eta_rest(dim, m - 1);
                eta_rest.add_term(omit, one);
                f += detail::scaled_form(
                    wedge::wedge(pi[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)],
                                 eta_rest),
                    c, dim);
            }
        gens.push_back(std::move(f));
    }

    // Structure table: d eta^lambda = 0; the rotation block carries the
    // prescribed curvature; the normal block carries the flat relations.
    StructureTable table;
    table.d_coframe.assign(static_cast<std::size_t>(dim), Form(dim, 2));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            Form f(dim, 2);
            for (int k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                const int sik = i < k ? 1 : -1;
                const int skj = k < j ? 1 : -1;
                f.add_term_signed({w(std::min(i, k), std::max(i, k)),
                                   w(std::min(k, j), std::max(k, j))},
                                  Poly::constant(dim, Rational(-sik * skj)));
            }
            for (int a = 0; a < kappa; ++a) f.add_term_signed({ext(a, i), ext(a, j)}, one);
            for (int lam = 0; lam < m; ++lam)
                for (int mu = lam + 1; mu < m; ++mu)
                    f.add_term_signed({lam, mu}, Poly::constant(dim, -r_exact(i, j, lam, mu)));
            table.d_coframe[static_cast<std::size_t>(w(i, j))] = std::move(f);
        }
    for (int a = 0; a < kappa; ++a)
        for (int i = 0; i < n; ++i) {
            Form f(dim, 2);
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                const int sji = j < i ? 1 : -1;
                f.add_term_signed({ext(a, j), w(std::min(j, i), std::max(j, i))},
                                  Poly::constant(dim, Rational(-sji)));
            }
            table.d_coframe[static_cast<std::size_t>(ext(a, i))] = std::move(f);
        }

    Flag plane;
    plane.base.assign(static_cast<std::size_t>(dim), Rational(0));
    for (int lam = 0; lam < m; ++lam) {
        std::vector<Rational> e(static_cast<std::size_t>(dim), Rational(0));
        e[static_cast<std::size_t>(lam)] = Rational(1);
        for (int a = 0; a < kappa; ++a)
            for (int i = 0; i < n; ++i)
                e[static_cast<std::size_t>(ext(a, i))] = hr[a][i][lam];
        plane.vectors.push_back(std::move(e));
    }

    std::vector<std::string> names;
    for (int lam = 0; lam < m; ++lam) names.push_back("eta" + std::to_string(lam + 1));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            names.push_back("w" + std::to_string(i + 1) + "_" + std::to_string(j + 1));
    for (int a = 0; a < kappa; ++a)
        for (int i = 0; i < n; ++i)
            names.push_back("w" + std::to_string(n + a + 1) + "_" + std::to_string(i + 1));

    return EmbeddingIdeal{ExteriorSystem(dim, std::move(gens), std::move(table)),
                          std::move(plane), std::move(names)};
}

} // namespace wedge
