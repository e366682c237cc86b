#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "wedge/connection.hpp"
#include "wedge/error.hpp"
#include "wedge/form.hpp"
#include "wedge/gauss_map.hpp"
#include "wedge/poly.hpp"
#include "wedge/rational.hpp"

namespace wedge {

// Contravariant 2-tensor in the frame dual to a coframe; symmetry is not
// assumed.
struct EnergyMomentum {
    std::vector<std::vector<Poly>> t;
};

// Tangent-frame-valued (m-1)-form tau^i = T^{ij} (frame_j interior eta-volume).
struct TauForm {
    std::vector<Form> tau;
};

namespace detail {

inline void validate_tensor(const EnergyMomentum& t, const CoFrame& frame) {
    const int m = frame.dim();
    if (static_cast<int>(t.t.size()) != m)
        throw Error("tensor size must match the coframe dimension");
    for (const auto& row : t.t) {
        if (static_cast<int>(row.size()) != m)
            throw Error("tensor size must match the coframe dimension");
        for (const auto& p : row)
            if (p.nvars() != m) throw Error("tensor entries must live on the coframe chart");
    }
}

[[nodiscard]] inline Form form_times_poly(const Form& f, const Poly& p) {
    Form out(f.dim(), f.degree());
    for (const auto& [k, c] : f.terms()) out.add_term(k, c * p);
    return out;
}

// Wedge of all coframe entries except the j-th, in ascending order.
[[nodiscard]] inline Form coframe_volume_omitting(const CoFrame& frame, int j) {
    const int m = frame.dim();
    Form acc(m, 0);
    acc.add_term({}, Poly::constant(m, Rational(1)));
    for (int k = 0; k < m; ++k) {
        if (k == j) continue;
        acc = wedge(acc, frame.eta[static_cast<std::size_t>(k)]);
    }
    return acc;
}

} // namespace detail

// tau^i = sum_j T^{ij} (xi_j interior eta^1 /\ ... /\ eta^m)
//       = sum_j (-1)^j T^{ij} eta^{all but j}   (0-based j).
[[nodiscard]] inline TauForm tensor_to_form(const EnergyMomentum& t, const CoFrame& frame) {
    detail::validate_tensor(t, frame);
    const int m = frame.dim();
    TauForm out;
    for (int i = 0; i < m; ++i) {
        Form acc(m, m - 1);
        for (int j = 0; j < m; ++j) {
            const Poly& coef = t.t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            if (coef.is_zero()) continue;
            Form part = detail::form_times_poly(detail::coframe_volume_omitting(frame, j), coef);
            if (j % 2 == 1) part = -part;
            acc += part;
        }
        out.tau.push_back(std::move(acc));
    }
    return out;
}

// Frame derivative and connection terms of the divergence formula,
// symbolically: div^i = xi_j(T^{ij}) + T^{ij} gamma^k_{kj} + T^{jk} gamma^i_{kj}.
// Throws when a frame derivative or connection coefficient leaves the
// polynomial ring.
[[nodiscard]] inline std::vector<Poly> covariant_divergence(const EnergyMomentum& t,
                                                            const CoFrame& frame,
                                                            const ConnectionForm& omega) {
    detail::validate_tensor(t, frame);
    const int m = frame.dim();
    const Christoffel ch = christoffel(frame, omega);
    const auto a = detail::coframe_matrix(frame);
    const Poly det = detail::poly_det(a);
    const auto adj = detail::poly_adjugate(a);
    const auto frame_derivative = [&](const Poly& f, int j) {
        Poly num(m);
        for (int mu = 0; mu < m; ++mu) num = num + adj[mu][j] * f.partial(mu);
        auto q = num.divide_exact(det);
        if (!q)
            throw Error("frame derivative leaves the polynomial ring; "
                        "evaluate it pointwise instead");
        return *q;
    };

    std::vector<Poly> div(static_cast<std::size_t>(m), Poly(m));
    for (int i = 0; i < m; ++i) {
        Poly acc(m);
        for (int j = 0; j < m; ++j) {
            acc = acc + frame_derivative(t.t[i][j], j);
            for (int k = 0; k < m; ++k) {
                acc = acc + t.t[i][j] * ch.gamma[k][k][j];
                acc = acc + t.t[j][k] * ch.gamma[i][k][j];
            }
        }
        div[static_cast<std::size_t>(i)] = std::move(acc);
    }
    return div;
}

// Same formula evaluated exactly at one chart point.
[[nodiscard]] inline std::vector<Rational>
covariant_divergence_at(const EnergyMomentum& t, const CoFrame& frame,
                        const ConnectionForm& omega, const std::vector<Rational>& pt) {
    detail::validate_tensor(t, frame);
    const int m = frame.dim();
    if (static_cast<int>(pt.size()) != m) throw Error("point dimension mismatch");
    const auto a = detail::coframe_matrix(frame);
    QMatrix a_at(static_cast<std::size_t>(m), std::vector<Rational>(static_cast<std::size_t>(m)));
    for (int i = 0; i < m; ++i)
        for (int mu = 0; mu < m; ++mu) a_at[i][mu] = a[i][mu].eval(pt);
    const auto b = detail::qmat_inverse(a_at);
    if (!b) throw Error("degenerate coframe at the requested point");
    const auto gamma = christoffel_at(frame, omega, pt);

    std::vector<Rational> div(static_cast<std::size_t>(m), Rational(0));
    for (int i = 0; i < m; ++i) {
        Rational acc(0);
        for (int j = 0; j < m; ++j) {
            for (int mu = 0; mu < m; ++mu)
                acc += (*b)[mu][j] * t.t[i][j].partial(mu).eval(pt);
            for (int k = 0; k < m; ++k) {
                acc += t.t[i][j].eval(pt) * gamma[k][k][j];
                acc += t.t[j][k].eval(pt) * gamma[i][k][j];
            }
        }
        div[static_cast<std::size_t>(i)] = acc;
    }
    return div;
}

// Dual-route comparison of the conservation identity: the coframe-volume
// coefficient of each component of the covariant exterior derivative of tau
// against the covariant divergence.
struct EquivalenceReport {
    bool symbolic = false; // both routes stayed polynomial
    bool matches = false;
    double max_error = 0.0;
    std::vector<Poly> divergence;          // symbolic route
    std::vector<Poly> volume_coefficient;  // symbolic route
    std::vector<std::vector<Rational>> lhs_samples; // pointwise route, per point
    std::vector<std::vector<Rational>> rhs_samples;
};

[[nodiscard]] inline EquivalenceReport
verify_equivalence(const EnergyMomentum& t, const CoFrame& frame, const ConnectionForm& omega,
                   const std::vector<std::vector<Rational>>& sample_points = {},
                   double point_tol = 1e-12) {
    detail::validate_tensor(t, frame);
    const int m = frame.dim();
    const TauForm tau = tensor_to_form(t, frame);
    const VValuedForm dn = covariant_exterior_derivative(omega, VValuedForm(tau.tau));
    MultiIndex top;
    for (int k = 0; k < m; ++k) top.push_back(k);
    std::vector<Poly> chart_coef;
    for (int i = 0; i < m; ++i) chart_coef.push_back(dn.phi[static_cast<std::size_t>(i)].coefficient(top));
    const Poly det = detail::poly_det(detail::coframe_matrix(frame));

    EquivalenceReport rep;
    try {
        rep.divergence = covariant_divergence(t, frame, omega);
        for (int i = 0; i < m; ++i) {
            auto q = chart_coef[static_cast<std::size_t>(i)].divide_exact(det);
            if (!q)
                throw Error("frame derivative leaves the polynomial ring; "
                            "evaluate it pointwise instead");
            rep.volume_coefficient.push_back(*q);
        }
        rep.symbolic = true;
        rep.matches = true;
        for (int i = 0; i < m; ++i)
            if (!(rep.volume_coefficient[static_cast<std::size_t>(i)] ==
                  rep.divergence[static_cast<std::size_t>(i)]))
                rep.matches = false;
        return rep;
    } catch (const Error&) {
        rep.divergence.clear();
        rep.volume_coefficient.clear();
    }

    if (sample_points.empty())
        throw Error("sample points are required when the divergence leaves the polynomial ring");
    rep.symbolic = false;
    rep.matches = true;
    for (const auto& pt : sample_points) {
        const std::vector<Rational> rhs = covariant_divergence_at(t, frame, omega, pt);
        const Rational det_at = det.eval(pt);
        if (det_at.is_zero()) throw Error("degenerate coframe at the requested point");
        std::vector<Rational> lhs;
        for (int i = 0; i < m; ++i)
            lhs.push_back(chart_coef[static_cast<std::size_t>(i)].eval(pt) / det_at);
        for (int i = 0; i < m; ++i) {
            const double err =
                std::abs((lhs[static_cast<std::size_t>(i)] - rhs[static_cast<std::size_t>(i)])
                             .to_double());
            rep.max_error = std::max(rep.max_error, err);
        }
        rep.lhs_samples.push_back(std::move(lhs));
        rep.rhs_samples.push_back(rhs);
    }
    rep.matches = rep.max_error <= point_tol;
    return rep;
}

// Target dimension of the conservation-law embedding for an m-chart tangent
// bundle: m + (m-1)^2.
[[nodiscard]] inline int conservation_codomain_dim(int m) {
    if (m < 2) throw Error("chart dimension must be at least 2");
    return m + (m - 1) * (m - 1);
}

} // namespace wedge
