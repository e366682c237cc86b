#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "wedge/form.hpp"
#include "wedge/linalg.hpp"

namespace wedge {

// Moving coframe: a square tuple of pointwise-independent 1-forms on a chart.
struct CoFrame {
    std::vector<Form> eta;

    explicit CoFrame(std::vector<Form> forms) : eta(std::move(forms)) {
        if (eta.empty()) throw Error("coframe must be non-empty");
        const int d = eta[0].dim();
        if (static_cast<int>(eta.size()) != d)
            throw Error("coframe must have exactly chart-dimension many 1-forms");
        Form vol(d, 0);
        vol.add_term({}, Poly::constant(d, Rational(1)));
        for (const auto& f : eta) {
            if (f.dim() != d || f.degree() != 1)
                throw Error("coframe entries must be 1-forms on a common chart");
            vol = wedge(vol, f);
        }
        if (vol.is_zero()) throw Error("coframe is degenerate on the whole chart");
    }

    [[nodiscard]] int dim() const { return static_cast<int>(eta.size()); }
};

// Connection 1-form: n x n matrix of 1-forms in a fixed frame.
struct ConnectionForm {
    std::vector<std::vector<Form>> omega;

    explicit ConnectionForm(std::vector<std::vector<Form>> m) : omega(std::move(m)) {
        if (omega.empty()) throw Error("connection matrix must be non-empty");
        for (const auto& row : omega) {
            if (row.size() != omega.size()) throw Error("connection matrix must be square");
            for (const auto& f : row)
                if (f.dim() != omega[0][0].dim() || f.degree() != 1)
                    throw Error("connection entries must be 1-forms on a common chart");
        }
    }

    static ConnectionForm zero(int n, int chart_dim) {
        std::vector<std::vector<Form>> m(n, std::vector<Form>(n, Form(chart_dim, 1)));
        return ConnectionForm(std::move(m));
    }

    [[nodiscard]] int size() const { return static_cast<int>(omega.size()); }
    [[nodiscard]] int chart_dim() const { return omega[0][0].dim(); }
};

// Curvature 2-form: n x n matrix of 2-forms.
struct CurvatureForm {
    std::vector<std::vector<Form>> Omega;

    explicit CurvatureForm(std::vector<std::vector<Form>> m) : Omega(std::move(m)) {
        if (Omega.empty()) throw Error("curvature matrix must be non-empty");
        for (const auto& row : Omega) {
            if (row.size() != Omega.size()) throw Error("curvature matrix must be square");
            for (const auto& f : row)
                if (f.dim() != Omega[0][0].dim() || f.degree() != 2)
                    throw Error("curvature entries must be 2-forms on a common chart");
        }
    }

    [[nodiscard]] int size() const { return static_cast<int>(Omega.size()); }
};

// Vector-bundle-valued p-form: an n-tuple of p-forms in a fixed frame.
struct VValuedForm {
    std::vector<Form> phi;

    explicit VValuedForm(std::vector<Form> components) : phi(std::move(components)) {
        if (phi.empty()) throw Error("bundle-valued form must have components");
        for (const auto& f : phi)
            if (f.dim() != phi[0].dim() || f.degree() != phi[0].degree())
                throw Error("bundle-valued form components must share chart and degree");
    }

    [[nodiscard]] int size() const { return static_cast<int>(phi.size()); }
    [[nodiscard]] int degree() const { return phi[0].degree(); }
};

// Connection coefficients gamma[i][k][j] with omega^i_j = sum_k gamma[i][k][j] eta^k.
struct Christoffel {
    std::vector<std::vector<std::vector<Poly>>> gamma;
};

namespace detail {

[[nodiscard]] inline Poly poly_det(const std::vector<std::vector<Poly>>& a) {
    const int n = static_cast<int>(a.size());
    if (n == 1) return a[0][0];
    Poly out(a[0][0].nvars());
    std::vector<std::vector<Poly>> minor(n - 1, std::vector<Poly>(n - 1, Poly(a[0][0].nvars())));
    for (int c = 0; c < n; ++c) {
        for (int r = 1; r < n; ++r)
            for (int cc = 0, t = 0; cc < n; ++cc)
                if (cc != c) minor[r - 1][t++] = a[r][cc];
        Poly term = a[0][c] * poly_det(minor);
        out = c % 2 == 0 ? out + term : out - term;
    }
    return out;
}

// adj with sum_mu a[i][mu] * adj[mu][j] = det * delta_ij.
[[nodiscard]] inline std::vector<std::vector<Poly>>
poly_adjugate(const std::vector<std::vector<Poly>>& a) {
    const int n = static_cast<int>(a.size());
    const int nv = a[0][0].nvars();
    std::vector<std::vector<Poly>> adj(n, std::vector<Poly>(n, Poly(nv)));
    if (n == 1) {
        adj[0][0] = Poly::constant(nv, Rational(1));
        return adj;
    }
    std::vector<std::vector<Poly>> minor(n - 1, std::vector<Poly>(n - 1, Poly(nv)));
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            for (int rr = 0, i = 0; rr < n; ++rr) {
                if (rr == r) continue;
                for (int cc = 0, j = 0; cc < n; ++cc)
                    if (cc != c) minor[i][j++] = a[rr][cc];
                ++i;
            }
            Poly cof = poly_det(minor);
            adj[c][r] = (r + c) % 2 == 0 ? cof : Rational(-1) * cof;
        }
    }
    return adj;
}

// Chart-basis coefficient matrix a[i][mu] of a coframe.
[[nodiscard]] inline std::vector<std::vector<Poly>> coframe_matrix(const CoFrame& frame) {
    const int m = frame.dim();
    std::vector<std::vector<Poly>> a(m, std::vector<Poly>(m, Poly(m)));
    for (int i = 0; i < m; ++i)
        for (int mu = 0; mu < m; ++mu) a[i][mu] = frame.eta[i].coefficient({mu});
    return a;
}

// Exact inverse at a point; nullopt when the coframe degenerates there.
[[nodiscard]] inline std::optional<QMatrix> qmat_inverse(const QMatrix& a) {
    const int n = static_cast<int>(a.size());
    QMatrix inv(n, std::vector<Rational>(n, Rational(0)));
    for (int j = 0; j < n; ++j) {
        std::vector<Rational> e(n, Rational(0));
        e[j] = Rational(1);
        auto col = qmat_solve(a, e);
        if (!col) return std::nullopt;
        for (int i = 0; i < n; ++i) inv[i][j] = (*col)[i];
    }
    return inv;
}

// Structure coefficients of the torsion-free skew connection in the eta
// basis, from antisymmetric coefficients c[i][j][k] of d eta^i =
// sum_{j<k} c^i_{jk} eta^j /\ eta^k:
//   gamma^i_{kj} = (c^i_{jk} + c^j_{ki} - c^k_{ij}) / 2.
template <class T>
[[nodiscard]] std::vector<std::vector<std::vector<T>>>
cyclic_solve(const std::vector<std::vector<std::vector<T>>>& c, const T& half) {
    const int m = static_cast<int>(c.size());
    std::vector<std::vector<std::vector<T>>> gamma(
        m, std::vector<std::vector<T>>(m, std::vector<T>(m, c[0][0][0] - c[0][0][0])));
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < m; ++k)
            for (int j = 0; j < m; ++j)
                gamma[i][k][j] = (c[i][j][k] + c[j][k][i] - c[k][i][j]) * half;
    return gamma;
}

} // namespace detail

// Omega = d omega + omega /\ omega.
[[nodiscard]] inline CurvatureForm curvature(const ConnectionForm& conn) {
    const int n = conn.size();
    std::vector<std::vector<Form>> out(n, std::vector<Form>(n, Form(conn.chart_dim(), 2)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Form acc = exterior_d(conn.omega[i][j]);
            for (int k = 0; k < n; ++k) acc += wedge(conn.omega[i][k], conn.omega[k][j]);
            out[i][j] = std::move(acc);
        }
    return CurvatureForm(std::move(out));
}

// Theta^i = d eta^i + sum_j omega^i_j /\ eta^j.
[[nodiscard]] inline std::vector<Form> torsion(const CoFrame& frame, const ConnectionForm& conn) {
    if (conn.size() != frame.dim() || conn.chart_dim() != frame.dim())
        throw Error("torsion requires a square tangent-bundle connection");
    std::vector<Form> out;
    out.reserve(frame.eta.size());
    for (int i = 0; i < frame.dim(); ++i) {
        Form acc = exterior_d(frame.eta[i]);
        for (int j = 0; j < frame.dim(); ++j) acc += wedge(conn.omega[i][j], frame.eta[j]);
        out.push_back(std::move(acc));
    }
    return out;
}

[[nodiscard]] inline bool is_metric_compatible(const ConnectionForm& conn) {
    for (int i = 0; i < conn.size(); ++i)
        for (int j = i; j < conn.size(); ++j)
            if (!(conn.omega[i][j] + conn.omega[j][i]).is_zero()) return false;
    return true;
}

struct BianchiResiduals {
    std::vector<Form> first;              // d Theta^i + omega^i_j /\ Theta^j - Omega^i_j /\ eta^j
    std::vector<std::vector<Form>> second; // d Omega^i_j - Omega^i_k /\ omega^k_j + omega^i_k /\ Omega^k_j
};

// Both residuals are identities (consequences of d^2 = 0) and must vanish
// exactly for every connection; the second one needs no skewness.
[[nodiscard]] inline BianchiResiduals bianchi_residuals(const CoFrame& frame,
                                                        const ConnectionForm& conn) {
    const int n = conn.size();
    const CurvatureForm curv = curvature(conn);
    const std::vector<Form> theta = torsion(frame, conn);
    BianchiResiduals out;
    out.first.reserve(n);
    for (int i = 0; i < n; ++i) {
        Form acc = exterior_d(theta[i]);
        for (int j = 0; j < n; ++j) {
            acc += wedge(conn.omega[i][j], theta[j]);
            acc -= wedge(curv.Omega[i][j], frame.eta[j]);
        }
        out.first.push_back(std::move(acc));
    }
    out.second.assign(n, std::vector<Form>(n, Form(conn.chart_dim(), 3)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Form acc = exterior_d(curv.Omega[i][j]);
            for (int k = 0; k < n; ++k) {
                acc -= wedge(curv.Omega[i][k], conn.omega[k][j]);
                acc += wedge(conn.omega[i][k], curv.Omega[k][j]);
            }
            out.second[i][j] = std::move(acc);
        }
    return out;
}

// (d_nabla phi)^i = d phi^i + sum_j omega^i_j /\ phi^j.
[[nodiscard]] inline VValuedForm covariant_exterior_derivative(const ConnectionForm& conn,
                                                               const VValuedForm& phi) {
    if (conn.size() != phi.size() || conn.chart_dim() != phi.phi[0].dim())
        throw Error("connection and bundle-valued form sizes do not match");
    std::vector<Form> out;
    out.reserve(phi.phi.size());
    for (int i = 0; i < phi.size(); ++i) {
        Form acc = exterior_d(phi.phi[i]);
        for (int j = 0; j < phi.size(); ++j) acc += wedge(conn.omega[i][j], phi.phi[j]);
        out.push_back(std::move(acc));
    }
    return VValuedForm(std::move(out));
}

// Residual of the generalized Bianchi identities: component i is
// sum_j Omega^i_j /\ phi^j.
[[nodiscard]] inline std::vector<Form> generalized_bianchi_residual(const CurvatureForm& curv,
                                                                    const VValuedForm& phi) {
    if (curv.size() != phi.size() || curv.Omega[0][0].dim() != phi.phi[0].dim())
        throw Error("curvature and bundle-valued form sizes do not match");
    std::vector<Form> out;
    out.reserve(phi.phi.size());
    for (int i = 0; i < phi.size(); ++i) {
        Form acc(phi.phi[0].dim(), phi.degree() + 2);
        for (int j = 0; j < phi.size(); ++j) acc += wedge(curv.Omega[i][j], phi.phi[j]);
        out.push_back(std::move(acc));
    }
    return out;
}

// Antisymmetric structure coefficients c^i_{jk} of a coframe, cleared of
// denominators: c_hat = det^2 * c stays polynomial.
namespace detail {

struct StructureCoefficients {
    std::vector<std::vector<std::vector<Poly>>> c_hat; // det^2 * c^i_{jk}
    std::vector<std::vector<Poly>> a;                  // eta^i = a[i][mu] dx^mu
    std::vector<std::vector<Poly>> adj;
    Poly det;
};

[[nodiscard]] inline StructureCoefficients structure_coefficients(const CoFrame& frame) {
    const int m = frame.dim();
    StructureCoefficients s;
    s.a = coframe_matrix(frame);
    s.det = poly_det(s.a);
    if (s.det.is_zero()) throw Error("coframe is degenerate on the whole chart");
    s.adj = poly_adjugate(s.a);
    s.c_hat.assign(m, std::vector<std::vector<Poly>>(m, std::vector<Poly>(m, Poly(m))));
    for (int i = 0; i < m; ++i) {
        // d eta^i = sum_{mu<nu} w^i_{mu nu} dx^mu /\ dx^nu.
        for (int j = 0; j < m; ++j)
            for (int k = j + 1; k < m; ++k) {
                Poly acc(m);
                for (int mu = 0; mu < m; ++mu)
                    for (int nu = mu + 1; nu < m; ++nu) {
                        Poly w = s.a[i][nu].partial(mu) - s.a[i][mu].partial(nu);
                        if (w.is_zero()) continue;
                        acc = acc + w * (s.adj[mu][j] * s.adj[nu][k] - s.adj[mu][k] * s.adj[nu][j]);
                    }
                s.c_hat[i][j][k] = acc;
                s.c_hat[i][k][j] = Rational(-1) * acc;
            }
    }
    return s;
}

} // namespace detail

// Unique torsion-free skew connection of an orthonormal coframe, symbolically.
// Throws when an entry leaves the polynomial ring; use levi_civita_at then.
[[nodiscard]] inline ConnectionForm levi_civita(const CoFrame& frame) {
    const int m = frame.dim();
    const auto s = detail::structure_coefficients(frame);
    const Poly det2 = s.det * s.det;
    const auto gamma_hat =
        detail::cyclic_solve(s.c_hat, Poly::constant(m, Rational(1, 2))); // det^2 * gamma
    std::vector<std::vector<Form>> out(m, std::vector<Form>(m, Form(m, 1)));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            Form entry(m, 1);
            for (int mu = 0; mu < m; ++mu) {
                Poly num(m);
                for (int k = 0; k < m; ++k) num = num + gamma_hat[i][k][j] * s.a[k][mu];
                if (num.is_zero()) continue;
                auto coef = num.divide_exact(det2);
                if (!coef)
                    throw Error("Levi-Civita connection leaves the polynomial ring; "
                                "evaluate it pointwise instead");
                entry.add_term_signed({mu}, *coef);
            }
            out[i][j] = std::move(entry);
        }
    return ConnectionForm(std::move(out));
}

// Pointwise Levi-Civita solve: exact covector matrix at one chart point.
[[nodiscard]] inline std::vector<std::vector<ExactPointForm>>
levi_civita_at(const CoFrame& frame, const std::vector<Rational>& pt) {
    const int m = frame.dim();
    if (static_cast<int>(pt.size()) != m) throw Error("point dimension mismatch");
    const auto a = detail::coframe_matrix(frame);
    QMatrix a_at(m, std::vector<Rational>(m));
    for (int i = 0; i < m; ++i)
        for (int mu = 0; mu < m; ++mu) a_at[i][mu] = a[i][mu].eval(pt);
    const auto b = detail::qmat_inverse(a_at);
    if (!b) throw Error("degenerate coframe at the requested point");

    std::vector<std::vector<std::vector<Rational>>> c(
        m, std::vector<std::vector<Rational>>(m, std::vector<Rational>(m, Rational(0))));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = j + 1; k < m; ++k) {
                Rational acc(0);
                for (int mu = 0; mu < m; ++mu)
                    for (int nu = mu + 1; nu < m; ++nu) {
                        const Rational w =
                            (a[i][nu].partial(mu) - a[i][mu].partial(nu)).eval(pt);
                        if (w.is_zero()) continue;
                        acc += w * ((*b)[mu][j] * (*b)[nu][k] - (*b)[mu][k] * (*b)[nu][j]);
                    }
                c[i][j][k] = acc;
                c[i][k][j] = -acc;
            }
    const auto gamma = detail::cyclic_solve(c, Rational(1, 2));

    std::vector<std::vector<ExactPointForm>> out(
        m, std::vector<ExactPointForm>(m, ExactPointForm(m, 1)));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            ExactPointForm entry(m, 1);
            for (int mu = 0; mu < m; ++mu) {
                Rational coef(0);
                for (int k = 0; k < m; ++k) coef += gamma[i][k][j] * a_at[k][mu];
                if (!coef.is_zero()) entry.add_term({mu}, coef);
            }
            out[i][j] = std::move(entry);
        }
    return out;
}

// Entrywise pullback; commutes with curvature.
[[nodiscard]] inline ConnectionForm pullback_connection(const std::vector<Poly>& f,
                                                        const ConnectionForm& conn) {
    const int n = conn.size();
    std::vector<std::vector<Form>> out(n);
    for (int i = 0; i < n; ++i) {
        out[i].reserve(n);
        for (int j = 0; j < n; ++j) out[i].push_back(pullback(f, conn.omega[i][j]));
    }
    return ConnectionForm(std::move(out));
}

// Coefficients of omega in the eta basis, symbolically; gamma[i][k][j] with
// omega^i_j = sum_k gamma[i][k][j] eta^k. Throws when non-polynomial.
[[nodiscard]] inline Christoffel christoffel(const CoFrame& frame, const ConnectionForm& conn) {
    const int m = frame.dim();
    if (conn.size() != m || conn.chart_dim() != m)
        throw Error("connection coefficients need a square tangent-bundle connection");
    const auto a = detail::coframe_matrix(frame);
    const Poly det = detail::poly_det(a);
    if (det.is_zero()) throw Error("coframe is degenerate on the whole chart");
    const auto adj = detail::poly_adjugate(a);

    Christoffel out;
    out.gamma.assign(m, std::vector<std::vector<Poly>>(m, std::vector<Poly>(m, Poly(m))));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k) {
                Poly num(m);
                for (int mu = 0; mu < m; ++mu)
                    num = num + conn.omega[i][j].coefficient({mu}) * adj[mu][k];
                if (num.is_zero()) continue;
                auto coef = num.divide_exact(det);
                if (!coef)
                    throw Error("connection coefficients leave the polynomial ring; "
                                "evaluate them pointwise instead");
                out.gamma[i][k][j] = *coef;
            }
    return out;
}

// Pointwise connection coefficients gamma[i][k][j] at one chart point.
[[nodiscard]] inline std::vector<std::vector<std::vector<Rational>>>
christoffel_at(const CoFrame& frame, const ConnectionForm& conn, const std::vector<Rational>& pt) {
    const int m = frame.dim();
    if (conn.size() != m || conn.chart_dim() != m)
        throw Error("connection coefficients need a square tangent-bundle connection");
    if (static_cast<int>(pt.size()) != m) throw Error("point dimension mismatch");
    const auto a = detail::coframe_matrix(frame);
    QMatrix a_at(m, std::vector<Rational>(m));
    for (int i = 0; i < m; ++i)
        for (int mu = 0; mu < m; ++mu) a_at[i][mu] = a[i][mu].eval(pt);
    const auto b = detail::qmat_inverse(a_at);
    if (!b) throw Error("degenerate coframe at the requested point");

    std::vector<std::vector<std::vector<Rational>>> gamma(
        m, std::vector<std::vector<Rational>>(m, std::vector<Rational>(m, Rational(0))));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k) {
                Rational acc(0);
                for (int mu = 0; mu < m; ++mu)
                    acc += conn.omega[i][j].coefficient({mu}).eval(pt) * (*b)[mu][k];
                gamma[i][k][j] = acc;
            }
    return gamma;
}

} // namespace wedge
