#include <catch2/catch_amalgamated.hpp>

#include "wedge/connection.hpp"
#include "wedge/rng.hpp"

using namespace wedge;

namespace {

Form d1(int dim, int i) {
    Form f(dim, 1);
    f.add_term({i}, Poly::constant(dim, Rational(1)));
    return f;
}

Poly random_poly(Rng& rng, int nvars, int max_deg, int terms) {
    Poly p(nvars);
    for (int t = 0; t < terms; ++t) {
        Mono mono(nvars, 0);
        int deg = static_cast<int>(rng.uniform(0, max_deg + 1));
        for (int d = 0; d < deg; ++d) mono[static_cast<std::size_t>(rng.uniform(0, nvars))] += 1;
        p.add_term(mono, Rational(static_cast<long>(rng.uniform(-4, 5))));
    }
    return p;
}

Form random_one_form(Rng& rng, int dim) {
    Form f(dim, 1);
    for (int mu = 0; mu < dim; ++mu) f.add_term_signed({mu}, random_poly(rng, dim, 2, 2));
    return f;
}

ConnectionForm random_connection(Rng& rng, int n, int dim) {
    std::vector<std::vector<Form>> m(n, std::vector<Form>(n, Form(dim, 1)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m[i][j] = random_one_form(rng, dim);
    return ConnectionForm(std::move(m));
}

ConnectionForm random_skew_connection(Rng& rng, int n, int dim) {
    std::vector<std::vector<Form>> m(n, std::vector<Form>(n, Form(dim, 1)));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            m[i][j] = random_one_form(rng, dim);
            m[j][i] = -m[i][j];
        }
    return ConnectionForm(std::move(m));
}

// Independent coefficient-level oracles, bypassing exterior_d and wedge.
Form d_oracle(const Form& w) {
    const int m = w.dim();
    Form out(m, 2);
    for (int mu = 0; mu < m; ++mu)
        for (int nu = mu + 1; nu < m; ++nu)
            out.add_term_signed({mu, nu}, w.coefficient({nu}).partial(mu) -
                                              w.coefficient({mu}).partial(nu));
    return out;
}

Form wedge11_oracle(const Form& a, const Form& b) {
    const int m = a.dim();
    Form out(m, 2);
    for (int mu = 0; mu < m; ++mu)
        for (int nu = mu + 1; nu < m; ++nu)
            out.add_term_signed({mu, nu}, a.coefficient({mu}) * b.coefficient({nu}) -
                                              a.coefficient({nu}) * b.coefficient({mu}));
    return out;
}

// Exact solve of a consistent overdetermined system via RREF of [A | b].
std::vector<Rational> solve_consistent(QMatrix a, const std::vector<Rational>& b) {
    const std::size_t cols = a[0].size();
    for (std::size_t r = 0; r < a.size(); ++r) a[r].push_back(b[r]);
    qmat_rref(a);
    std::vector<Rational> x(cols, Rational(0));
    for (const auto& row : a) {
        std::size_t pivot = cols + 1;
        for (std::size_t c = 0; c <= cols; ++c)
            if (!row[c].is_zero()) { pivot = c; break; }
        if (pivot == cols) throw Error("inconsistent system in oracle");
        if (pivot <= cols - 1 && pivot != cols + 1) x[pivot] = row[cols];
    }
    return x;
}

// Brute-force pointwise torsion-free skew solve: unknowns gamma^i_{kj} for
// all i,k,j; torsion rows use structure coefficients measured by evaluating
// d(eta) on the dual frame; skew rows added explicitly.
std::vector<std::vector<ExactPointForm>> levi_civita_oracle(const CoFrame& frame,
                                                            const std::vector<Rational>& pt) {
    const int m = frame.dim();
    QMatrix a_at(m, std::vector<Rational>(m));
    for (int i = 0; i < m; ++i)
        for (int mu = 0; mu < m; ++mu) a_at[i][mu] = frame.eta[i].coefficient({mu}).eval(pt);
    auto inv = detail::qmat_inverse(a_at);
    REQUIRE(inv.has_value());
    std::vector<std::vector<Rational>> dual(m); // dual frame vectors E_a
    for (int a = 0; a < m; ++a) {
        dual[a].resize(m);
        for (int mu = 0; mu < m; ++mu) dual[a][mu] = (*inv)[mu][a];
    }

    auto unknown = [m](int i, int k, int j) { return (i * m + k) * m + j; };
    QMatrix rows;
    std::vector<Rational> rhs;
    for (int i = 0; i < m; ++i) {
        const ExactPointForm deta = eval_at<Rational>(exterior_d(frame.eta[i]), pt);
        for (int a = 0; a < m; ++a)
            for (int b = a + 1; b < m; ++b) {
                std::vector<Rational> row(static_cast<std::size_t>(m) * m * m, Rational(0));
                row[unknown(i, a, b)] += Rational(1);
                row[unknown(i, b, a)] -= Rational(1);
                rows.push_back(std::move(row));
                rhs.push_back(-apply(deta, {dual[a], dual[b]}));
            }
    }
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k) {
                std::vector<Rational> row(static_cast<std::size_t>(m) * m * m, Rational(0));
                row[unknown(i, k, j)] += Rational(1);
                row[unknown(j, k, i)] += Rational(1);
                rows.push_back(std::move(row));
                rhs.push_back(Rational(0));
            }
    const std::vector<Rational> gamma = solve_consistent(rows, rhs);

    std::vector<std::vector<ExactPointForm>> out(
        m, std::vector<ExactPointForm>(m, ExactPointForm(m, 1)));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            ExactPointForm entry(m, 1);
            for (int mu = 0; mu < m; ++mu) {
                Rational coef(0);
                for (int k = 0; k < m; ++k) coef += gamma[unknown(i, k, j)] * a_at[k][mu];
                if (!coef.is_zero()) entry.add_term({mu}, coef);
            }
            out[i][j] = std::move(entry);
        }
    return out;
}

CoFrame polar_coframe() { // (dr, r dtheta) on the chart (r, theta)
    Form e2(2, 1);
    e2.add_term({1}, Poly::variable(2, 0));
    return CoFrame({d1(2, 0), e2});
}

CoFrame coordinate_coframe(int m) {
    std::vector<Form> eta;
    for (int i = 0; i < m; ++i) eta.push_back(d1(m, i));
    return CoFrame(std::move(eta));
}

} // namespace

TEST_CASE("curvature of flat and constant connections", "[connection]") {
    REQUIRE(curvature(ConnectionForm::zero(3, 3)).Omega[1][2].is_zero());

    // Constant skew connection on a rank-2 bundle: omega /\ omega = 0 and
    // d omega = 0, so the curvature vanishes.
    std::vector<std::vector<Form>> m(2, std::vector<Form>(2, Form(2, 1)));
    m[0][1] = d1(2, 0);
    m[1][0] = -d1(2, 0);
    CurvatureForm curv = curvature(ConnectionForm(std::move(m)));
    for (const auto& row : curv.Omega)
        for (const auto& f : row) REQUIRE(f.is_zero());
}

TEST_CASE("curvature matches an independent expansion oracle", "[connection]") {
    Rng rng(101u);
    for (int trial = 0; trial < 4; ++trial) {
        ConnectionForm conn = random_connection(rng, 3, 3);
        CurvatureForm curv = curvature(conn);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                Form expect = d_oracle(conn.omega[i][j]);
                for (int k = 0; k < 3; ++k)
                    expect += wedge11_oracle(conn.omega[i][k], conn.omega[k][j]);
                REQUIRE(curv.Omega[i][j] == expect);
            }
    }
}

TEST_CASE("torsion of the polar coframe with its connection vanishes", "[connection]") {
    CoFrame frame = polar_coframe();
    std::vector<std::vector<Form>> m(2, std::vector<Form>(2, Form(2, 1)));
    m[0][1] = -d1(2, 1); // -dtheta
    m[1][0] = d1(2, 1);
    ConnectionForm conn(std::move(m));
    for (const auto& t : torsion(frame, conn)) REQUIRE(t.is_zero());
}

TEST_CASE("torsion matches the expansion oracle and validates sizes", "[connection]") {
    Rng rng(102u);
    CoFrame frame = coordinate_coframe(3);
    for (const auto& t : torsion(frame, ConnectionForm::zero(3, 3))) REQUIRE(t.is_zero());

    ConnectionForm conn = random_connection(rng, 3, 3);
    std::vector<Form> theta = torsion(frame, conn);
    for (int i = 0; i < 3; ++i) {
        Form expect = d_oracle(frame.eta[i]);
        for (int j = 0; j < 3; ++j) expect += wedge11_oracle(conn.omega[i][j], frame.eta[j]);
        REQUIRE(theta[i] == expect);
    }

    REQUIRE_THROWS_AS(torsion(frame, ConnectionForm::zero(2, 3)), Error);
}

TEST_CASE("metric compatibility is exact skewness", "[connection]") {
    Rng rng(103u);
    REQUIRE(is_metric_compatible(random_skew_connection(rng, 3, 3)));

    std::vector<std::vector<Form>> m(2, std::vector<Form>(2, Form(2, 1)));
    m[0][0] = d1(2, 0);
    REQUIRE_FALSE(is_metric_compatible(ConnectionForm(std::move(m))));
}

TEST_CASE("both structure-equation residuals vanish identically", "[connection]") {
    Rng rng(104u);
    CoFrame frame = coordinate_coframe(3);
    SECTION("zero connection") {
        BianchiResiduals res = bianchi_residuals(frame, ConnectionForm::zero(3, 3));
        for (const auto& f : res.first) REQUIRE(f.is_zero());
        for (const auto& row : res.second)
            for (const auto& f : row) REQUIRE(f.is_zero());
    }
    SECTION("random skew connections") {
        for (int trial = 0; trial < 5; ++trial) {
            BianchiResiduals res = bianchi_residuals(frame, random_skew_connection(rng, 3, 3));
            for (const auto& f : res.first) REQUIRE(f.is_zero());
            for (const auto& row : res.second)
                for (const auto& f : row) REQUIRE(f.is_zero());
        }
    }
    SECTION("random non-skew connections") {
        for (int trial = 0; trial < 5; ++trial) {
            BianchiResiduals res = bianchi_residuals(frame, random_connection(rng, 3, 3));
            for (const auto& f : res.first) REQUIRE(f.is_zero());
            for (const auto& row : res.second)
                for (const auto& f : row) REQUIRE(f.is_zero());
        }
    }
}

TEST_CASE("covariant exterior derivative generalizes torsion", "[connection]") {
    Rng rng(105u);
    CoFrame frame = coordinate_coframe(3);
    ConnectionForm conn = random_skew_connection(rng, 3, 3);

    SECTION("tangent-bundle case reduces to torsion") {
        VValuedForm phi(frame.eta);
        REQUIRE(covariant_exterior_derivative(conn, phi).phi == torsion(frame, conn));
    }

    SECTION("flat connection on a closed form differentiates to zero") {
        Form closed(3, 1);
        closed.add_term({0}, Poly::constant(3, Rational(2)));
        VValuedForm phi({closed, Form(3, 1), Form(3, 1)});
        for (const auto& f :
             covariant_exterior_derivative(ConnectionForm::zero(3, 3), phi).phi)
            REQUIRE(f.is_zero());
    }

    SECTION("oracle comparison on random 1-form sections") {
        std::vector<Form> comp;
        for (int i = 0; i < 3; ++i) comp.push_back(random_one_form(rng, 3));
        VValuedForm phi(comp);
        VValuedForm dphi = covariant_exterior_derivative(conn, phi);
        for (int i = 0; i < 3; ++i) {
            Form expect = d_oracle(phi.phi[i]);
            for (int j = 0; j < 3; ++j) expect += wedge11_oracle(conn.omega[i][j], phi.phi[j]);
            REQUIRE(dphi.phi[i] == expect);
        }
    }

    SECTION("size mismatch is rejected") {
        VValuedForm phi({d1(3, 0), d1(3, 1)});
        REQUIRE_THROWS_AS(covariant_exterior_derivative(conn, phi), Error);
    }
}

TEST_CASE("second covariant derivative is curvature action", "[connection]") {
    Rng rng(106u);
    for (int trial = 0; trial < 4; ++trial) {
        ConnectionForm conn = random_connection(rng, 2, 3);
        std::vector<Form> comp;
        for (int i = 0; i < 2; ++i) comp.push_back(random_one_form(rng, 3));
        VValuedForm phi(comp);
        VValuedForm twice =
            covariant_exterior_derivative(conn, covariant_exterior_derivative(conn, phi));
        std::vector<Form> rhs = generalized_bianchi_residual(curvature(conn), phi);
        for (int i = 0; i < 2; ++i) REQUIRE(twice.phi[i] == rhs[i]);
    }
}

TEST_CASE("generalized residual in top degree is structurally zero", "[connection]") {
    Rng rng(107u);
    // phi of degree m-1 = 2 on a 3-dimensional chart: the residual is a
    // 4-form on 3 variables.
    ConnectionForm conn = random_connection(rng, 3, 3);
    std::vector<Form> comp(3, Form(3, 2));
    for (auto& f : comp)
        for (int mu = 0; mu < 3; ++mu)
            for (int nu = mu + 1; nu < 3; ++nu)
                f.add_term_signed({mu, nu}, random_poly(rng, 3, 1, 2));
    std::vector<Form> res = generalized_bianchi_residual(curvature(conn), VValuedForm(comp));
    for (const auto& f : res) REQUIRE(f.is_zero());
}

TEST_CASE("frame-valued residual encodes the first curvature-tensor symmetry", "[connection]") {
    Rng rng(108u);
    const int m = 3;
    VValuedForm identity({d1(m, 0), d1(m, 1), d1(m, 2)});

    auto residual_of = [&](const std::vector<std::vector<std::vector<std::vector<Rational>>>>& r) {
        std::vector<std::vector<Form>> om(m, std::vector<Form>(m, Form(m, 2)));
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                for (int k = 0; k < m; ++k)
                    for (int l = k + 1; l < m; ++l)
                        om[i][j].add_term_signed({k, l}, Poly::constant(m, r[i][j][k][l]));
        return generalized_bianchi_residual(CurvatureForm(std::move(om)), identity);
    };
    auto cyclic_sum = [&](const std::vector<std::vector<std::vector<std::vector<Rational>>>>& r,
                          int i, int a, int b, int c) {
        return r[i][a][b][c] + r[i][b][c][a] + r[i][c][a][b];
    };

    SECTION("products of symmetric tensors satisfy the identity") {
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<std::vector<Rational>> h(m, std::vector<Rational>(m));
            for (int i = 0; i < m; ++i)
                for (int j = i; j < m; ++j)
                    h[i][j] = h[j][i] = Rational(static_cast<long>(rng.uniform(-3, 4)));
            std::vector<std::vector<std::vector<std::vector<Rational>>>> r(
                m, std::vector<std::vector<std::vector<Rational>>>(
                       m, std::vector<std::vector<Rational>>(m, std::vector<Rational>(m))));
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j)
                    for (int k = 0; k < m; ++k)
                        for (int l = 0; l < m; ++l)
                            r[i][j][k][l] = h[i][k] * h[j][l] - h[i][l] * h[j][k];
            for (const auto& f : residual_of(r)) REQUIRE(f.is_zero());
            REQUIRE(cyclic_sum(r, 0, 0, 1, 2).is_zero());
        }
    }

    SECTION("residual coefficients equal the cyclic sums on arbitrary tensors") {
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<std::vector<std::vector<std::vector<Rational>>>> r(
                m, std::vector<std::vector<std::vector<Rational>>>(
                       m, std::vector<std::vector<Rational>>(m, std::vector<Rational>(m))));
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j)
                    for (int k = 0; k < m; ++k)
                        for (int l = k + 1; l < m; ++l) {
                            r[i][j][k][l] = Rational(static_cast<long>(rng.uniform(-3, 4)));
                            r[i][j][l][k] = -r[i][j][k][l];
                        }
            std::vector<Form> res = residual_of(r);
            for (int i = 0; i < m; ++i)
                REQUIRE(res[i].coefficient({0, 1, 2}).constant_value() ==
                        cyclic_sum(r, i, 0, 1, 2));
        }
    }
}

TEST_CASE("orthonormal-coframe connection: coordinate and polar charts", "[connection]") {
    SECTION("coordinate coframe is flat") {
        ConnectionForm conn = levi_civita(coordinate_coframe(2));
        for (const auto& row : conn.omega)
            for (const auto& f : row) REQUIRE(f.is_zero());
    }

    SECTION("polar coframe has the classical rotation form") {
        CoFrame frame = polar_coframe();
        ConnectionForm conn = levi_civita(frame);
        REQUIRE(conn.omega[0][1] == -d1(2, 1)); // -dtheta
        REQUIRE(is_metric_compatible(conn));
        for (const auto& t : torsion(frame, conn)) REQUIRE(t.is_zero());
    }

    SECTION("uniqueness: any skew perturbation reintroduces torsion") {
        Rng rng(109u);
        CoFrame frame = polar_coframe();
        ConnectionForm conn = levi_civita(frame);
        for (int trial = 0; trial < 5; ++trial) {
            ConnectionForm delta = random_skew_connection(rng, 2, 2);
            if (delta.omega[0][1].is_zero()) continue;
            std::vector<std::vector<Form>> sum = conn.omega;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) sum[i][j] += delta.omega[i][j];
            std::vector<Form> theta = torsion(frame, ConnectionForm(std::move(sum)));
            bool nonzero = false;
            for (const auto& t : theta) nonzero = nonzero || !t.is_zero();
            REQUIRE(nonzero);
        }
    }
}

TEST_CASE("pointwise connection solve matches the brute-force oracle", "[connection]") {
    SECTION("polar chart at sampled radii") {
        CoFrame frame = polar_coframe();
        for (long r = 1; r <= 3; ++r) {
            std::vector<Rational> pt{Rational(r), Rational(1, 3)};
            REQUIRE(levi_civita_at(frame, pt) == levi_civita_oracle(frame, pt));
        }
    }

    SECTION("sheared coframe leaves the polynomial ring") {
        // eta = (dx, x dy + dz, dz): the symbolic solve must refuse, the
        // pointwise solve must agree with the oracle.
        Form e2(3, 1);
        e2.add_term_signed({1}, Poly::variable(3, 0));
        e2.add_term({2}, Poly::constant(3, Rational(1)));
        CoFrame frame({d1(3, 0), e2, d1(3, 2)});
        REQUIRE_THROWS_WITH(levi_civita(frame),
                            Catch::Matchers::ContainsSubstring("polynomial"));

        std::vector<Rational> pt{Rational(2), Rational(5), Rational(7)};
        auto conn = levi_civita_at(frame, pt);
        REQUIRE(conn == levi_civita_oracle(frame, pt));
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) REQUIRE(conn[i][j] == -conn[j][i]);
    }

    SECTION("degenerate point is rejected") {
        CoFrame frame = polar_coframe();
        REQUIRE_THROWS_WITH(levi_civita_at(frame, {Rational(0), Rational(0)}),
                            Catch::Matchers::ContainsSubstring("degenerate"));
    }
}

TEST_CASE("pullback commutes with curvature", "[connection]") {
    Rng rng(110u);
    SECTION("identity and constant maps") {
        ConnectionForm conn = random_connection(rng, 2, 2);
        std::vector<Poly> ident{Poly::variable(2, 0), Poly::variable(2, 1)};
        REQUIRE(pullback_connection(ident, conn).omega == conn.omega);
        std::vector<Poly> constant{Poly::constant(2, Rational(3)), Poly::constant(2, Rational(-1))};
        for (const auto& row : pullback_connection(constant, conn).omega)
            for (const auto& f : row) REQUIRE(f.is_zero());
    }
    SECTION("random polynomial maps") {
        for (int trial = 0; trial < 4; ++trial) {
            ConnectionForm conn = random_connection(rng, 2, 2);
            std::vector<Poly> f{random_poly(rng, 2, 2, 3), random_poly(rng, 2, 2, 3)};
            CurvatureForm lhs = curvature(pullback_connection(f, conn));
            CurvatureForm rhs_src = curvature(conn);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    REQUIRE(lhs.Omega[i][j] == pullback(f, rhs_src.Omega[i][j]));
        }
    }
}

TEST_CASE("connection coefficients in a coframe basis", "[connection]") {
    SECTION("frozen example on the coordinate coframe") {
        std::vector<std::vector<Form>> m(2, std::vector<Form>(2, Form(2, 1)));
        Form xdy(2, 1);
        xdy.add_term({1}, Poly::variable(2, 0));
        m[0][1] = xdy;
        Christoffel gamma = christoffel(coordinate_coframe(2), ConnectionForm(std::move(m)));
        REQUIRE(gamma.gamma[0][1][1] == Poly::variable(2, 0));
        REQUIRE(gamma.gamma[0][0][1].is_zero());
        REQUIRE(gamma.gamma[1][0][0].is_zero());
    }

    SECTION("round-trip reconstruction on a sheared polynomial coframe") {
        Rng rng(111u);
        Form e1(2, 1); // dx + x dy
        e1.add_term({0}, Poly::constant(2, Rational(1)));
        e1.add_term_signed({1}, Poly::variable(2, 0));
        CoFrame frame({e1, d1(2, 1)});
        ConnectionForm conn = random_connection(rng, 2, 2);
        Christoffel gamma = christoffel(frame, conn);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                Form rebuilt(2, 1);
                for (int k = 0; k < 2; ++k) {
                    Form scaled(2, 1);
                    for (int mu = 0; mu < 2; ++mu)
                        scaled.add_term_signed({mu}, gamma.gamma[i][k][j] *
                                                         frame.eta[k].coefficient({mu}));
                    rebuilt += scaled;
                }
                REQUIRE(rebuilt == conn.omega[i][j]);
            }
    }

    SECTION("polar coefficients are pointwise only") {
        CoFrame frame = polar_coframe();
        ConnectionForm conn = levi_civita(frame);
        REQUIRE_THROWS_WITH(christoffel(frame, conn),
                            Catch::Matchers::ContainsSubstring("polynomial"));
        auto gamma = christoffel_at(frame, conn, {Rational(2), Rational(0)});
        REQUIRE(gamma[0][1][1] == Rational(-1, 2));
        // Pointwise reconstruction of omega^0_1 = -dtheta.
        ExactPointForm rebuilt(2, 1);
        for (int k = 0; k < 2; ++k)
            for (int mu = 0; mu < 2; ++mu) {
                const Rational c =
                    gamma[0][k][1] *
                    frame.eta[k].coefficient({mu}).eval({Rational(2), Rational(0)});
                if (!c.is_zero()) rebuilt.add_term_signed({mu}, c);
            }
        ExactPointForm expect(2, 1);
        expect.add_term({1}, Rational(-1));
        REQUIRE(rebuilt == expect);
    }
}
