#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <vector>

#include "wedge/config.hpp"
#include "wedge/error.hpp"
#include "wedge/form.hpp"
#include "wedge/linalg.hpp"

namespace wedge {

// Problem shape for the degree p = m-1 pipeline: base dimension m, bundle
// rank n, codimension kappa.
struct ProblemDims {
    int m = 2;
    int n = 2;
    int kappa = 1;
};

// Codimension bound below which the surjectivity statement is not claimed.
[[nodiscard]] inline int kappa_min(int m, int n) {
    if (m < 2 || n < 1) throw Error("kappa_min requires m >= 2 and n >= 1");
    return (m - 1) * (n - 1);
}

// dim of the curvature-tensor space: n(n-1)/2 * m(m-1)/2.
[[nodiscard]] inline int curvature_space_dim(int m, int n) {
    return n * (n - 1) * m * (m - 1) / 4;
}

// Shape checks shared by the solver-facing entry points.
inline void validate_dims(const ProblemDims& d) {
    if (d.m < 2) throw Error("base dimension must be at least 2");
    if (d.n < 2) throw Error("bundle rank must be at least 2 (line bundles are trivial)");
    if (d.kappa < 1) throw Error("codimension must be positive");
}

namespace detail {

// Index of the ordered pair (i, j), i < j < n, in lexicographic order.
[[nodiscard]] inline int pair_index(int i, int j, int n) {
    return i * n - i * (i + 1) / 2 + (j - i - 1);
}

} // namespace detail

// Coefficient table H^a_{i lambda}, kappa x n x m; the vectors H_{i lambda}
// live in the kappa-dimensional normal space.
struct SecondFF {
    int kappa = 0, n = 0, m = 0;
    std::vector<double> h;

    SecondFF() = default;
    SecondFF(int kappa_, int n_, int m_)
        : kappa(kappa_), n(n_), m(m_),
          h(static_cast<std::size_t>(kappa_) * n_ * m_, 0.0) {}

    [[nodiscard]] double& at(int a, int i, int lam) {
        return h[(static_cast<std::size_t>(a) * n + i) * m + lam];
    }
    [[nodiscard]] double at(int a, int i, int lam) const {
        return h[(static_cast<std::size_t>(a) * n + i) * m + lam];
    }
};

// Curvature tensor R^i_{j;lambda mu}, skew in (i,j) and (lambda,mu); stores
// the i<j, lambda<mu representatives in a flat vector, row order
// (pair(i,j), pair(lambda,mu)).
struct CurvatureTensor {
    int n = 0, m = 0;
    std::vector<double> r;

    CurvatureTensor() = default;
    CurvatureTensor(int n_, int m_)
        : n(n_), m(m_), r(static_cast<std::size_t>(curvature_space_dim(m_, n_)), 0.0) {}

    [[nodiscard]] std::size_t flat_index(int i, int j, int lam, int mu) const {
        return static_cast<std::size_t>(detail::pair_index(i, j, n)) * (m * (m - 1) / 2) +
               detail::pair_index(lam, mu, m);
    }
    void set(int i, int j, int lam, int mu, double v) {
        double sign = 1.0;
        if (i > j) { std::swap(i, j); sign = -sign; }
        if (lam > mu) { std::swap(lam, mu); sign = -sign; }
        if (i == j || lam == mu) throw Error("diagonal curvature entries are identically zero");
        r[flat_index(i, j, lam, mu)] = sign * v;
    }
    [[nodiscard]] double value(int i, int j, int lam, int mu) const {
        if (i == j || lam == mu) return 0.0;
        double sign = 1.0;
        if (i > j) { std::swap(i, j); sign = -sign; }
        if (lam > mu) { std::swap(lam, mu); sign = -sign; }
        return sign * r[flat_index(i, j, lam, mu)];
    }
};

// psi[i][lambda] is the coefficient of the (m-1)-coframe monomial omitting
// lambda in the i-th component of the bundle-valued form.
struct PhiCoefficients {
    int n = 0, m = 0;
    std::vector<double> psi;

    PhiCoefficients() = default;
    PhiCoefficients(int n_, int m_) : n(n_), m(m_), psi(static_cast<std::size_t>(n_) * m_, 0.0) {}

    [[nodiscard]] double& at(int i, int lam) {
        return psi[static_cast<std::size_t>(i) * m + lam];
    }
    [[nodiscard]] double at(int i, int lam) const {
        return psi[static_cast<std::size_t>(i) * m + lam];
    }
    [[nodiscard]] bool is_zero() const {
        for (double v : psi)
            if (v != 0.0) return false;
        return true;
    }
};

// G(H)^i_{j;lambda mu} = sum_a (H^a_{i lambda} H^a_{j mu} - H^a_{i mu} H^a_{j lambda}).
[[nodiscard]] inline CurvatureTensor gauss_map(const SecondFF& h) {
    CurvatureTensor out(h.n, h.m);
    for (int i = 0; i < h.n; ++i)
        for (int j = i + 1; j < h.n; ++j)
            for (int lam = 0; lam < h.m; ++lam)
                for (int mu = lam + 1; mu < h.m; ++mu) {
                    double acc = 0.0;
                    for (int a = 0; a < h.kappa; ++a)
                        acc += h.at(a, i, lam) * h.at(a, j, mu) -
                               h.at(a, i, mu) * h.at(a, j, lam);
                    out.r[out.flat_index(i, j, lam, mu)] = acc;
                }
    return out;
}

// Residual of the degree-(m-1) linear identities: component a is
// sum_{i,lambda} (-1)^lambda H^a_{i lambda} psi[i][lambda] (0-based lambda).
[[nodiscard]] inline std::vector<double> cartan_identities_residual(const SecondFF& h,
                                                                    const PhiCoefficients& psi) {
    if (psi.n != h.n || psi.m != h.m) throw Error("coefficient table shape mismatch");
    std::vector<double> out(static_cast<std::size_t>(h.kappa), 0.0);
    for (int a = 0; a < h.kappa; ++a) {
        double acc = 0.0;
        for (int i = 0; i < h.n; ++i)
            for (int lam = 0; lam < h.m; ++lam) {
                const double term = h.at(a, i, lam) * psi.at(i, lam);
                acc += lam % 2 == 0 ? term : -term;
            }
        out[a] = acc;
    }
    return out;
}

// General-degree residual via wedge expansion: component a is
// sum_i (sum_lambda H^a_{i lambda} eta^lambda) /\ phi^i for arbitrary
// same-degree components phi^i on the m-dimensional coframe.
[[nodiscard]] inline std::vector<PointForm>
cartan_identities_residual_general(const SecondFF& h, const std::vector<PointForm>& phi) {
    if (static_cast<int>(phi.size()) != h.n)
        throw Error("coefficient table shape mismatch");
    for (const auto& f : phi)
        if (f.dim() != h.m || f.degree() != phi[0].degree())
            throw Error("bundle-valued form components must share chart and degree");
    std::vector<PointForm> out;
    out.reserve(h.kappa);
    for (int a = 0; a < h.kappa; ++a) {
        PointForm acc(h.m, phi[0].degree() + 1);
        for (int i = 0; i < h.n; ++i) {
            PointForm row(h.m, 1);
            for (int lam = 0; lam < h.m; ++lam) row.add_term_signed({lam}, h.at(a, i, lam));
            acc += wedge(row, phi[i]);
        }
        out.push_back(std::move(acc));
    }
    return out;
}

// The residual above as a kappa x (kappa n m) matrix acting on vec(H) in the
// layout a*(n*m) + i*m + lambda.
[[nodiscard]] inline Eigen::MatrixXd cartan_constraint_matrix(const PhiCoefficients& psi,
                                                              const ProblemDims& d) {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(d.kappa, static_cast<long>(d.kappa) * d.n * d.m);
    for (int a = 0; a < d.kappa; ++a)
        for (int i = 0; i < d.n; ++i)
            for (int lam = 0; lam < d.m; ++lam) {
                const double sign = lam % 2 == 0 ? 1.0 : -1.0;
                c(a, (static_cast<long>(a) * d.n + i) * d.m + lam) = sign * psi.at(i, lam);
            }
    return c;
}

// Orthonormal basis (columns) of the kernel of the linear identity
// constraints; dimension (nm-1)*kappa for generic nonzero psi.
[[nodiscard]] inline Eigen::MatrixXd cartan_nullspace(const PhiCoefficients& psi,
                                                      const ProblemDims& d,
                                                      const Config& cfg = {}) {
    if (psi.n != d.n || psi.m != d.m) throw Error("coefficient table shape mismatch");
    return svd_nullspace(cartan_constraint_matrix(psi, d), cfg.rank_rel_tol);
}

// Differential of the Gauss map at H as a dim_K x (kappa n m) matrix; row
// order (pair(i,j), pair(lambda,mu)), column layout as vec(H).
[[nodiscard]] inline Eigen::MatrixXd gauss_jacobian(const SecondFF& h) {
    const int pairs_m = h.m * (h.m - 1) / 2;
    const long cols = static_cast<long>(h.kappa) * h.n * h.m;
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(curvature_space_dim(h.m, h.n), cols);
    auto col = [&](int a, int i, int lam) {
        return (static_cast<long>(a) * h.n + i) * h.m + lam;
    };
    for (int i = 0; i < h.n; ++i)
        for (int j = i + 1; j < h.n; ++j)
            for (int lam = 0; lam < h.m; ++lam)
                for (int mu = lam + 1; mu < h.m; ++mu) {
                    const long row =
                        static_cast<long>(detail::pair_index(i, j, h.n)) * pairs_m +
                        detail::pair_index(lam, mu, h.m);
                    for (int a = 0; a < h.kappa; ++a) {
                        jac(row, col(a, i, lam)) += h.at(a, j, mu);
                        jac(row, col(a, j, mu)) += h.at(a, i, lam);
                        jac(row, col(a, i, mu)) -= h.at(a, j, lam);
                        jac(row, col(a, j, lam)) -= h.at(a, i, mu);
                    }
                }
    return jac;
}

// Columns {H_{i lambda} : i <= n-2, lambda <= m-2} whose independence the
// admissibility condition requires.
[[nodiscard]] inline Eigen::MatrixXd independence_matrix(const SecondFF& h) {
    Eigen::MatrixXd m(h.kappa, static_cast<long>(h.n - 1) * (h.m - 1));
    for (int i = 0; i + 1 < h.n; ++i)
        for (int lam = 0; lam + 1 < h.m; ++lam)
            for (int a = 0; a < h.kappa; ++a)
                m(a, static_cast<long>(i) * (h.m - 1) + lam) = h.at(a, i, lam);
    return m;
}

[[nodiscard]] inline bool is_independent(const SecondFF& h, const Config& cfg = {}) {
    const Eigen::MatrixXd m = independence_matrix(h);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) <= 0.0) return false;
    return sv(sv.size() - 1) >= cfg.independence_rel_tol * sv(0);
}

} // namespace wedge
