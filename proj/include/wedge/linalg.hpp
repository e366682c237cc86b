#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

#include "wedge/error.hpp"
#include "wedge/rational.hpp"

namespace wedge {

using QMatrix = std::vector<std::vector<Rational>>;

// Row echelon reduction over the rationals, in place. Returns the rank.
inline int qmat_rref(QMatrix& m) {
    if (m.empty()) return 0;
    const std::size_t rows = m.size(), cols = m[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t pivot = r;
        while (pivot < rows && m[pivot][c].is_zero()) ++pivot;
        if (pivot == rows) continue;
        std::swap(m[r], m[pivot]);
        Rational inv = Rational(1) / m[r][c];
        for (std::size_t j = c; j < cols; ++j) m[r][j] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c].is_zero()) continue;
            Rational f = m[i][c];
            for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        ++r;
    }
    return static_cast<int>(r);
}

inline int qmat_rank(QMatrix m) { return qmat_rref(m); }

// Exact right-nullspace basis.
inline QMatrix qmat_nullspace(QMatrix m) {
    if (m.empty()) return {};
    const std::size_t cols = m[0].size();
    qmat_rref(m);
    std::vector<long> pivot_of_col(cols, -1);
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
        if (!m[r][c].is_zero()) pivot_of_col[c] = static_cast<long>(r++);
    }
    QMatrix basis;
    for (std::size_t free_c = 0; free_c < cols; ++free_c) {
        if (pivot_of_col[free_c] >= 0) continue;
        std::vector<Rational> v(cols, Rational(0));
        v[free_c] = Rational(1);
        for (std::size_t c = 0; c < cols; ++c)
            if (pivot_of_col[c] >= 0) v[c] = -m[pivot_of_col[c]][free_c];
        basis.push_back(std::move(v));
    }
    return basis;
}

// Unique solution of a square nonsingular system; nullopt when singular.
inline std::optional<std::vector<Rational>> qmat_solve(QMatrix a,
                                                       const std::vector<Rational>& b) {
    const std::size_t n = a.size();
    if (n == 0 || a[0].size() != n || b.size() != n) throw Error("qmat_solve expects square system");
    for (std::size_t i = 0; i < n; ++i) a[i].push_back(b[i]);
    int rank = qmat_rref(a);
    if (rank < static_cast<int>(n)) return std::nullopt;
    std::vector<Rational> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = a[i][n];
    return x;
}

// Completes the given independent vectors to a basis with coordinate
// directions, scanned in index order. Returns the chosen directions.
inline std::vector<std::vector<Rational>> complete_basis(
    const std::vector<std::vector<Rational>>& vectors, int dim) {
    QMatrix m;
    for (const auto& v : vectors) m.push_back(v);
    int rank = qmat_rank(m);
    if (rank != static_cast<int>(vectors.size())) throw Error("vectors are dependent");
    std::vector<std::vector<Rational>> extra;
    for (int j = 0; j < dim && rank + static_cast<int>(extra.size()) < dim; ++j) {
        std::vector<Rational> e(dim, Rational(0));
        e[j] = Rational(1);
        QMatrix trial = m;
        for (const auto& v : extra) trial.push_back(v);
        trial.push_back(e);
        if (qmat_rank(std::move(trial)) == rank + static_cast<int>(extra.size()) + 1)
            extra.push_back(std::move(e));
    }
    if (rank + static_cast<int>(extra.size()) != dim) throw Error("basis completion failed");
    return extra;
}

inline Eigen::MatrixXd to_eigen(const QMatrix& m) {
    Eigen::MatrixXd e(m.size(), m.empty() ? 0 : m[0].size());
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m[i].size(); ++j) e(i, j) = m[i][j].to_double();
    return e;
}

// Singular values below rel_tol * max(largest singular value, 1) count as
// zero.
inline int svd_rank(const Eigen::MatrixXd& m, double rel_tol) {
    if (m.rows() == 0 || m.cols() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& sv = svd.singularValues();
    double cutoff = rel_tol * std::max(sv.size() > 0 ? sv(0) : 0.0, 1.0);
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++rank;
    return rank;
}

// Orthonormal basis (columns) of the right nullspace under the same
// threshold rule as svd_rank.
inline Eigen::MatrixXd svd_nullspace(const Eigen::MatrixXd& m, double rel_tol) {
    if (m.rows() == 0 || m.cols() == 0)
        return Eigen::MatrixXd::Identity(m.cols(), m.cols());
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    double cutoff = rel_tol * std::max(sv.size() > 0 ? sv(0) : 0.0, 1.0);
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++rank;
    return svd.matrixV().rightCols(m.cols() - rank);
}

} // namespace wedge
