#pragma once

#include <vector>

#include "wedge/form.hpp"
#include "wedge/linalg.hpp"

namespace wedge {

namespace detail {

inline std::vector<Rational> covector_at(const Form& a, const std::vector<Rational>& pt) {
    if (a.degree() != 1) throw Error("expected a 1-form");
    ExactPointForm v = eval_at(a, pt);
    std::vector<Rational> row(a.dim(), Rational(0));
    for (const auto& [k, c] : v.terms()) row[k[0]] = c;
    return row;
}

} // namespace detail

// Pointwise Cartan lemma: given sum_i theta^i /\ omega^i = 0 at pt with the
// omega^i independent there, returns the unique symmetric h with
// theta^i = sum_j h^i_j omega^j at pt. Exact over the rationals.
inline QMatrix cartan_decompose(const std::vector<Form>& theta,
                                const std::vector<Form>& omega,
                                const std::vector<Rational>& pt) {
    const std::size_t r = omega.size();
    if (theta.size() != r) throw Error("theta and omega counts differ");
    if (r == 0) return {};
    const int dim = omega[0].dim();

    std::vector<std::vector<Rational>> om, th;
    for (const auto& w : omega) om.push_back(detail::covector_at(w, pt));
    for (const auto& t : theta) th.push_back(detail::covector_at(t, pt));

    if (qmat_rank(om) != static_cast<int>(r))
        throw Error("omega forms are dependent at the point");

    // Hypothesis check: the 2-form value of sum theta^i /\ omega^i vanishes.
    ExactPointForm residual(dim, 2);
    for (std::size_t i = 0; i < r; ++i) {
        ExactPointForm ti(dim, 1), wi(dim, 1);
        for (int j = 0; j < dim; ++j) {
            ti.add_term({j}, th[i][j]);
            wi.add_term({j}, om[i][j]);
        }
        residual += wedge(ti, wi);
    }
    if (!residual.is_zero()) throw Error("not in the Cartan-lemma locus");

    auto extra = complete_basis(om, dim);

    // Solve B^T c = theta^i where the basis rows are omega then completion.
    QMatrix bt(dim, std::vector<Rational>(dim, Rational(0)));
    for (int col = 0; col < dim; ++col) {
        const auto& row = col < static_cast<int>(r) ? om[col] : extra[col - r];
        for (int i = 0; i < dim; ++i) bt[i][col] = row[i];
    }

    QMatrix h(r, std::vector<Rational>(r, Rational(0)));
    for (std::size_t i = 0; i < r; ++i) {
        auto sol = qmat_solve(bt, th[i]);
        if (!sol) throw Error("basis solve failed");
        for (int j = static_cast<int>(r); j < dim; ++j)
            if (!(*sol)[j].is_zero()) throw Error("not in the Cartan-lemma locus");
        for (std::size_t j = 0; j < r; ++j) h[i][j] = (*sol)[j];
    }
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = i + 1; j < r; ++j)
            if (h[i][j] != h[j][i]) throw Error("decomposition is not symmetric");
    return h;
}

} // namespace wedge
