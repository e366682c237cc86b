#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "wedge/error.hpp"
#include "wedge/poly.hpp"
#include "wedge/rational.hpp"

namespace wedge {

// Strictly increasing tuple of 0-based coframe indices.
using MultiIndex = std::vector<int>;

inline bool strictly_increasing(const MultiIndex& k) {
    for (std::size_t i = 1; i < k.size(); ++i)
        if (k[i - 1] >= k[i]) return false;
    return true;
}

// Sign of the merge of two strictly increasing tuples; nullopt if they
// overlap. Sign is (-1)^inversions of the concatenation.
inline std::optional<std::pair<int, MultiIndex>> merge_indices(const MultiIndex& a,
                                                               const MultiIndex& b) {
    long inversions = 0;
    for (int x : a)
        for (int y : b) {
            if (x == y) return std::nullopt;
            if (x > y) ++inversions;
        }
    MultiIndex m;
    m.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(m));
    return std::make_pair(inversions % 2 == 0 ? 1 : -1, m);
}

// Canonicalizes an arbitrary tuple; nullopt when an index repeats.
inline std::optional<std::pair<int, MultiIndex>> sort_indices(MultiIndex k) {
    long inversions = 0;
    for (std::size_t i = 0; i < k.size(); ++i)
        for (std::size_t j = i + 1; j < k.size(); ++j) {
            if (k[i] == k[j]) return std::nullopt;
            if (k[i] > k[j]) ++inversions;
        }
    std::sort(k.begin(), k.end());
    return std::make_pair(inversions % 2 == 0 ? 1 : -1, k);
}

inline bool coef_is_zero(const Poly& p) { return p.is_zero(); }
inline bool coef_is_zero(const Rational& r) { return r.is_zero(); }
inline bool coef_is_zero(double d) { return d == 0.0; }

// Exterior form on a D-dimensional chart (or abstract coframe) with
// coefficients in C: Poly for symbolic forms, Rational or double for the
// value of a form at a point. Terms are keyed by strictly increasing
// multi-indices; zero coefficients are never stored.
template <class C>
class BasicForm {
  public:
    using TermMap = std::map<MultiIndex, C>;

    BasicForm() : dim_(0), degree_(0) {}
    BasicForm(int dim, int degree) : dim_(dim), degree_(degree) {
        if (dim < 0 || degree < 0) throw Error("form with negative dimension or degree");
    }

    [[nodiscard]] int dim() const { return dim_; }
    [[nodiscard]] int degree() const { return degree_; }
    [[nodiscard]] const TermMap& terms() const { return terms_; }
    [[nodiscard]] bool is_zero() const { return terms_.empty(); }

    void add_term(const MultiIndex& idx, const C& c) {
        validate_index(idx);
        if (coef_is_zero(c)) return;
        auto [it, fresh] = terms_.emplace(idx, c);
        if (!fresh) {
            it->second += c;
            if (coef_is_zero(it->second)) terms_.erase(it);
        }
    }

    // Accepts an unsorted tuple, folding in the permutation sign.
    void add_term_signed(const MultiIndex& idx, const C& c) {
        if (static_cast<int>(idx.size()) != degree_) throw Error("multi-index length mismatch");
        auto sorted = sort_indices(idx);
        if (!sorted) return; // repeated index wedges to zero
        C cc = c;
        if (sorted->first < 0) cc = -cc;
        add_term(sorted->second, cc);
    }

    [[nodiscard]] C coefficient(const MultiIndex& idx) const {
        auto it = terms_.find(idx);
        if (it != terms_.end()) return it->second;
        return zero_coef();
    }

    BasicForm operator-() const {
        BasicForm r(dim_, degree_);
        for (const auto& [k, c] : terms_) r.terms_[k] = -c;
        return r;
    }

    BasicForm& operator+=(const BasicForm& o) {
        check_compatible(o);
        for (const auto& [k, c] : o.terms_) add_term(k, c);
        return *this;
    }
    BasicForm& operator-=(const BasicForm& o) {
        check_compatible(o);
        for (const auto& [k, c] : o.terms_) add_term(k, -c);
        return *this;
    }

    friend BasicForm operator+(BasicForm a, const BasicForm& b) { a += b; return a; }
    friend BasicForm operator-(BasicForm a, const BasicForm& b) { a -= b; return a; }

    friend BasicForm operator*(const BasicForm& a, const C& s) {
        BasicForm r(a.dim_, a.degree_);
        for (const auto& [k, c] : a.terms_) r.add_term(k, c * s);
        return r;
    }
    friend BasicForm operator*(const C& s, const BasicForm& a) { return a * s; }

    friend bool operator==(const BasicForm& a, const BasicForm& b) {
        return a.dim_ == b.dim_ && a.degree_ == b.degree_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const BasicForm& a, const BasicForm& b) { return !(a == b); }

    [[nodiscard]] std::string str(const std::vector<std::string>& names) const;

  private:
    [[nodiscard]] C zero_coef() const {
        if constexpr (std::is_same_v<C, Poly>) return Poly(dim_);
        else return C(0);
    }

    void validate_index(const MultiIndex& idx) const {
        if (static_cast<int>(idx.size()) != degree_) throw Error("multi-index length mismatch");
        if (!strictly_increasing(idx)) throw Error("idx must be strictly increasing");
        if (!idx.empty() && (idx.front() < 0 || idx.back() >= dim_))
            throw Error("multi-index out of chart range");
    }

    void check_compatible(const BasicForm& o) const {
        if (dim_ != o.dim_ || degree_ != o.degree_)
            throw Error("form dimension or degree mismatch");
    }

    int dim_;
    int degree_;
    TermMap terms_;
};

using Form = BasicForm<Poly>;            // polynomial coefficients
using PointForm = BasicForm<double>;     // value of a form at a point
using ExactPointForm = BasicForm<Rational>;

// Polynomial vector field on a chart.
struct VectorField {
    std::vector<Poly> components;

    [[nodiscard]] int dim() const { return static_cast<int>(components.size()); }
};

template <class C>
[[nodiscard]] BasicForm<C> wedge(const BasicForm<C>& a, const BasicForm<C>& b) {
    if (a.dim() != b.dim()) throw Error("form dimension or degree mismatch");
    BasicForm<C> r(a.dim(), a.degree() + b.degree());
    for (const auto& [ka, ca] : a.terms())
        for (const auto& [kb, cb] : b.terms()) {
            auto merged = merge_indices(ka, kb);
            if (!merged) continue;
            C c = ca * cb;
            if (merged->first < 0) c = -c;
            r.add_term(merged->second, c);
        }
    return r;
}

// Coordinate exterior derivative (for abstract coframes see
// exterior_system.hpp, which differentiates through a structure table).
[[nodiscard]] inline Form exterior_d(const Form& a) {
    Form r(a.dim(), a.degree() + 1);
    for (const auto& [k, c] : a.terms())
        for (int v = 0; v < a.dim(); ++v) {
            Poly dc = c.partial(v);
            if (dc.is_zero()) continue;
            MultiIndex idx;
            idx.reserve(k.size() + 1);
            idx.push_back(v);
            idx.insert(idx.end(), k.begin(), k.end());
            r.add_term_signed(idx, dc);
        }
    return r;
}

// Contraction with a polynomial vector field in the first slot.
[[nodiscard]] inline Form interior_product(const VectorField& x, const Form& a) {
    if (a.degree() == 0) throw Error("interior product of a 0-form");
    if (x.dim() != a.dim()) throw Error("form dimension or degree mismatch");
    Form r(a.dim(), a.degree() - 1);
    for (const auto& [k, c] : a.terms())
        for (std::size_t s = 0; s < k.size(); ++s) {
            Poly piece = c * x.components[k[s]];
            if (s % 2 == 1) piece = -piece;
            MultiIndex rest;
            rest.reserve(k.size() - 1);
            for (std::size_t t = 0; t < k.size(); ++t)
                if (t != s) rest.push_back(k[t]);
            r.add_term(rest, piece);
        }
    return r;
}

// Pullback along the polynomial map x -> (f[0](x), ..., f[D'-1](x)) from the
// chart of the f's into the chart of alpha. Commutes with d and wedge.
[[nodiscard]] inline Form pullback(const std::vector<Poly>& f, const Form& alpha) {
    if (static_cast<int>(f.size()) != alpha.dim())
        throw Error("pullback map component count mismatch");
    int src_dim = f.empty() ? 0 : f[0].nvars();
    for (const auto& c : f)
        if (c.nvars() != src_dim) throw Error("pullback map arity mismatch");

    std::vector<Form> df;
    df.reserve(f.size());
    for (const auto& comp : f) {
        Form d(src_dim, 1);
        for (int v = 0; v < src_dim; ++v) d.add_term({v}, comp.partial(v));
        df.push_back(std::move(d));
    }

    Form r(src_dim, alpha.degree());
    for (const auto& [k, c] : alpha.terms()) {
        Form piece(src_dim, 0);
        piece.add_term({}, c.compose(f));
        for (int ki : k) piece = wedge(piece, df[ki]);
        r += piece;
    }
    return r;
}

// Evaluates polynomial coefficients at a point; T is Rational or double.
template <class T>
[[nodiscard]] BasicForm<T> eval_at(const Form& a, const std::vector<T>& pt) {
    BasicForm<T> r(a.dim(), a.degree());
    for (const auto& [k, c] : a.terms()) r.add_term(k, c.eval(pt));
    return r;
}

namespace detail {

template <class T>
[[nodiscard]] T det(const std::vector<std::vector<T>>& m) {
    const std::size_t n = m.size();
    if (n == 0) return T(1);
    if (n == 1) return m[0][0];
    if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
    T acc(0);
    std::vector<std::vector<T>> minor(n - 1, std::vector<T>(n - 1, T(0)));
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t r = 1; r < n; ++r) {
            std::size_t cc = 0;
            for (std::size_t c = 0; c < n; ++c) {
                if (c == j) continue;
                minor[r - 1][cc++] = m[r][c];
            }
        }
        T term = m[0][j] * det(minor);
        if (j % 2 == 1) term = -term;
        acc += term;
    }
    return acc;
}

} // namespace detail

// Alternating multilinear value of a point form on degree-many vectors
// (determinant expansion over multi-indices).
template <class T>
[[nodiscard]] T apply(const BasicForm<T>& a, const std::vector<std::vector<T>>& vectors) {
    if (static_cast<int>(vectors.size()) != a.degree())
        throw Error("apply expects exactly degree-many vectors");
    for (const auto& v : vectors)
        if (static_cast<int>(v.size()) != a.dim()) throw Error("vector dimension mismatch");
    const std::size_t k = vectors.size();
    T acc(0);
    std::vector<std::vector<T>> m(k, std::vector<T>(k, T(0)));
    for (const auto& [idx, c] : a.terms()) {
        for (std::size_t s = 0; s < k; ++s)
            for (std::size_t t = 0; t < k; ++t) m[s][t] = vectors[t][idx[s]];
        acc += c * detail::det(m);
    }
    return acc;
}

template <class C>
std::string BasicForm<C>::str(const std::vector<std::string>& names) const {
    if (static_cast<int>(names.size()) != dim_) throw Error("variable name count mismatch");
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [k, c] : terms_) {
        std::string coef;
        if constexpr (std::is_same_v<C, Poly>) {
            coef = c.str(names);
            if (c.terms().size() > 1) coef = "(" + coef + ")";
        } else if constexpr (std::is_same_v<C, Rational>) {
            coef = c.str();
        } else {
            coef = std::to_string(c);
        }
        std::string basis;
        for (int ki : k) {
            if (!basis.empty()) basis += "^";
            basis += "d" + names[ki];
        }
        std::string term = basis.empty() ? coef : coef + " " + basis;
        if (first) {
            out = term;
            first = false;
        } else if (!term.empty() && term[0] == '-') {
            out += " - " + term.substr(1);
        } else {
            out += " + " + term;
        }
    }
    return out;
}

} // namespace wedge
