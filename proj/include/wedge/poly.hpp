#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wedge/error.hpp"
#include "wedge/rational.hpp"

namespace wedge {

// Exponent vector of a monomial; length always equals the variable count.
using Mono = std::vector<unsigned>;

inline unsigned mono_degree(const Mono& m) {
    unsigned d = 0;
    for (unsigned e : m) d += e;
    return d;
}

// Graded-lexicographic order: total degree first, then lexicographic.
struct GradedLex {
    bool operator()(const Mono& a, const Mono& b) const {
        unsigned da = mono_degree(a), db = mono_degree(b);
        if (da != db) return da < db;
        return a < b;
    }
};

// Sparse multivariate polynomial with exact rational coefficients over a
// fixed number of variables. No zero coefficients are stored; the zero
// polynomial has an empty term map.
class Poly {
  public:
    using TermMap = std::map<Mono, Rational, GradedLex>;

    explicit Poly(int nvars = 0) : nvars_(nvars) {
        if (nvars < 0) throw Error("negative variable count");
    }

    static Poly constant(int nvars, const Rational& c) {
        Poly p(nvars);
        if (!c.is_zero()) p.terms_[Mono(nvars, 0)] = c;
        return p;
    }

    static Poly variable(int nvars, int i) {
        if (i < 0 || i >= nvars) throw Error("variable index out of range");
        Poly p(nvars);
        Mono m(nvars, 0);
        m[i] = 1;
        p.terms_[m] = Rational(1);
        return p;
    }

    [[nodiscard]] int nvars() const { return nvars_; }
    [[nodiscard]] const TermMap& terms() const { return terms_; }
    [[nodiscard]] bool is_zero() const { return terms_.empty(); }

    [[nodiscard]] bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && mono_degree(terms_.begin()->first) == 0);
    }

    // Constant term (valid for any polynomial).
    [[nodiscard]] Rational constant_value() const {
        auto it = terms_.find(Mono(nvars_, 0));
        return it == terms_.end() ? Rational(0) : it->second;
    }

    // Total degree; -1 for the zero polynomial.
    [[nodiscard]] int degree() const {
        return terms_.empty() ? -1 : static_cast<int>(mono_degree(terms_.rbegin()->first));
    }

    void add_term(const Mono& m, const Rational& c) {
        if (static_cast<int>(m.size()) != nvars_) throw Error("monomial arity mismatch");
        if (c.is_zero()) return;
        auto [it, fresh] = terms_.emplace(m, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    Poly operator-() const {
        Poly r(nvars_);
        for (const auto& [m, c] : terms_) r.terms_[m] = -c;
        return r;
    }

    Poly& operator+=(const Poly& o) {
        check_same(o);
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }

    Poly& operator-=(const Poly& o) {
        check_same(o);
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }

    friend Poly operator+(Poly a, const Poly& b) { a += b; return a; }
    friend Poly operator-(Poly a, const Poly& b) { a -= b; return a; }

    friend Poly operator*(const Poly& a, const Poly& b) {
        a.check_same(b);
        Poly r(a.nvars_);
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) {
                Mono m(a.nvars_);
                for (int i = 0; i < a.nvars_; ++i) m[i] = ma[i] + mb[i];
                r.add_term(m, ca * cb);
            }
        return r;
    }

    friend Poly operator*(const Poly& a, const Rational& c) {
        Poly r(a.nvars_);
        if (c.is_zero()) return r;
        for (const auto& [m, cc] : a.terms_) r.terms_[m] = cc * c;
        return r;
    }
    friend Poly operator*(const Rational& c, const Poly& a) { return a * c; }

    friend bool operator==(const Poly& a, const Poly& b) {
        return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    // d/dx_var, exact.
    [[nodiscard]] Poly partial(int var) const {
        if (var < 0 || var >= nvars_) throw Error("variable index out of range");
        Poly r(nvars_);
        for (const auto& [m, c] : terms_) {
            if (m[var] == 0) continue;
            Mono mm = m;
            mm[var] -= 1;
            r.add_term(mm, c * Rational(static_cast<long>(m[var])));
        }
        return r;
    }

    [[nodiscard]] Rational eval(const std::vector<Rational>& pt) const {
        check_point(pt.size());
        Rational acc(0);
        for (const auto& [m, c] : terms_) {
            Rational t = c;
            for (int i = 0; i < nvars_; ++i)
                for (unsigned e = 0; e < m[i]; ++e) t *= pt[i];
            acc += t;
        }
        return acc;
    }

    [[nodiscard]] double eval(const std::vector<double>& pt) const {
        check_point(pt.size());
        double acc = 0.0;
        for (const auto& [m, c] : terms_) {
            double t = c.to_double();
            for (int i = 0; i < nvars_; ++i)
                for (unsigned e = 0; e < m[i]; ++e) t *= pt[i];
            acc += t;
        }
        return acc;
    }

    // Substitution of one polynomial per variable (all in a common new ring).
    [[nodiscard]] Poly compose(const std::vector<Poly>& sub) const {
        check_point(sub.size());
        int out_vars = sub.empty() ? 0 : sub[0].nvars();
        for (const auto& s : sub)
            if (s.nvars() != out_vars) throw Error("substitution arity mismatch");
        Poly acc(out_vars);
        for (const auto& [m, c] : terms_) {
            Poly t = Poly::constant(out_vars, c);
            for (int i = 0; i < nvars_; ++i)
                for (unsigned e = 0; e < m[i]; ++e) t = t * sub[i];
            acc += t;
        }
        return acc;
    }

    // Exact division: returns quotient iff divisor divides exactly.
    [[nodiscard]] std::optional<Poly> divide_exact(const Poly& divisor) const;

    // Canonical text form, graded-lex descending, e.g. "-1/2*x^2*y + 3*z".
    [[nodiscard]] std::string str(const std::vector<std::string>& names) const;

    // Parses the grammar: rational literals, declared variable names,
    // '*', '+', '-', '^' with non-negative integer exponents.
    static Poly parse(const std::string& text, const std::vector<std::string>& names);

  private:
    void check_same(const Poly& o) const {
        if (nvars_ != o.nvars_) throw Error("polynomial arity mismatch");
    }
    void check_point(std::size_t n) const {
        if (static_cast<int>(n) != nvars_) throw Error("point arity mismatch");
    }

    int nvars_;
    TermMap terms_;
};

inline std::optional<Poly> Poly::divide_exact(const Poly& divisor) const {
    check_same(divisor);
    if (divisor.is_zero()) throw Error("division by zero polynomial");
    Poly rem = *this;
    Poly quot(nvars_);
    const auto& [dm, dc] = *divisor.terms_.rbegin();
    while (!rem.is_zero()) {
        const auto& [rm, rc] = *rem.terms_.rbegin();
        Mono q(nvars_);
        for (int i = 0; i < nvars_; ++i) {
            if (rm[i] < dm[i]) return std::nullopt;
            q[i] = rm[i] - dm[i];
        }
        Poly qt(nvars_);
        qt.terms_[q] = rc / dc;
        quot += qt;
        rem -= qt * divisor;
    }
    return quot;
}

inline std::string Poly::str(const std::vector<std::string>& names) const {
    if (static_cast<int>(names.size()) != nvars_) throw Error("variable name count mismatch");
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [m, c] = *it;
        Rational a = c;
        if (first) {
            if (a.sign() < 0) { out += "-"; a = -a; }
        } else {
            out += a.sign() < 0 ? " - " : " + ";
            if (a.sign() < 0) a = -a;
        }
        std::string vars;
        for (int i = 0; i < nvars_; ++i) {
            if (m[i] == 0) continue;
            if (!vars.empty()) vars += "*";
            vars += names[i];
            if (m[i] > 1) vars += "^" + std::to_string(m[i]);
        }
        if (vars.empty()) {
            out += a.str();
        } else if (a.is_one()) {
            out += vars;
        } else {
            out += a.str() + "*" + vars;
        }
        first = false;
    }
    return out;
}

namespace detail {

struct PolyLexer {
    enum class Tok { Num, Ident, Plus, Minus, Star, Caret, End };

    explicit PolyLexer(const std::string& s) : src(s) { advance(); }

    void advance() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
        if (pos == src.size()) { tok = Tok::End; text.clear(); return; }
        char c = src[pos];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos;
            while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
            if (pos < src.size() && src[pos] == '/') {
                ++pos;
                std::size_t dstart = pos;
                while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
                if (pos == dstart) throw ParseError("malformed rational literal in polynomial");
            }
            tok = Tok::Num;
            text = src.substr(start, pos - start);
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos;
            while (pos < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
                ++pos;
            tok = Tok::Ident;
            text = src.substr(start, pos - start);
            return;
        }
        ++pos;
        switch (c) {
            case '+': tok = Tok::Plus; break;
            case '-': tok = Tok::Minus; break;
            case '*': tok = Tok::Star; break;
            case '^': tok = Tok::Caret; break;
            default: throw ParseError(std::string("unexpected character '") + c + "' in polynomial");
        }
        text = std::string(1, c);
    }

    const std::string& src;
    std::size_t pos = 0;
    Tok tok = Tok::End;
    std::string text;
};

} // namespace detail

inline Poly Poly::parse(const std::string& text, const std::vector<std::string>& names) {
    using Tok = detail::PolyLexer::Tok;
    const int nv = static_cast<int>(names.size());
    detail::PolyLexer lx(text);

    auto var_index = [&](const std::string& id) {
        for (int i = 0; i < nv; ++i)
            if (names[i] == id) return i;
        throw ParseError("unknown variable '" + id + "'");
    };

    auto parse_factor = [&](Mono& mono, Rational& coef) {
        if (lx.tok == Tok::Num) {
            coef *= Rational::parse(lx.text);
            lx.advance();
            return;
        }
        if (lx.tok != Tok::Ident) throw ParseError("expected variable or literal in polynomial");
        int vi = var_index(lx.text);
        lx.advance();
        unsigned exp = 1;
        if (lx.tok == Tok::Caret) {
            lx.advance();
            if (lx.tok != Tok::Num || lx.text.find('/') != std::string::npos)
                throw ParseError("exponent must be a non-negative integer");
            exp = static_cast<unsigned>(std::stoul(lx.text));
            lx.advance();
        }
        mono[vi] += exp;
    };

    Poly out(nv);
    bool expect_term = true;
    int sign = 1;
    if (lx.tok == Tok::Minus) { sign = -1; lx.advance(); }
    else if (lx.tok == Tok::Plus) { lx.advance(); }
    if (lx.tok == Tok::End) throw ParseError("empty polynomial");
    while (expect_term) {
        Mono mono(nv, 0);
        Rational coef(sign);
        parse_factor(mono, coef);
        while (lx.tok == Tok::Star) {
            lx.advance();
            parse_factor(mono, coef);
        }
        out.add_term(mono, coef);
        if (lx.tok == Tok::Plus) { sign = 1; lx.advance(); }
        else if (lx.tok == Tok::Minus) { sign = -1; lx.advance(); }
        else if (lx.tok == Tok::End) { expect_term = false; }
        else throw ParseError("unexpected token '" + lx.text + "' in polynomial");
    }
    return out;
}

} // namespace wedge
