#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <ostream>
#include <string>

#include "wedge/error.hpp"

namespace wedge {

// Exact rational scalar. Invariants: always reduced, denominator > 0,
// zero is canonically 0/1. Backed by GMP.
class Rational {
  public:
    Rational() : v_(0) {}
    Rational(long n) : v_(static_cast<signed long>(n)) {} // NOLINT: implicit by design
    Rational(long n, long d) : v_(static_cast<signed long>(n), static_cast<signed long>(d)) {
        if (d == 0) throw Error("rational with zero denominator");
        v_.canonicalize();
    }
    explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }

    // Exact value of a binary double (every finite double is rational).
    static Rational from_double(double x) {
        mpq_class q;
        mpq_set_d(q.get_mpq_t(), x);
        return Rational(q);
    }

    // Accepts "n" or "n/d" with optional leading sign.
    static Rational parse(const std::string& text);

    [[nodiscard]] const mpz_class& num() const { return v_.get_num(); }
    [[nodiscard]] const mpz_class& den() const { return v_.get_den(); }

    [[nodiscard]] bool is_zero() const { return sgn(v_) == 0; }
    [[nodiscard]] bool is_one() const { return v_ == 1; }
    [[nodiscard]] int sign() const { return sgn(v_); }

    [[nodiscard]] double to_double() const { return v_.get_d(); }

    [[nodiscard]] std::string str() const {
        if (v_.get_den() == 1) return v_.get_num().get_str();
        return v_.get_num().get_str() + "/" + v_.get_den().get_str();
    }

    Rational operator-() const { return Rational(mpq_class(-v_)); }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw Error("rational division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { a += b; return a; }
    friend Rational operator-(Rational a, const Rational& b) { a -= b; return a; }
    friend Rational operator*(Rational a, const Rational& b) { a *= b; return a; }
    friend Rational operator/(Rational a, const Rational& b) { a /= b; return a; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

  private:
    mpq_class v_;
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

inline Rational Rational::parse(const std::string& raw) {
    // GMP rejects a leading '+'.
    const std::string text = !raw.empty() && raw[0] == '+' ? raw.substr(1) : raw;
    if (text.empty()) throw ParseError("empty rational literal");
    // mpq_class(string) accepts forms like "-3/4"; validate digits ourselves
    // so garbage such as "1/2/3" or "x" is rejected with a clear message.
    std::size_t i = 0;
    auto digits = [&](std::size_t start) {
        std::size_t j = start;
        while (j < text.size() && text[j] >= '0' && text[j] <= '9') ++j;
        return j;
    };
    if (text[i] == '-') ++i;
    std::size_t after_num = digits(i);
    if (after_num == i) throw ParseError("malformed rational literal '" + text + "'");
    if (after_num == text.size())
        return Rational(mpq_class(text));
    if (text[after_num] != '/') throw ParseError("malformed rational literal '" + text + "'");
    std::size_t den_start = after_num + 1;
    std::size_t after_den = digits(den_start);
    if (after_den == den_start || after_den != text.size())
        throw ParseError("malformed rational literal '" + text + "'");
    mpq_class q(text);
    if (q.get_den() == 0) throw Error("rational with zero denominator");
    q.canonicalize();
    return Rational(q);
}

} // namespace wedge
