#include <catch2/catch_amalgamated.hpp>

#include "wedge/rational.hpp"

using wedge::Rational;

TEST_CASE("rationals are stored reduced with positive denominator", "[rational]") {
    Rational a(2, 4);
    CHECK(a.num() == 1);
    CHECK(a.den() == 2);

    Rational b(1, -2);
    CHECK(b.num() == -1);
    CHECK(b.den() == 2);

    Rational z(0, 7);
    CHECK(z.is_zero());
    CHECK(z.den() == 1);
    CHECK(z == Rational(0));
}

TEST_CASE("rational arithmetic is exact", "[rational]") {
    Rational a(1, 3), b(1, 6);
    CHECK(a + b == Rational(1, 2));
    CHECK(a - b == Rational(1, 6));
    CHECK(a * b == Rational(1, 18));
    CHECK(a / b == Rational(2));
    CHECK(-a == Rational(-1, 3));
    CHECK(a < Rational(1, 2));
    CHECK_THROWS_AS(a / Rational(0), wedge::Error);
    CHECK_THROWS_AS(Rational(1, 0), wedge::Error);
}

TEST_CASE("rational parse and print round-trip", "[rational]") {
    CHECK(Rational::parse("-3/4") == Rational(-3, 4));
    CHECK(Rational::parse("5") == Rational(5));
    CHECK(Rational::parse("+7/21") == Rational(1, 3));
    CHECK(Rational(-3, 4).str() == "-3/4");
    CHECK(Rational(5).str() == "5");
    CHECK(Rational(0).str() == "0");

    CHECK_THROWS_AS(Rational::parse("1/2/3"), wedge::ParseError);
    CHECK_THROWS_AS(Rational::parse("x"), wedge::ParseError);
    CHECK_THROWS_AS(Rational::parse(""), wedge::ParseError);
    CHECK_THROWS_AS(Rational::parse("1.5"), wedge::ParseError);
}

TEST_CASE("rational survives values beyond 64 bits", "[rational]") {
    Rational big = Rational::parse("123456789012345678901234567890");
    CHECK(big * Rational(2) - big == big);
    Rational tiny(1, 1000000007);
    Rational prod = big * tiny;
    CHECK(prod / tiny == big);
}

TEST_CASE("from_double is the exact binary value", "[rational]") {
    CHECK(Rational::from_double(0.5) == Rational(1, 2));
    CHECK(Rational::from_double(-0.25) == Rational(-1, 4));
    // 0.1 is not 1/10 in binary; the conversion must preserve the bits.
    Rational tenth = Rational::from_double(0.1);
    CHECK(tenth != Rational(1, 10));
    CHECK(tenth.to_double() == 0.1);
}
