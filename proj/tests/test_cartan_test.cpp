#include <catch2/catch_amalgamated.hpp>

#include "wedge/cartan_test.hpp"

using namespace wedge;

namespace {

Form symplectic_r4() { // dx1^dx3 + dx2^dx4
    Form f(4, 2);
    f.add_term({0, 2}, Poly::constant(4, Rational(1)));
    f.add_term({1, 3}, Poly::constant(4, Rational(1)));
    return f;
}

Form d1(int dim, int i) {
    Form f(dim, 1);
    f.add_term({i}, Poly::constant(dim, Rational(1)));
    return f;
}

std::vector<Rational> origin(int dim) { return std::vector<Rational>(dim, Rational(0)); }

std::vector<Rational> unit(int dim, int i) {
    std::vector<Rational> v(dim, Rational(0));
    v[i] = Rational(1);
    return v;
}

} // namespace

TEST_CASE("symplectic plane example: flag, characters, ordinarity", "[cartan-test]") {
    ExteriorSystem s(4, {symplectic_r4()});

    Flag flag = greedy_flag(s, origin(4), 2);
    REQUIRE(flag.vectors.size() == 2);
    REQUIRE(flag.vectors[0] == unit(4, 0));
    REQUIRE(flag.vectors[1] == unit(4, 1));

    SECTION("polar space of the line spanned by the first direction") {
        IntegralElement e1{origin(4), {flag.vectors[0]}};
        const auto values = generators_at(s, e1.base);
        QMatrix rows = polar_rows(s, values, e1.basis);
        // Single equation: the 2-form paired with the first coordinate
        // direction sends v to -v_3.
        REQUIRE(rows.size() == 1);
        REQUIRE(rows[0] == std::vector<Rational>{Rational(0), Rational(0), Rational(-1), Rational(0)});
        REQUIRE(in_polar_space(rows, unit(4, 1)));
        REQUIRE(in_polar_space(rows, unit(4, 3)));
        REQUIRE_FALSE(in_polar_space(rows, unit(4, 2)));
        REQUIRE(polar_space(s, e1).dim == 3);
    }

    SECTION("extension ranks along the flag") {
        IntegralElement e0{origin(4), {}};
        IntegralElement e1{origin(4), {flag.vectors[0]}};
        REQUIRE(extension_rank(s, e0) == 3);
        REQUIRE(extension_rank(s, e1) == 1);
    }

    SECTION("full test report") {
        CartanReport rep = cartan_test(s, flag);
        REQUIRE(rep.characters == std::vector<int>{0, 1});
        REQUIRE(rep.extension_ranks == std::vector<int>{3, 1});
        REQUIRE(rep.character_sum == 1);
        REQUIRE(rep.codim_variety == 1);
        REQUIRE(rep.ordinary);
    }

    SECTION("no three-dimensional integral element exists") {
        REQUIRE_THROWS_WITH(greedy_flag(s, origin(4), 3),
                            Catch::Matchers::ContainsSubstring("stuck at dimension 2"));
    }

    SECTION("integral element predicate") {
        REQUIRE(is_integral_element(s, {origin(4), {unit(4, 0), unit(4, 1)}}));
        REQUIRE_FALSE(is_integral_element(s, {origin(4), {unit(4, 0), unit(4, 2)}}));
        REQUIRE_THROWS_WITH(is_integral_element(s, {origin(4), {unit(4, 0), unit(4, 0)}}),
                            Catch::Matchers::ContainsSubstring("dependent"));
    }

    SECTION("element is always contained in its own polar space") {
        const auto values = generators_at(s, origin(4));
        for (int k = 1; k <= 2; ++k) {
            std::vector<std::vector<Rational>> head(flag.vectors.begin(),
                                                    flag.vectors.begin() + k);
            QMatrix rows = polar_rows(s, values, head);
            for (const auto& e : head) REQUIRE(in_polar_space(rows, e));
        }
    }

    SECTION("characters are stable under base-point perturbation") {
        RegularitySample probe = sample_characters_near(s, flag, 5);
        // Constant-coefficient ideal: every sample stays integral.
        REQUIRE(probe.integral_samples == 5);
        REQUIRE(probe.constant);
    }

    SECTION("non-integral top element is rejected") {
        Flag bad{origin(4), {unit(4, 0), unit(4, 2)}};
        REQUIRE_THROWS_WITH(cartan_test(s, bad),
                            Catch::Matchers::ContainsSubstring("not an integral element"));
    }
}

TEST_CASE("involutive Pfaffian systems are ordinary with constant characters", "[cartan-test]") {
    // Rank-2 system {dx, dy} on a 3-dimensional chart.
    ExteriorSystem s(3, {d1(3, 0), d1(3, 1)});
    REQUIRE(frobenius_check(s).integrable);

    Flag flag = greedy_flag(s, origin(3), 1);
    REQUIRE(flag.vectors[0] == unit(3, 2));

    CartanReport rep = cartan_test(s, flag);
    REQUIRE(rep.characters == std::vector<int>{2});
    REQUIRE(rep.character_sum == 2);
    REQUIRE(rep.codim_variety == 2);
    REQUIRE(rep.ordinary);

    SECTION("maximal flag length equals the coframe nullity") {
        REQUIRE_THROWS_WITH(greedy_flag(s, origin(3), 2),
                            Catch::Matchers::ContainsSubstring("stuck at dimension 1"));
    }
}

TEST_CASE("rank-1 involutive system admits a codimension-1 flag", "[cartan-test]") {
    ExteriorSystem s(3, {d1(3, 2)});
    Flag flag = greedy_flag(s, origin(3), 2);
    REQUIRE(flag.vectors == std::vector<std::vector<Rational>>{unit(3, 0), unit(3, 1)});

    CartanReport rep = cartan_test(s, flag);
    REQUIRE(rep.characters == std::vector<int>{1, 1});
    REQUIRE(rep.character_sum == 2);
    REQUIRE(rep.codim_variety == 2);
    REQUIRE(rep.ordinary);
    REQUIRE(rep.extension_ranks == std::vector<int>{1, 0});
}

TEST_CASE("closed contact ideal has ordinary integral curves", "[cartan-test]") {
    Form theta(3, 1); // dz - x dy
    theta.add_term({2}, Poly::constant(3, Rational(1)));
    theta.add_term({1}, Rational(-1) * Poly::variable(3, 0));
    ExteriorSystem closed = close_system(ExteriorSystem(3, {theta}));
    REQUIRE(closed.generators().size() == 2);

    Flag flag = greedy_flag(closed, origin(3), 1);
    REQUIRE(flag.vectors[0] == unit(3, 0));
    CartanReport rep = cartan_test(closed, flag);
    REQUIRE(rep.characters == std::vector<int>{1});
    REQUIRE(rep.codim_variety == 1);
    REQUIRE(rep.ordinary);

    SECTION("the one-dimensional element does not extend") {
        IntegralElement e1{origin(3), {flag.vectors[0]}};
        REQUIRE(extension_rank(closed, e1) == -1);
        REQUIRE_THROWS_WITH(greedy_flag(closed, origin(3), 2),
                            Catch::Matchers::ContainsSubstring("stuck at dimension 1"));
    }
}

TEST_CASE("variable-coefficient ideal away from its singular point", "[cartan-test]") {
    // Closed ideal of x dx + y dy + z dz at a point away from the origin.
    Form radial(3, 1);
    for (int i = 0; i < 3; ++i) radial.add_term({i}, Poly::variable(3, i));
    ExteriorSystem s = close_system(ExteriorSystem(3, {radial}));
    std::vector<Rational> base{Rational(1), Rational(0), Rational(0)};

    Flag flag = greedy_flag(s, base, 2);
    REQUIRE(flag.vectors == std::vector<std::vector<Rational>>{unit(3, 1), unit(3, 2)});

    CartanReport rep = cartan_test(s, flag);
    REQUIRE(rep.characters == std::vector<int>{1, 1});
    REQUIRE(rep.ordinary);

    SECTION("perturbing the base knocks this flag off the integral locus") {
        RegularitySample probe = sample_characters_near(s, flag, 5);
        REQUIRE(probe.integral_samples == 0);
        REQUIRE(probe.constant); // vacuously: no comparable sample
    }
}

TEST_CASE("greedy flag respects preferred directions", "[cartan-test]") {
    ExteriorSystem s(4, {symplectic_r4()});
    // Prefer the second coordinate plane; both directions are admissible.
    std::vector<std::vector<Rational>> preferred{unit(4, 1), unit(4, 3), unit(4, 0)};
    Flag flag = greedy_flag(s, origin(4), 2, preferred);
    REQUIRE(flag.vectors[0] == unit(4, 1));
    // unit(4,3) pairs with unit(4,1) under the form, so it is skipped.
    REQUIRE(flag.vectors[1] == unit(4, 0));
}

TEST_CASE("polar machinery validates input", "[cartan-test]") {
    ExteriorSystem s(4, {symplectic_r4()});
    SECTION("base point dimension") {
        REQUIRE_THROWS_WITH(generators_at(s, origin(3)),
                            Catch::Matchers::ContainsSubstring("dimension mismatch"));
    }
    SECTION("flag length bounds") {
        REQUIRE_THROWS_AS(greedy_flag(s, origin(4), 5), Error);
    }
    SECTION("basis vector dimension") {
        REQUIRE_THROWS_AS(is_integral_element(s, {origin(4), {unit(3, 0)}}), Error);
    }
}
