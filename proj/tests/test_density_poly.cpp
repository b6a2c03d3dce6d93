#include "hermlab/density_poly.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace hermlab;

TEST_CASE("augmentation constructors") {
    auto ext = make_local(3, Splitting::inert);
    auto S = scalar_gram(ext, 1);
    CHECK(augment_hyperbolic(S, 0).rank() == 1);
    CHECK(augment_hyperbolic(S, 2).rank() == 5);
    CHECK(augment_unit(S, 2).rank() == 3);
    CHECK(augment_unit(S, 2).at(2, 2) == FieldElement::from_rational(ext, 1));
    CHECK_THROWS_AS(augment_unit(scalar_gram(make_local(7, Splitting::ramified, -1), 1), 1),
                    RamifiedUnsupported);
}

TEST_CASE("interpolation nodes and certification at inert p=3") {
    auto ext = make_local(3, Splitting::inert);
    auto S = scalar_gram(ext, 1);
    SECTION("T = [1]: P(X) = 1 + X/3, P(1) = Den(S,T)") {
        auto P = interpolate(S, scalar_gram(ext, 1));
        CHECK(P.eval(1) == Rational(4, 3));
        CHECK(P.degree() == 1);
        CHECK(P.coeffs[0] == Rational(1));
        CHECK(P.coeffs[1] == Rational(1, 3));
        CHECK(P.degree_certified_to == 2);
    }
    SECTION("T = [3]: P(1) = 0, positive at the first augmented node") {
        auto P = interpolate(S, scalar_gram(ext, 3));
        CHECK(P.eval(1) == 0);
        CHECK(P.eval(Rational(1, 9)) == local_density(augment_hyperbolic(S, 1), scalar_gram(ext, 3)).value);
        CHECK(P.eval(Rational(1, 9)) > 0);
    }
    SECTION("T outside Herm^* gives the zero polynomial") {
        auto P = interpolate(S, scalar_gram(ext, Rational(1, 3)));
        CHECK(P.is_zero());
    }
}

TEST_CASE("unit augmentation evaluation rule") {
    SECTION("inert: nodes at (-q)^{-r}") {
        auto ext = make_local(3, Splitting::inert);
        auto S = scalar_gram(ext, 1);
        for (long long t : {1LL, 3LL}) {
            auto P = interpolate(S, scalar_gram(ext, t));
            CHECK(unit_augment_check(S, scalar_gram(ext, t), P, 3));
        }
        // explicit r = 1 instance: Den(diag(1,1),[1]) = P(-1/3)
        auto P = interpolate(S, scalar_gram(ext, 1));
        CHECK(P.eval(Rational(-1, 3)) == local_density(identity_gram(ext, 2), scalar_gram(ext, 1)).value);
    }
    SECTION("split: nodes at q^{-r}") {
        auto ext = make_local(2, Splitting::split);
        auto S = scalar_gram(ext, 1);
        auto P = interpolate(S, scalar_gram(ext, 1));
        CHECK(unit_augment_check(S, scalar_gram(ext, 1), P, 3));
        CHECK(P.eval(Rational(1, 2)) == local_density(identity_gram(ext, 2), scalar_gram(ext, 1)).value);
    }
    SECTION("r = 0 is an interpolation node on both rules") {
        auto ext = make_local(5, Splitting::inert);
        auto S = scalar_gram(ext, 1);
        auto T = scalar_gram(ext, 5);
        auto P = interpolate(S, T);
        CHECK(P.eval(1) == local_density(S, T).value);
    }
}

TEST_CASE("basis independence of the polynomial for congruent T") {
    auto ext = make_local(3, Splitting::inert);
    auto S = identity_gram(ext, 3);
    auto T = identity_gram(ext, 2);
    std::vector<FieldElement> Y = {FieldElement::from_rational(ext, 1), FieldElement(Rational(1), Rational(1)),
                                   FieldElement(Rational(0), Rational(0)), FieldElement::from_rational(ext, 1)};
    auto Tg = congruence(T, Y, 2);
    CHECK(interpolate(S, T) == interpolate(S, Tg));
}

TEST_CASE("degree cap error") {
    auto ext = make_local(3, Splitting::inert);
    auto S = scalar_gram(ext, 1);
    CHECK_THROWS_AS(interpolate(S, scalar_gram(ext, 9), 0), DegreeCapExceeded);
}
