#include "hermlab/hermitian.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace hermlab;

TEST_CASE("field element arithmetic per model") {
    SECTION("conjugation is an involution, trace and norm land in Q") {
        std::mt19937 rng(7);
        for (auto ext : {make_local(3, Splitting::inert), make_local(2, Splitting::inert),
                         make_local(5, Splitting::split), make_local(7, Splitting::ramified, -1)}) {
            for (int t = 0; t < 50; ++t) {
                FieldElement x(Rational(static_cast<int>(rng() % 19) - 9, 1 + rng() % 4),
                               Rational(static_cast<int>(rng() % 19) - 9, 1 + rng() % 4));
                CHECK(conj(ext, conj(ext, x)) == x);
                FieldElement tr = add(x, conj(ext, x));
                CHECK(is_rational_element(ext, tr));
                CHECK(trace(ext, x) == rational_part(ext, tr));
                FieldElement nm = mul(ext, x, conj(ext, x));
                CHECK(is_rational_element(ext, nm));
                CHECK(norm(ext, x) == rational_part(ext, nm));
            }
        }
    }
    SECTION("split norm and trace are coordinatewise product and sum") {
        auto ext = make_local(3, Splitting::split);
        std::mt19937 rng(11);
        for (int t = 0; t < 30; ++t) {
            Rational a(static_cast<int>(rng() % 15) - 7), b(static_cast<int>(rng() % 15) - 7);
            FieldElement x(a, b);
            CHECK(norm(ext, x) == a * b);
            CHECK(trace(ext, x) == a + b);
        }
    }
}

TEST_CASE("standard hyperbolic plane") {
    SECTION("unramified: [[0,1],[1,0]], det -1, self-dual") {
        auto ext = make_local(3, Splitting::inert);
        GramMatrix h = standard_hyperbolic(ext);
        CHECK(h.at(0, 1) == FieldElement::from_rational(ext, 1));
        CHECK(h.det() == Rational(-1));
        CHECK(in_dual_star(h));
        CHECK(val_p(h.det(), 3) == 0);
    }
    SECTION("ramified: off-diagonal pi^{-1}, sign forced by conj(pi) = -pi") {
        auto ext = make_local(7, Splitting::ramified, -1);
        GramMatrix h = standard_hyperbolic(ext);
        CHECK(h.at(0, 1).a == 0);
        CHECK(h.at(1, 0) == neg(h.at(0, 1)));
        CHECK(in_dual_star(h));
        // pi^{-1} * pi = 1
        FieldElement pi(Rational(0), Rational(1));
        CHECK(mul(ext, h.at(0, 1), pi) == FieldElement::from_rational(ext, 1));
    }
}

TEST_CASE("unit rank one and direct sums") {
    auto ext = make_local(3, Splitting::inert);
    CHECK(unit_rank_one(ext).rank() == 1);
    CHECK_THROWS_AS(unit_rank_one(make_local(7, Splitting::ramified, -1)), RamifiedUnsupported);
    GramMatrix a = identity_gram(ext, 2), b = standard_hyperbolic(ext);
    GramMatrix s = direct_sum(a, b);
    CHECK(s.rank() == 4);
    CHECK(s.at(2, 3) == FieldElement::from_rational(ext, 1));
    CHECK(s.at(0, 2) == FieldElement(Rational(0), Rational(0)));
    CHECK_THROWS_AS(direct_sum(a, identity_gram(make_local(5, Splitting::inert), 1)), ContextMismatch);
}

TEST_CASE("dual-star membership") {
    auto e3 = make_local(3, Splitting::inert);
    CHECK(in_dual_star(diagonal_gram(e3, {Rational(1), Rational(3)})));
    CHECK_FALSE(in_dual_star(scalar_gram(e3, Rational(1, 3))));
    auto e7 = make_local(7, Splitting::ramified, -1);
    CHECK(in_dual_star(standard_hyperbolic(e7)));
    // pi^{-2}-sized off-diagonal entries fall outside d^{-1} O
    GramMatrix bad(e7, 2);
    bad.set(0, 1, FieldElement(Rational(0), Rational(1, 49)));
    CHECK_FALSE(in_dual_star(bad));
}

TEST_CASE("conjugate symmetry is preserved by construction") {
    auto ext = make_local(5, Splitting::split);
    GramMatrix g(ext, 2);
    g.set(0, 0, FieldElement::from_rational(ext, 2));
    g.set(1, 1, FieldElement::from_rational(ext, 1));
    g.set(0, 1, FieldElement(Rational(1), Rational(4)));
    CHECK_NOTHROW(g.check_conjugate_symmetric());
    CHECK(g.at(1, 0) == conj(ext, g.at(0, 1)));
    CHECK(g.det() == Rational(2) - Rational(4));  // 2*1 - 1*4 per coordinate
}
