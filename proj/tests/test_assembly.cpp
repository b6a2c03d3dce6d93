#include "hermlab/assembly.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <numeric>

#include <random>

using namespace hermlab;

TEST_CASE("divisor power sums") {
    CHECK(sigma(1, 12) == Rational(28));
    CHECK(sigma(0, 1) == Rational(1));
    CHECK(sigma(0, 36) == Rational(9));
    CHECK(sigma(1, 7) == Rational(8));
    CHECK(sigma(-1, 4) == Rational(7, 4));
    std::mt19937 rng(9);
    for (int t = 0; t < 25; ++t) {
        long long a = 1 + rng() % 40, b = 1 + rng() % 40;
        if (std::gcd(a, b) != 1) continue;
        CHECK(sigma(1, a * b) == sigma(1, a) * sigma(1, b));
        CHECK(sigma(2, a * b) == sigma(2, a) * sigma(2, b));
    }
}

TEST_CASE("Hecke degree and Faltings height delta") {
    SECTION("j = 1") {
        auto h = hecke_faltings(1);
        CHECK(h.degree == 1);
        CHECK(h.height_delta.is_zero());
    }
    SECTION("prime j: ((p-1)/2) ln p") {
        for (long long p : {2LL, 3LL, 13LL}) {
            auto h = hecke_faltings(p);
            CHECK(h.degree == p + 1);
            LogLinear expect;
            expect.add_term(p, Rational(p - 1, 2));
            CHECK(h.height_delta == expect);
        }
    }
    SECTION("j = 4 gives 3 ln 2") {
        auto h = hecke_faltings(4);
        CHECK(h.degree == 7);
        LogLinear expect;
        expect.add_term(2, Rational(3));
        CHECK(h.height_delta == expect);
    }
    SECTION("numeric derivative of the global closed form, j <= 60") {
        for (long long j = 1; j <= 60; ++j) {
            auto h = hecke_faltings(j);
            Real step("1e-6");
            Real numer = (global_rank1_real(j, Real(1) / 2 + step) -
                          global_rank1_real(j, Real(1) / 2 - step)) /
                         (4 * step);
            Real exact = 0;
            for (const auto& [p, c] : h.height_delta.terms) exact += to_real(c) * log(Real(p));
            CHECK(abs(numer - exact) < Real("1e-6") * (1 + abs(exact)));
        }
    }
}

TEST_CASE("finite coefficient products for rank-1 T") {
    EngineOptions o;
    SECTION("T = [1], delta = -7: every local factor 1") {
        auto series = finite_coefficient({Rational(1)}, Discriminant(-7), 2, o);
        for (const auto& s : {Rational(0), Rational(1, 2), Rational(1)}) {
            PrimePowerProduct v = series.eval_exact(s);
            v.fold_all();
            CHECK(v.mant == 1);
            CHECK(v.exps.empty());
        }
    }
    SECTION("product equals j^{s+1/2} sigma_{-2s}(j) for j with unramified support") {
        // delta = -7: 3 and 5 are unramified and odd
        for (long long j : {3LL, 5LL, 9LL, 15LL, 45LL}) {
            auto series = finite_coefficient({Rational(j)}, Discriminant(-7), 2, o);
            for (const auto& s : {Rational(0), Rational(1, 2), Rational(-1, 2), Rational(1)})
                CHECK(series.eval_exact(s) == global_rank1_exact(j, s));
        }
    }
    SECTION("value at the near-central point is sigma_1(j)") {
        auto series = finite_coefficient({Rational(45)}, Discriminant(-7), 2, o);
        PrimePowerProduct v = series.eval_exact(Rational(1, 2));
        v.fold_all();
        CHECK(v.mant == sigma(1, 45));
        CHECK(v.exps.empty());
    }
    SECTION("multiplicativity over coprime j") {
        auto s15 = finite_coefficient({Rational(15)}, Discriminant(-7), 2, o);
        auto s3 = finite_coefficient({Rational(3)}, Discriminant(-7), 2, o);
        auto s5 = finite_coefficient({Rational(5)}, Discriminant(-7), 2, o);
        for (const auto& s : {Rational(0), Rational(1, 2), Rational(1)}) {
            PrimePowerProduct a = s15.eval_exact(s);
            PrimePowerProduct b = s3.eval_exact(s);
            for (const auto& [p, W] : s5.local) {
                (void)p;
            }
            PrimePowerProduct c = s5.eval_exact(s);
            PrimePowerProduct bc = b;
            bc.mant *= c.mant;
            for (const auto& [pp, e] : c.exps) {
                auto [it, fresh] = bc.exps.emplace(pp, e);
                if (!fresh) it->second += e;
            }
            CHECK(a == bc);
        }
    }
    SECTION("ramified support delta = -15 at j coprime to 15") {
        auto series = finite_coefficient({Rational(7)}, Discriminant(-15), 2, o);
        CHECK(series.eval_exact(Rational(1, 2)) == global_rank1_exact(7, Rational(1, 2)));
    }
}

TEST_CASE("corank-1 unfolding") {
    Discriminant D(-7);
    SECTION("functional-equation sign for (n,m) = (2,2)") {
        auto flat = [&](const Real& s) { return ComplexValue::from_real(global_rank1_real(6, s)); };
        for (double sv : {0.2, 0.7}) {
            ComplexValue up = corank1_unfold(2, 2, D, Real(1), flat, Real(sv));
            ComplexValue dn = corank1_unfold(2, 2, D, Real(1), flat, Real(-sv));
            CHECK(abs_diff(up, -dn) < Real("1e-9") * (1 + up.norm()));
        }
    }
    SECTION("constant flat series symmetry") {
        auto flat = [](const Real&) { return ComplexValue::from_real(Real(1)); };
        ComplexValue up = corank1_unfold(2, 2, D, Real(1), flat, Real("0.3"));
        ComplexValue dn = corank1_unfold(2, 2, D, Real(1), flat, Real("-0.3"));
        CHECK(abs_diff(up, -dn) < Real("1e-9") * (1 + up.norm()));
    }
    SECTION("s = 0: antisymmetry kills the value, derivative doubles the first term") {
        auto flat = [&](const Real& s) { return ComplexValue::from_real(global_rank1_real(4, s)); };
        ComplexValue v = corank1_unfold(2, 2, D, Real(1), flat, Real(0));
        CHECK(v.norm() < Real("1e-20"));
        Real h("1e-8");
        ComplexValue up = corank1_unfold(2, 2, D, Real(1), flat, h);
        ComplexValue dn = corank1_unfold(2, 2, D, Real(1), flat, -h);
        Real deriv = (up.re - dn.re) / (2 * h);
        auto term1 = [&](const Real& s) {
            return (corank1_ratio(2, s, D).via_lambda * flat(s + Real(1) / 2)).re;
        };
        Real d1 = (term1(h) - term1(-h)) / (2 * h);
        CHECK(abs(deriv - 2 * d1) < Real("1e-6") * (1 + abs(deriv)));
    }
}
