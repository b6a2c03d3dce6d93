#include "hermlab/density_engine.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace hermlab;
using namespace hermlab::detail;

namespace {

Integer direct_count(const GramMatrix& S, const GramMatrix& T, int k, const EngineOptions& o = {}) {
    TruncatedRing ring(S.ext(), k);
    return count_direct(decompose_blocks(S), scaled_reduce(T, ring), ring, T.rank(), o);
}

Integer brute_count(const GramMatrix& S, const GramMatrix& T, int k, const EngineOptions& o = {}) {
    TruncatedRing ring(S.ext(), k);
    return count_brute(S, scaled_reduce(T, ring), ring, T.rank(), o);
}

}  // namespace

TEST_CASE("frozen base counts at inert p=3") {
    auto ext = make_local(3, Splitting::inert);
    auto S1 = scalar_gram(ext, 1);
    CHECK(count_solutions(S1, scalar_gram(ext, 1), 1) == 4);
    CHECK(count_solutions(S1, scalar_gram(ext, 1), 2) == 12);
    CHECK(count_solutions(S1, scalar_gram(ext, 3), 2) == 0);
    CHECK(count_solutions(S1, GramMatrix(ext, 0), 3) == 1);  // m = 0

    auto d1 = local_density(S1, scalar_gram(ext, 1));
    CHECK(d1.value == Rational(4, 3));
    CHECK(d1.stabilized_at == 2);
    auto d3 = local_density(S1, scalar_gram(ext, 3));
    CHECK(d3.value == 0);
    CHECK(d3.stabilized_at == 3);

    // hand-verified rank-2 values
    CHECK(local_density(identity_gram(ext, 2), scalar_gram(ext, 1)).value == Rational(8, 9));
    CHECK(local_density(identity_gram(ext, 2), scalar_gram(ext, 3)).value == Rational(32, 27));
    CHECK(local_density(identity_gram(ext, 2), scalar_gram(ext, 9)).value == Rational(104, 81));
}

TEST_CASE("short circuits and errors") {
    auto ext = make_local(3, Splitting::inert);
    // n < m
    CHECK(local_density(scalar_gram(ext, 1), identity_gram(ext, 2)).value == 0);
    // T outside Herm^*
    CHECK(local_density(identity_gram(ext, 2), scalar_gram(ext, Rational(1, 3))).value == 0);
    // S outside Herm^*
    CHECK_THROWS_AS(local_density(scalar_gram(ext, Rational(1, 3)), scalar_gram(ext, 1)), NotIntegral);
    // NotStabilized carries both values
    EngineOptions tight;
    tight.k_max = 2;
    try {
        local_density(scalar_gram(ext, 1), scalar_gram(ext, 9), tight);
        FAIL("expected NotStabilized");
    } catch (const NotStabilized& e) {
        CHECK(e.previous != e.last);
    }
    EngineOptions small_budget;
    small_budget.budget = 10;
    CHECK_THROWS_AS(local_density(identity_gram(ext, 2), identity_gram(ext, 2), small_budget),
                    BudgetExceeded);
}

TEST_CASE("engine routes agree: convolution vs brute for m = 1") {
    EngineOptions o;
    for (auto spl : {Splitting::inert, Splitting::split}) {
        for (long long p : {2LL, 3LL}) {
            auto ext = make_local(p, spl);
            auto S = direct_sum(scalar_gram(ext, 1), standard_hyperbolic(ext));
            for (int k : {1, 2}) {
                for (long long t : {1LL, p, 2 * p + 1}) {
                    auto T = scalar_gram(ext, t);
                    CHECK(count_solutions(S, T, k, o) == brute_count(S, T, k, o));
                }
            }
        }
    }
    auto ext7 = make_local(7, Splitting::ramified, -1);
    auto S7 = standard_hyperbolic(ext7);
    for (int k : {1, 2})
        for (long long t : {1LL, 3LL, 7LL})
            CHECK(count_solutions(S7, scalar_gram(ext7, t), k, o) ==
                  brute_count(S7, scalar_gram(ext7, t), k, o));
}

TEST_CASE("engine routes agree: peel vs direct vs brute for m >= 2") {
    EngineOptions o;
    for (auto spl : {Splitting::inert, Splitting::split}) {
        for (long long p : {2LL, 3LL, 5LL}) {
            auto ext = make_local(p, spl);
            for (int n : {2, 3}) {
                auto S = identity_gram(ext, n);
                auto T = identity_gram(ext, 2);
                int kmax = p == 5 ? 1 : 2;
                for (int k = 1; k <= kmax; ++k) {
                    Integer pl = count_solutions(S, T, k, o);
                    CHECK(pl == direct_count(S, T, k, o));
                    if (p == 2 || k == 1) CHECK(pl == brute_count(S, T, k, o));
                }
            }
        }
    }
    // dyadic m=3 and k=3 peel validation against independent routes
    auto e2 = make_local(2, Splitting::inert);
    CHECK(count_solutions(identity_gram(e2, 3), identity_gram(e2, 3), 1, o) ==
          direct_count(identity_gram(e2, 3), identity_gram(e2, 3), 1, o));
    CHECK(count_solutions(identity_gram(e2, 3), identity_gram(e2, 3), 2, o) ==
          brute_count(identity_gram(e2, 3), identity_gram(e2, 3), 2, o));
    CHECK(count_solutions(identity_gram(e2, 2), identity_gram(e2, 2), 3, o) ==
          direct_count(identity_gram(e2, 2), identity_gram(e2, 2), 3, o));
    // peel with hyperbolic blocks in S
    auto e3 = make_local(3, Splitting::inert);
    auto Sh = direct_sum(identity_gram(e3, 1), standard_hyperbolic(e3));
    auto T2 = identity_gram(e3, 2);
    CHECK(count_solutions(Sh, T2, 2, o) == direct_count(Sh, T2, 2, o));
    // non-unit pivot residual path: T = diag(1, p)
    auto Tmix = diagonal_gram(e3, {Rational(1), Rational(3)});
    CHECK(count_solutions(identity_gram(e3, 3), Tmix, 2, o) ==
          direct_count(identity_gram(e3, 3), Tmix, 2, o));
}

TEST_CASE("GL invariance of counts") {
    EngineOptions o;
    std::mt19937 rng(17);
    for (auto spl : {Splitting::inert, Splitting::split}) {
        auto ext = make_local(3, spl);
        auto S = identity_gram(ext, 2);
        auto T = scalar_gram(ext, 1);
        for (int trial = 0; trial < 4; ++trial) {
            // random unimodular g = I + strictly upper entry, and a diagonal unit twist
            std::vector<FieldElement> Y = {FieldElement::from_rational(ext, 1),
                                           FieldElement(Rational(static_cast<int>(rng() % 3)),
                                                        Rational(static_cast<int>(rng() % 3))),
                                           FieldElement(Rational(0), Rational(0)),
                                           FieldElement::from_rational(ext, 1)};
            auto Sg = congruence(S, Y, 2);
            for (int k : {1, 2, 3})
                CHECK(count_solutions(S, T, k, o) == count_solutions(Sg, T, k, o));
            // and in the T slot at rank 2
            auto T2 = identity_gram(ext, 2);
            auto Tg = congruence(T2, Y, 2);
            CHECK(count_solutions(identity_gram(ext, 3), T2, 2, o) ==
                  count_solutions(identity_gram(ext, 3), Tg, 2, o));
        }
    }
}

TEST_CASE("normalization exponent: stabilized counts scale by q^{m(2n-m)}") {
    auto ext = make_local(3, Splitting::inert);
    auto S = identity_gram(ext, 2);
    auto T = scalar_gram(ext, 1);
    auto d = local_density(S, T);
    REQUIRE(d.raw_counts.size() >= 2);
    auto [k1, c1] = d.raw_counts[d.raw_counts.size() - 2];
    auto [k2, c2] = d.raw_counts[d.raw_counts.size() - 1];
    CHECK(k2 == k1 + 1);
    CHECK(c2 == c1 * pow_int(3, 1 * (2 * 2 - 1)));
}

TEST_CASE("density values are nonnegative rationals with q-power denominators") {
    std::mt19937 rng(23);
    for (auto spl : {Splitting::inert, Splitting::split}) {
        auto ext = make_local(3, spl);
        for (int trial = 0; trial < 6; ++trial) {
            long long t = 1 + rng() % 12;
            auto d = local_density(identity_gram(ext, 2), scalar_gram(ext, t));
            CHECK(d.value >= 0);
            Integer den = denominator(d.value);
            while (den % 3 == 0) den /= 3;
            CHECK(den == 1);
        }
    }
}

TEST_CASE("counts are deterministic and worker-count independent") {
    auto ext = make_local(5, Splitting::inert);
    auto S = direct_sum(identity_gram(ext, 2), standard_hyperbolic(ext));
    auto T = scalar_gram(ext, 25);
    EngineOptions one, four;
    one.threads = 1;
    four.threads = 4;
    for (int k : {2, 3}) CHECK(count_solutions(S, T, k, one) == count_solutions(S, T, k, four));
}

TEST_CASE("counts are invariant under pi -> -pi in the ramified model") {
    auto ext = make_local(7, Splitting::ramified, -1);
    GramMatrix flipped(ext, 2);
    flipped.set(0, 1, neg(standard_hyperbolic(ext).at(0, 1)));
    for (int k : {1, 2})
        for (long long t : {1LL, 7LL})
            CHECK(count_solutions(standard_hyperbolic(ext), scalar_gram(ext, t), k) ==
                  count_solutions(flipped, scalar_gram(ext, t), k));
}
