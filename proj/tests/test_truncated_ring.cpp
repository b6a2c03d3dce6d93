#include "hermlab/truncated_ring.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>

using namespace hermlab;

TEST_CASE("ring sizes are p^{2k} in every model") {
    CHECK(TruncatedRing(make_local(3, Splitting::inert), 1).size == 9);
    CHECK(TruncatedRing(make_local(2, Splitting::split), 2).size == 16);
    CHECK(TruncatedRing(make_local(7, Splitting::ramified, -1), 1).size == 49);
    int count = 0;
    TruncatedRing r(make_local(3, Splitting::inert), 1);
    for (auto x : enumerate(r)) {
        (void)x;
        ++count;
    }
    CHECK(count == 9);
}

TEST_CASE("ring axioms on sampled elements") {
    for (auto ext : {make_local(3, Splitting::inert), make_local(2, Splitting::inert),
                     make_local(3, Splitting::split), make_local(7, Splitting::ramified, -1)}) {
        TruncatedRing r(ext, 2);
        std::mt19937 rng(5);
        for (int t = 0; t < 60; ++t) {
            Rel a = r.from_index(rng() % r.size), b = r.from_index(rng() % r.size),
                c = r.from_index(rng() % r.size);
            CHECK(r.mul(a, b) == r.mul(b, a));
            CHECK(r.mul(a, r.mul(b, c)) == r.mul(r.mul(a, b), c));
            CHECK(r.mul(a, r.add(b, c)) == r.add(r.mul(a, b), r.mul(a, c)));
            CHECK(r.conj(r.conj(a)) == a);
            CHECK(r.conj(r.mul(a, b)) == r.mul(r.conj(a), r.conj(b)));
        }
    }
}

TEST_CASE("reduction maps are ring homomorphisms with fibers of size p^2") {
    for (auto ext : {make_local(3, Splitting::inert), make_local(2, Splitting::split),
                     make_local(3, Splitting::ramified, -1)}) {
        TruncatedRing hi(ext, 2), lo(ext, 1);
        std::map<std::uint64_t, int> fibers;
        for (auto x : enumerate(hi)) fibers[lo.to_index(hi.push_down(x, lo))] += 1;
        CHECK(fibers.size() == lo.size);
        for (auto& [k, c] : fibers) CHECK(c == ext.p * ext.p);
        std::mt19937 rng(3);
        for (int t = 0; t < 40; ++t) {
            Rel a = hi.from_index(rng() % hi.size), b = hi.from_index(rng() % hi.size);
            CHECK(hi.push_down(hi.mul(a, b), lo) == lo.mul(hi.push_down(a, lo), hi.push_down(b, lo)));
            CHECK(hi.push_down(hi.conj(a), lo) == lo.conj(hi.push_down(a, lo)));
        }
    }
}

TEST_CASE("inert norm map is surjective onto units with fibers p^{k-1}(p+1)") {
    for (long long p : {2LL, 3LL, 5LL}) {
        for (int k : {1, 2}) {
            TruncatedRing r(make_local(p, Splitting::inert), k);
            std::map<std::uint32_t, long long> fibers;
            for (auto x : enumerate(r))
                if (r.is_unit(x)) fibers[r.norm(x)] += 1;
            // unit target count: phi(p^k) = p^{k-1}(p-1)
            std::uint64_t pk = r.pk;
            long long expected_targets = static_cast<long long>(pk - pk / p);
            CHECK(static_cast<long long>(fibers.size()) == expected_targets);
            long long fiber = static_cast<long long>(pk / p) * (p + 1);
            for (auto& [v, c] : fibers) CHECK(c == fiber);
        }
    }
}

TEST_CASE("involution fixes exactly the rational part") {
    SECTION("inert and ramified: the image of Z/p^k") {
        for (auto ext : {make_local(3, Splitting::inert), make_local(7, Splitting::ramified, -1)}) {
            TruncatedRing r(ext, 2);
            long long fixed = 0;
            for (auto x : enumerate(r))
                if (r.conj(x) == x) ++fixed;
            CHECK(fixed == static_cast<long long>(r.pk));
        }
    }
    SECTION("inert p=2 (omega model)") {
        TruncatedRing r(make_local(2, Splitting::inert), 3);
        long long fixed = 0;
        for (auto x : enumerate(r))
            if (r.conj(x) == x) ++fixed;
        // conj(a + bw) = (a - b) - bw: fixed forces b = 0
        CHECK(fixed == static_cast<long long>(r.pk));
    }
    SECTION("split: the diagonal") {
        TruncatedRing r(make_local(3, Splitting::split), 2);
        long long fixed = 0;
        for (auto x : enumerate(r))
            if (r.conj(x) == x) ++fixed;
        CHECK(fixed == static_cast<long long>(r.pk));
    }
}

TEST_CASE("herm residue test on the scaled residue matrix") {
    auto ext = make_local(7, Splitting::ramified, -1);
    TruncatedRing r(ext, 1);
    std::vector<Rel> zero(1, Rel{0, 0});
    CHECK(herm_residue_test(zero, 1, r));
    std::vector<Rel> bad(1, Rel{0, 1});
    CHECK_FALSE(herm_residue_test(bad, 1, r));
    // unramified: entry p^k on the diagonal reduces to zero
    auto e3 = make_local(3, Splitting::inert);
    TruncatedRing r3(e3, 2);
    std::vector<Rel> nine(1, Rel{static_cast<std::uint32_t>(9 % r3.pk), 0});
    CHECK(herm_residue_test(nine, 1, r3));
}

TEST_CASE("p^k width guard") {
    CHECK_THROWS_AS(TruncatedRing(make_local(3, Splitting::inert), 30), BudgetExceeded);
}
