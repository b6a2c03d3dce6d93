#include "hermlab/field_data.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <numeric>

using namespace hermlab;

TEST_CASE("prime classification follows the Kronecker symbol") {
    CHECK(classify_prime(Discriminant(-7), 2).splitting == Splitting::split);
    CHECK(classify_prime(Discriminant(-4), 3).splitting == Splitting::inert);
    auto r = classify_prime(Discriminant(-7), 7);
    CHECK(r.splitting == Splitting::ramified);
    CHECK(r.different_exponent == 1);
    CHECK(r.q == 7);
    CHECK_THROWS_AS(classify_prime(Discriminant(-4), 2), RamifiedTwo);
    CHECK_THROWS_AS(classify_prime(Discriminant(-8), 2), RamifiedTwo);

    // p not dividing 2*delta is never ramified
    for (long long d : {-3LL, -7LL, -15LL, -20LL, -23LL}) {
        Discriminant D(d);
        for (long long p : {3LL, 5LL, 7LL, 11LL, 13LL}) {
            if ((2 * d) % p == 0) continue;
            CHECK(classify_prime(D, p).splitting != Splitting::ramified);
        }
    }
}

TEST_CASE("class numbers by reduced-form counting") {
    CHECK(class_number(Discriminant(-3)) == 1);
    CHECK(class_number(Discriminant(-4)) == 1);
    CHECK(class_number(Discriminant(-7)) == 1);
    CHECK(class_number(Discriminant(-8)) == 1);
    CHECK(class_number(Discriminant(-15)) == 2);
    CHECK(class_number(Discriminant(-23)) == 3);
    CHECK(class_number(Discriminant(-47)) == 5);
}

TEST_CASE("unit counts and ramified prime counts") {
    CHECK(unit_count(Discriminant(-3)) == 6);
    CHECK(unit_count(Discriminant(-4)) == 4);
    CHECK(unit_count(Discriminant(-20)) == 2);
    CHECK(ramified_prime_count(Discriminant(-4)) == 1);
    CHECK(ramified_prime_count(Discriminant(-15)) == 2);
    CHECK(ramified_prime_count(Discriminant(-7)) == 1);
}

TEST_CASE("discriminant validation") {
    CHECK_THROWS(Discriminant(5));
    CHECK_THROWS(Discriminant(-5));   // -5 = 3 mod 4
    CHECK_THROWS(Discriminant(-9));   // not squarefree
    CHECK_THROWS(Discriminant(-12));  // -12/4 = -3 = 1 mod 4, not fundamental
    CHECK_NOTHROW(Discriminant(-20));
    CHECK_NOTHROW(Discriminant(-24));
}

TEST_CASE("Kronecker symbol multiplicativity in the lower argument") {
    for (long long d : {-3LL, -4LL, -7LL, -8LL, -15LL, -20LL, -23LL, -24LL, -31LL, -35LL, -39LL, -40LL, -43LL, -47LL}) {
        for (long long m = 1; m <= 50; m += 2)
            for (long long n = 1; n <= 50; n += 2) {
                if (std::gcd(m, n) != 1) continue;
                CHECK(kronecker(d, m * n) == kronecker(d, m) * kronecker(d, n));
            }
    }
}

TEST_CASE("standalone local contexts") {
    auto e2 = make_local(2, Splitting::inert);
    CHECK(e2.omega_model);
    auto e3 = make_local(3, Splitting::inert);
    CHECK(e3.inert_u == 2);
    auto e7 = make_local(7, Splitting::ramified, -1);
    CHECK(e7.different_exponent == 1);
    CHECK_THROWS_AS(make_local(2, Splitting::ramified), RamifiedTwo);
}
