#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "csmoduli/rational.hpp"

using csm::BigInt;
using csm::Rational;

TEST_CASE("bigint arithmetic agrees with int64 on random inputs") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long long> d(-1000000000ll, 1000000000ll);
    for (int i = 0; i < 2000; ++i) {
        long long a = d(rng), b = d(rng);
        CHECK((BigInt(a) + BigInt(b)).to_ll() == a + b);
        CHECK((BigInt(a) - BigInt(b)).to_ll() == a - b);
        CHECK((BigInt(a) * BigInt(b)).to_string() ==
              std::to_string(static_cast<__int128>(a) * b > 0
                                 ? static_cast<long long>(static_cast<__int128>(a) * b)
                                 : static_cast<long long>(static_cast<__int128>(a) * b)));
        if (b != 0) {
            CHECK((BigInt(a) / BigInt(b)).to_ll() == a / b);
            CHECK((BigInt(a) % BigInt(b)).to_ll() == a % b);
        }
    }
}

TEST_CASE("bigint handles large products") {
    BigInt a = BigInt::from_string("123456789012345678901234567890");
    BigInt b = BigInt::from_string("-98765432109876543210");
    CHECK((a * b).to_string() == "-12193263113702179522496570642237463801111263526900");
    CHECK(((a * b) / b).to_string() == a.to_string());
    CHECK(BigInt::gcd(BigInt(48), BigInt(-36)).to_ll() == 12);
}

TEST_CASE("rational normalization and field ops") {
    Rational r(6, -8);
    CHECK(r.to_string() == "-3/4");
    CHECK((Rational(1, 3) + Rational(1, 6)) == Rational(1, 2));
    CHECK((Rational(2, 3) * Rational(9, 4)) == Rational(3, 2));
    CHECK((Rational(1, 7) / Rational(2, 7)) == Rational(1, 2));
    CHECK(Rational(5, 10) == Rational(1, 2));
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational::from_string("-0.25") == Rational(-1, 4));
    CHECK(Rational::from_string("7/21") == Rational(1, 3));
    CHECK(Rational(1, 3).to_double() == doctest::Approx(1.0 / 3));
}

TEST_CASE("rational field axioms on random small values") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> d(-20, 20);
    for (int i = 0; i < 500; ++i) {
        int an = d(rng), bn = d(rng), cn = d(rng);
        Rational a(an, 7), b(bn, 9), c(cn, 5);
        CHECK((a + b) * c == a * c + b * c);
        CHECK(a + (b + c) == (a + b) + c);
        CHECK(a * (b * c) == (a * b) * c);
        if (!b.is_zero()) CHECK(a / b * b == a);
    }
}
