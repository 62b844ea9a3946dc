#include "bimet/rational.hpp"

#include <doctest.h>

#include <random>

using bimet::Rational;

TEST_CASE("rational normalizes sign and gcd") {
    Rational r(6, -4);
    CHECK(r.numerator() == -3);
    CHECK(r.denominator() == 2);
    CHECK(bimet::to_string(Rational(0, 7)) == "0/1");
    CHECK(bimet::to_string(Rational(3)) == "3/1");
    CHECK_THROWS_AS(Rational(1, 0), bimet::Error);
}

TEST_CASE("rational arithmetic and ordering") {
    CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
    CHECK(Rational(1, 2) - Rational(3, 4) == Rational(-1, 4));
    CHECK(Rational(2, 3) * Rational(9, 4) == Rational(3, 2));
    CHECK(Rational(1, 2) / Rational(1, 4) == Rational(2));
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(-1, 2) < Rational(-1, 3));
    CHECK(bimet::ceil(Rational(7, 3)) == 3);
    CHECK(bimet::floor(Rational(-7, 3)) == -3);
    CHECK(bimet::ceil(Rational(-7, 3)) == -2);
}

TEST_CASE("rational parse round-trips to_string") {
    CHECK(bimet::parse_rational("5/10") == Rational(1, 2));
    CHECK(bimet::parse_rational("-3") == Rational(-3));
    CHECK(bimet::parse_rational(" 7/2 ") == Rational(7, 2));
    CHECK_THROWS_AS(bimet::parse_rational("1/0"), bimet::Error);
    CHECK_THROWS_AS(bimet::parse_rational("x"), bimet::Error);
    CHECK_THROWS_AS(bimet::parse_rational("1/2/3"), bimet::Error);
}

TEST_CASE("rational field identities on random values") {
    std::mt19937_64 rng(1);
    auto draw = [&] {
        std::int64_t d = 1 + static_cast<std::int64_t>(rng() % 50);
        std::int64_t n = static_cast<std::int64_t>(rng() % 201) - 100;
        return Rational(n, d);
    };
    for (int i = 0; i < 2000; ++i) {
        Rational a = draw(), b = draw(), c = draw();
        CHECK((a + b) - b == a);
        CHECK(a * (b + c) == a * b + a * c);
        if (b != 0) CHECK((a / b) * b == a);
        CHECK((a < b) == (a - b < 0));
        CHECK(bimet::parse_rational(bimet::to_string(a)) == a);
    }
}

TEST_CASE("rational comparison does not overflow on large terms") {
    Rational big(INT64_MAX / 3, 7), other(INT64_MAX / 5, 11);
    CHECK(other < big);
}
