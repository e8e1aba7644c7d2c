#include <doctest.h>

#include <random>

#include "ppdb/rational.hpp"

using ppdb::Rational;

TEST_CASE("rational normalization and printing") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(-2, 4) == Rational(1, -2));
    CHECK(Rational(0, 7) == Rational(0));
    CHECK(Rational(3, 4).to_string() == "3/4");
    CHECK(Rational(-1, 6).to_string() == "-1/6");
    CHECK(Rational(5).to_string() == "5");
    CHECK(Rational::parse("3/4") == Rational(3, 4));
    CHECK(Rational::parse("-7") == Rational(-7));
}

TEST_CASE("rational arithmetic") {
    CHECK(Rational(1, 6) + Rational(1, 2) == Rational(2, 3));
    CHECK(Rational(1, 6) / (Rational(1, 6) + Rational(1, 2)) == Rational(1, 4));
    CHECK(Rational(1, 3) * Rational(3, 5) == Rational(1, 5));
    CHECK(Rational(1, 2) - Rational(2, 3) == Rational(-1, 6));
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
    CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);
}

TEST_CASE("rational overflow is detected, not wrapped") {
    Rational big(INT64_MAX, 1);
    CHECK_THROWS_AS(big * big, std::overflow_error);
    CHECK_THROWS_AS(big + Rational(1, 2), std::overflow_error);
}

TEST_CASE("rational field laws on random small values") {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<std::int64_t> num(-50, 50), den(1, 50);
    for (int i = 0; i < 1000; ++i) {
        Rational a(num(rng), den(rng)), b(num(rng), den(rng)), c(num(rng), den(rng));
        CHECK(a + b == b + a);
        CHECK((a + b) + c == a + (b + c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a - a == Rational(0));
        if (!(b == Rational(0))) CHECK((a / b) * b == a);
        CHECK(Rational::parse(a.to_string()) == a);
    }
}
