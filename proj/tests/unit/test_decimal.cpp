#include "doctest.h"

#include "finmcp/decimal.hpp"

#include <cstdint>
#include <stdexcept>

using namespace finmcp;

TEST_CASE("parse accepts plain decimal literals") {
    auto big = Decimal::parse("5003000000");
    REQUIRE(big);
    CHECK(big->mantissa() == 5003);  // trailing zeros normalize into the exponent
    CHECK(big->exponent() == 6);
    CHECK(big->to_string() == "5003000000");

    auto frac = Decimal::parse("640.25");
    REQUIRE(frac);
    CHECK(frac->mantissa() == 64025);
    CHECK(frac->exponent() == -2);
    CHECK(frac->to_string() == "640.25");

    auto neg = Decimal::parse("-0.5");
    REQUIRE(neg);
    CHECK(neg->mantissa() == -5);
    CHECK(neg->exponent() == -1);
    CHECK(neg->to_string() == "-0.5");

    auto zero = Decimal::parse("0.00");
    REQUIRE(zero);
    CHECK(zero->is_zero());
    CHECK(zero->exponent() == 0);
    CHECK(zero->to_string() == "0");

    auto leading_dot = Decimal::parse(".5");
    REQUIRE(leading_dot);
    CHECK(leading_dot->to_string() == "0.5");

    auto plus = Decimal::parse("+7");
    REQUIRE(plus);
    CHECK(plus->mantissa() == 7);

    CHECK(Decimal::parse("9223372036854775807"));  // INT64_MAX fits
}

TEST_CASE("parse rejects everything that is not a plain literal") {
    CHECK_FALSE(Decimal::parse(""));
    CHECK_FALSE(Decimal::parse("-"));
    CHECK_FALSE(Decimal::parse("."));
    CHECK_FALSE(Decimal::parse("1.2.3"));
    CHECK_FALSE(Decimal::parse("1e5"));
    CHECK_FALSE(Decimal::parse("1,000"));
    CHECK_FALSE(Decimal::parse("abc"));
    CHECK_FALSE(Decimal::parse("12a"));
    CHECK_FALSE(Decimal::parse(" 1"));
    CHECK_FALSE(Decimal::parse("9223372036854775808"));  // INT64_MAX + 1
}

TEST_CASE("normalization makes equality canonical") {
    CHECK(Decimal(5000, 0) == Decimal(5, 3));
    CHECK(Decimal(0, 7) == Decimal(0, 0));
    CHECK(Decimal(5003, 6) != Decimal(5004, 6));
}

TEST_CASE("addition and subtraction are exact across exponents") {
    const Decimal a = *Decimal::parse("640.25");
    const Decimal b = *Decimal::parse("0.75");
    CHECK((a + b).to_string() == "641");

    const Decimal big = *Decimal::parse("5003000000");
    CHECK((big + *Decimal::parse("1")).to_string() == "5003000001");
    CHECK((big + Decimal()).to_string() == "5003000000");
    CHECK((Decimal() + big).to_string() == "5003000000");

    const Decimal end = *Decimal::parse("1230000000");
    const Decimal begin = *Decimal::parse("1050000000");
    CHECK((end - begin).to_string() == "180000000");
    CHECK((begin - end).to_string() == "-180000000");

    CHECK_THROWS_AS(Decimal(INT64_MAX, 0) + Decimal(INT64_MAX, 0), std::overflow_error);
}

TEST_CASE("shifted moves the decimal point exactly") {
    const Decimal units = *Decimal::parse("5003000000");
    CHECK(units.shifted(3).to_string() == "5003000");   // thousands
    CHECK(units.shifted(6).to_string() == "5003");      // millions
    CHECK(units.shifted(9).to_string() == "5.003");     // billions
    CHECK(units.shifted(6).shifted(-6) == units);
    CHECK(Decimal().shifted(6).is_zero());
}

TEST_CASE("differs_by_pow10 is the scale-identity predicate") {
    CHECK(differs_by_pow10(*Decimal::parse("5003000"), *Decimal::parse("5003"), 3));
    CHECK(differs_by_pow10(Decimal(), Decimal(), 3));
    CHECK_FALSE(differs_by_pow10(*Decimal::parse("5003"), *Decimal::parse("5004"), 0));
    CHECK_FALSE(differs_by_pow10(*Decimal::parse("5003000"), *Decimal::parse("5003"), 2));
    const Decimal v = *Decimal::parse("640.25");
    CHECK(differs_by_pow10(v, v.shifted(3), 3));
}

TEST_CASE("to_string renders minimal form") {
    CHECK(Decimal(0, 0).to_string() == "0");
    CHECK(Decimal(-420, 6).to_string() == "-420000000");
    CHECK(Decimal(5, -1).to_string() == "0.5");
    CHECK(Decimal(5, -3).to_string() == "0.005");
    CHECK(Decimal(-5, -3).to_string() == "-0.005");
    CHECK(Decimal(123456, -2).to_string() == "1234.56");
}

TEST_CASE("to_double approximates the exact value") {
    CHECK(Decimal::parse("640.25")->to_double() == doctest::Approx(640.25));
    CHECK(Decimal::parse("-0.5")->to_double() == doctest::Approx(-0.5));
    CHECK(Decimal::parse("5003000000")->to_double() == doctest::Approx(5.003e9));
}
