#include "doctest.h"

#include "finmcp/util.hpp"
#include "helpers.hpp"

#include <filesystem>
#include <stdexcept>

using namespace finmcp;

TEST_CASE("trim strips surrounding whitespace only") {
    CHECK(trim("  a b  ") == "a b");
    CHECK(trim("") == "");
    CHECK(trim("\t\n x") == "x");
    CHECK(trim("   \t ") == "");
    CHECK(trim("solid") == "solid");
}

TEST_CASE("to_lower and iequals") {
    CHECK(to_lower("FY2023Q4") == "fy2023q4");
    CHECK(to_lower("") == "");
    CHECK(iequals("FixtureCorp", "fixturecorp"));
    CHECK(iequals("FXC", "fxc"));
    CHECK_FALSE(iequals("abc", "abcd"));
    CHECK_FALSE(iequals("abc", "abd"));
    CHECK(iequals("", ""));
}

TEST_CASE("split keeps empty fields") {
    CHECK(split("a,b,,c", ',') == std::vector<std::string>{"a", "b", "", "c"});
    CHECK(split("", ',') == std::vector<std::string>{""});
    CHECK(split("x,", ',') == std::vector<std::string>{"x", ""});
    CHECK(split(",x", ',') == std::vector<std::string>{"", "x"});
}

TEST_CASE("file helpers round-trip and fail loudly") {
    testutil::TempDir tmp;
    const std::string path = tmp.file("a.txt");
    write_file(path, "line1\nline2\n");
    CHECK(read_file(path) == "line1\nline2\n");

    write_file_atomic(path, "replaced");
    CHECK(read_file(path) == "replaced");
    CHECK_FALSE(std::filesystem::exists(path + ".tmp"));

    CHECK_THROWS_AS(read_file(tmp.file("missing.txt")), std::runtime_error);
}

TEST_CASE("is_valid_iso_date is calendar-aware") {
    CHECK(is_valid_iso_date("2023-06-15"));
    CHECK(is_valid_iso_date("2024-02-29"));   // leap year
    CHECK(is_valid_iso_date("2000-02-29"));   // 400-year leap
    CHECK(is_valid_iso_date("2023-12-31"));
    CHECK_FALSE(is_valid_iso_date("2023-02-29"));  // non-leap
    CHECK_FALSE(is_valid_iso_date("1900-02-29"));  // century non-leap
    CHECK_FALSE(is_valid_iso_date("2023-04-31"));
    CHECK_FALSE(is_valid_iso_date("2023-13-01"));
    CHECK_FALSE(is_valid_iso_date("2023-00-10"));
    CHECK_FALSE(is_valid_iso_date("2023-06-00"));
    CHECK_FALSE(is_valid_iso_date("2023-6-15"));
    CHECK_FALSE(is_valid_iso_date("20230615"));
    CHECK_FALSE(is_valid_iso_date("2023-06-15 "));
    CHECK_FALSE(is_valid_iso_date("2023/06/15"));
    CHECK_FALSE(is_valid_iso_date(""));
}

TEST_CASE("parse_fiscal_period accepts FY and FY+quarter labels") {
    auto annual = parse_fiscal_period("FY2023");
    REQUIRE(annual);
    CHECK(annual->year == 2023);
    CHECK(annual->quarter == 0);
    CHECK(annual->label() == "FY2023");

    auto quarterly = parse_fiscal_period("FY2023Q2");
    REQUIRE(quarterly);
    CHECK(quarterly->year == 2023);
    CHECK(quarterly->quarter == 2);
    CHECK(quarterly->label() == "FY2023Q2");

    CHECK_FALSE(parse_fiscal_period("FY2023Q5"));
    CHECK_FALSE(parse_fiscal_period("FY2023Q0"));
    CHECK_FALSE(parse_fiscal_period("FY23"));
    CHECK_FALSE(parse_fiscal_period("fy2023"));
    CHECK_FALSE(parse_fiscal_period("FY2023Q"));
    CHECK_FALSE(parse_fiscal_period("FY2023X2"));
    CHECK_FALSE(parse_fiscal_period("FY2023Q22"));
    CHECK_FALSE(parse_fiscal_period("2023"));
    CHECK_FALSE(parse_fiscal_period(""));
}
