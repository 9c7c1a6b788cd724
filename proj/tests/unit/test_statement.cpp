#include "doctest.h"

#include "finmcp/statement.hpp"

#include <vector>

using namespace finmcp;

namespace {

StatementTable small_income() {
    StatementTable t;
    t.subject = "TestCo";
    t.kind = StatementKind::Income;
    t.columns = {"FY2023", "FY2022"};
    t.currency = "USD";
    t.scale_applied = Scale::Millions;
    Row revenue{"Revenue",
                {Cell::of_number(*Decimal::parse("5003")), Cell::of_number(*Decimal::parse("4690"))},
                true,
                ""};
    Row net{"Net income", {Cell::of_number(*Decimal::parse("640.25")), Cell::missing()}, true, ""};
    t.rows = {revenue, net};
    return t;
}

}  // namespace

TEST_CASE("kind slugs form a bijection over all 11 kinds") {
    const std::vector<StatementKind> kinds = {
        StatementKind::BalanceSheet,   StatementKind::Income,
        StatementKind::CashFlow,       StatementKind::BusinessSegments,
        StatementKind::GeographicSegments, StatementKind::ProductSegments,
        StatementKind::CapitalStructure,   StatementKind::OperatingMetrics,
        StatementKind::PensionPlan,    StatementKind::Acquisitions,
        StatementKind::Transcript};
    for (StatementKind k : kinds) {
        auto back = kind_from_slug(kind_slug(k));
        REQUIRE(back);
        CHECK(*back == k);
    }
    CHECK(kind_slug(StatementKind::PensionPlan) == "pension_plan");
    CHECK(kind_slug(StatementKind::BalanceSheet) == "balancesheet");
    CHECK_FALSE(kind_from_slug("equity"));
}

TEST_CASE("scale names and powers") {
    CHECK(scale_pow10(Scale::Units) == 0);
    CHECK(scale_pow10(Scale::Thousands) == 3);
    CHECK(scale_pow10(Scale::Millions) == 6);
    CHECK(scale_pow10(Scale::Billions) == 9);
    for (Scale s : {Scale::Units, Scale::Thousands, Scale::Millions, Scale::Billions}) {
        auto back = scale_from_name(scale_name(s));
        REQUIRE(back);
        CHECK(*back == s);
    }
    CHECK_FALSE(scale_from_name("million"));
    CHECK_FALSE(scale_from_name(""));
}

TEST_CASE("rescaled shifts monetary number cells and nothing else") {
    StatementTable t;
    t.subject = "X";
    t.kind = StatementKind::OperatingMetrics;
    t.columns = {"FY2023"};
    t.scale_applied = Scale::Units;
    t.rows = {
        Row{"Revenue", {Cell::of_number(*Decimal::parse("5003000000"))}, true, ""},
        Row{"Stores", {Cell::of_number(*Decimal::parse("412"))}, false, "stores"},
        Row{"Status", {Cell::of_text("Open")}, true, ""},
        Row{"Gap", {Cell::missing()}, true, ""},
    };

    StatementTable millions = t.rescaled(Scale::Millions);
    CHECK(millions.scale_applied == Scale::Millions);
    CHECK(millions.rows[0].values[0].number.to_string() == "5003");
    CHECK(millions.rows[1].values[0].number.to_string() == "412");  // physical rows stay put
    CHECK(millions.rows[2].values[0].text == "Open");
    CHECK(millions.rows[3].values[0].type == Cell::Type::Missing);

    // down and back up is lossless
    CHECK(millions.rescaled(Scale::Units).rows[0].values[0].number ==
          t.rows[0].values[0].number);

    StatementTable thousands = t.rescaled(Scale::Thousands);
    CHECK(differs_by_pow10(thousands.rows[0].values[0].number,
                           millions.rows[0].values[0].number, 3));
}

TEST_CASE("truncated_columns keeps the leading window") {
    StatementTable t = small_income();
    StatementTable one = t.truncated_columns(1);
    CHECK(one.columns == std::vector<std::string>{"FY2023"});
    CHECK(one.rows[0].values.size() == 1);
    CHECK(t.truncated_columns(0).columns.size() == 2);   // 0 = no cap
    CHECK(t.truncated_columns(10).columns.size() == 2);  // beyond width = unchanged
}

TEST_CASE("render_text aligns columns exactly") {
    const std::string expected =
        "TestCo | income | values in millions USD\n"
        "            FY2023  FY2022\n"
        "Revenue       5003    4690\n"
        "Net income  640.25       -\n";
    CHECK(small_income().render_text() == expected);
}

TEST_CASE("render_text covers units, n/a currency and physical units") {
    StatementTable t;
    t.subject = "X";
    t.kind = StatementKind::OperatingMetrics;
    t.columns = {"FY2023"};
    t.currency = "n/a";
    t.rows = {Row{"Stores", {Cell::of_number(*Decimal::parse("412"))}, false, "stores"}};
    const std::string text = t.render_text();
    CHECK(text.find("X | operating_metrics | values in units\n") == 0);
    CHECK(text.find("412 stores") != std::string::npos);
    CHECK(text.find("n/a") == std::string::npos);
}

TEST_CASE("render_text formats transcripts as speaker turns") {
    StatementTable t;
    t.subject = "TestCo";
    t.kind = StatementKind::Transcript;
    t.columns = {"Speaker", "Role", "Text"};
    Row r1{"1", {Cell::of_text("Operator"), Cell::of_text(""), Cell::of_text("Welcome.")}, false, ""};
    Row r2{"2", {Cell::of_text("Jane"), Cell::of_text("CEO"), Cell::of_text("Thanks.")}, false, ""};
    t.rows = {r1, r2};
    CHECK(t.render_text() ==
          "TestCo | transcript\n"
          "Operator: Welcome.\n"
          "Jane (CEO): Thanks.\n");
}

TEST_CASE("to_json/from_json round-trips tables exactly") {
    StatementTable t = small_income();
    t.rows.push_back(Row{"Stores", {Cell::of_number(*Decimal::parse("412")), Cell::missing()},
                         false, "stores"});
    t.rows.push_back(Row{"Note", {Cell::of_text("restated"), Cell::missing()}, true, ""});

    const json j = t.to_json();
    CHECK(j["kind"] == "income");
    CHECK(j["scale"] == "millions");
    CHECK(j["rows"][0]["values"][0] == "5003");          // numbers as decimal strings
    CHECK(j["rows"][1]["values"][1].is_null());          // missing as null
    CHECK(j["rows"][3]["values"][0] == json{{"text", "restated"}});

    StatementTable back = StatementTable::from_json(j);
    CHECK(back.to_json() == j);
    CHECK(back.render_text() == t.render_text());
}

TEST_CASE("from_json rejects malformed tables") {
    json good = small_income().to_json();

    json bad_kind = good;
    bad_kind["kind"] = "equity";
    CHECK_THROWS(StatementTable::from_json(bad_kind));

    json bad_scale = good;
    bad_scale["scale"] = "million";
    CHECK_THROWS(StatementTable::from_json(bad_scale));

    json bad_cell = good;
    bad_cell["rows"][0]["values"][0] = "not-a-number";
    CHECK_THROWS(StatementTable::from_json(bad_cell));

    json bad_shape = good;
    bad_shape["rows"][0]["values"][0] = json::array({1, 2});
    CHECK_THROWS(StatementTable::from_json(bad_shape));
}
