#include "doctest.h"

#include "finmcp/provider.hpp"
#include "helpers.hpp"

using namespace finmcp;

namespace {

FetchWindow annual(const std::string& period, int num_periods = 1) {
    FetchWindow w;
    w.period = period;
    w.num_periods = num_periods;
    return w;
}

FetchWindow range(const std::string& start, const std::string& end) {
    FetchWindow w;
    w.start_date = start;
    w.end_date = end;
    return w;
}

const Decimal& cell_number(const StatementTable& t, const std::string& label, size_t col = 0) {
    for (const auto& row : t.rows)
        if (row.label == label) return row.values.at(col).number;
    throw std::runtime_error("row not found: " + label);
}

ProviderErrc error_code(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const ProviderError& e) {
        return e.code;
    }
    throw std::runtime_error("expected ProviderError");
}

}  // namespace

TEST_CASE("directory resolves names and aliases, exact before fuzzy-free fallback") {
    FixtureProvider provider(testutil::fixtures_dir());
    const CompanyDirectory& dir = provider.directory();
    CHECK(dir.companies().size() == 2);

    REQUIRE(dir.resolve("FixtureCorp"));
    CHECK(dir.resolve("FixtureCorp")->dir == "fixturecorp");
    CHECK(dir.resolve("fixturecorp") == dir.resolve("FixtureCorp"));  // case-insensitive
    CHECK(dir.resolve("FXC") == dir.resolve("FixtureCorp"));          // alias
    CHECK(dir.resolve("fxc") == dir.resolve("FixtureCorp"));          // alias, any case
    CHECK(dir.resolve("Fixture Corporation") == dir.resolve("FixtureCorp"));
    CHECK(dir.resolve("ConsistencyCo"));
    CHECK(dir.resolve("Ghost Inc") == nullptr);
}

TEST_CASE("fetch returns the requested period window") {
    FixtureProvider provider(testutil::fixtures_dir());

    StatementTable one = provider.fetch(StatementKind::Income, "FXC", annual("FY2023"));
    CHECK(one.columns == std::vector<std::string>{"FY2023"});
    CHECK(one.currency == "USD");
    CHECK(one.scale_applied == Scale::Units);
    CHECK(cell_number(one, "Revenue").to_string() == "5003000000");

    StatementTable three = provider.fetch(StatementKind::Income, "FixtureCorp", annual("FY2023", 3));
    CHECK(three.columns == std::vector<std::string>{"FY2023", "FY2022", "FY2021"});
    CHECK(cell_number(three, "Revenue", 2).to_string() == "4120500000");

    // asking beyond the stored history just returns what exists
    StatementTable all = provider.fetch(StatementKind::Income, "FXC", annual("FY2023", 10));
    CHECK(all.columns.size() == 5);
}

TEST_CASE("fetch maps failures onto typed provider errors") {
    FixtureProvider provider(testutil::fixtures_dir());

    CHECK(error_code([&] { provider.fetch(StatementKind::Income, "Ghost Inc", annual("FY2023")); }) ==
          ProviderErrc::UnknownCompany);
    CHECK(error_code([&] { provider.fetch(StatementKind::Income, "FXC", annual("FY2019")); }) ==
          ProviderErrc::PeriodUnavailable);
    CHECK(error_code([&] {
              provider.fetch(StatementKind::Transcript, "ConsistencyCo", annual("FY2023Q4"));
          }) == ProviderErrc::PeriodUnavailable);
    CHECK(error_code([&] {
              provider.fetch(StatementKind::Acquisitions, "FXC",
                             range("2023-12-31", "2023-01-01"));
          }) == ProviderErrc::InvalidDateRange);

    CHECK_THROWS_AS(FixtureProvider("/nonexistent/fixtures"), ProviderError);
}

TEST_CASE("kinds with absence semantics return empty tables instead of failing") {
    FixtureProvider provider(testutil::fixtures_dir());

    CHECK(absence_is_empty(StatementKind::PensionPlan));
    CHECK_FALSE(absence_is_empty(StatementKind::Income));
    CHECK_FALSE(absence_is_empty(StatementKind::Transcript));

    StatementTable none =
        provider.fetch(StatementKind::PensionPlan, "ConsistencyCo", annual("FY2023"));
    CHECK(none.rows.empty());
    CHECK(none.columns == std::vector<std::string>{"FY2023"});
    CHECK(none.subject == "ConsistencyCo");

    StatementTable some =
        provider.fetch(StatementKind::PensionPlan, "FixtureCorp", annual("FY2023"));
    CHECK(some.rows.size() == 3);
}

TEST_CASE("acquisitions filter on the announce date window") {
    FixtureProvider provider(testutil::fixtures_dir());

    StatementTable y2023 = provider.fetch(StatementKind::Acquisitions, "FXC",
                                          range("2023-01-01", "2023-12-31"));
    REQUIRE(y2023.rows.size() == 1);
    CHECK(y2023.rows[0].label == "Nimbus Analytics");
    CHECK(y2023.rows[0].values[1].text == "2023-06-15");
    CHECK(y2023.rows[0].values[2].number.to_string() == "125000000");

    CHECK(provider.fetch(StatementKind::Acquisitions, "FXC", range("2021-01-01", "2023-12-31"))
              .rows.size() == 2);
    CHECK(provider.fetch(StatementKind::Acquisitions, "FXC", range("2022-01-01", "2022-12-31"))
              .rows.empty());
    // boundary dates are inclusive
    CHECK(provider.fetch(StatementKind::Acquisitions, "FXC", range("2023-06-15", "2023-06-15"))
              .rows.size() == 1);
    // a company with no deals file reads as zero deals
    CHECK(provider.fetch(StatementKind::Acquisitions, "ConsistencyCo",
                         range("2000-01-01", "2030-01-01"))
              .rows.empty());
}

TEST_CASE("transcripts decode into ordered speaker turns") {
    FixtureProvider provider(testutil::fixtures_dir());
    StatementTable t =
        provider.fetch(StatementKind::Transcript, "FixtureCorp", annual("FY2023Q4"));
    REQUIRE(t.rows.size() == 5);
    CHECK(t.rows[0].values[0].text == "Operator");
    CHECK(t.rows[0].label == "1");
    CHECK(t.rows[4].label == "5");
    const std::string text = t.render_text();
    CHECK(text.find("Jane Calloway (CEO):") != std::string::npos);
}

TEST_CASE("fixture corpus satisfies accounting identities") {
    FixtureProvider provider(testutil::fixtures_dir());

    // income: revenue - cost = gross profit, for every stored period
    StatementTable inc = provider.fetch(StatementKind::Income, "FXC", annual("FY2023", 5));
    for (size_t c = 0; c < inc.columns.size(); ++c) {
        const Decimal revenue = cell_number(inc, "Revenue", c);
        const Decimal cost = cell_number(inc, "Cost of revenue", c);
        const Decimal gross = cell_number(inc, "Gross profit", c);
        CHECK(revenue - cost == gross);
    }

    // balance sheet: assets = liabilities + equity
    StatementTable bs = provider.fetch(StatementKind::BalanceSheet, "FXC", annual("FY2023"));
    CHECK(cell_number(bs, "Total liabilities") + cell_number(bs, "Total equity") ==
          cell_number(bs, "Total assets"));

    // cash flow: begin + net change = end
    StatementTable cf = provider.fetch(StatementKind::CashFlow, "FXC", annual("FY2023"));
    CHECK(cell_number(cf, "Cash at beginning of period") +
              cell_number(cf, "Net change in cash") ==
          cell_number(cf, "Cash at end of period"));

    // segment views each sum to total revenue
    const Decimal total =
        cell_number(provider.fetch(StatementKind::Income, "ConsistencyCo", annual("FY2023")),
                    "Revenue");
    for (StatementKind kind : {StatementKind::BusinessSegments, StatementKind::ProductSegments,
                               StatementKind::GeographicSegments}) {
        StatementTable seg = provider.fetch(kind, "ConsistencyCo", annual("FY2023"));
        Decimal sum;
        for (const auto& row : seg.rows)
            if (row.label.rfind("Total", 0) != 0) sum = sum + row.values[0].number;
        CHECK(sum == total);
    }
}
