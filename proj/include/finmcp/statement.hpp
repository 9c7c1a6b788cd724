#pragma once
// Period-indexed financial data tables returned by provider backends.

#include "finmcp/decimal.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace finmcp {

using json = nlohmann::json;

enum class StatementKind {
    BalanceSheet,
    Income,
    CashFlow,
    BusinessSegments,
    GeographicSegments,
    ProductSegments,
    CapitalStructure,
    OperatingMetrics,
    PensionPlan,
    Acquisitions,
    Transcript,
};

// Slug used in fixture file names and wire paths ("income", "pension_plan", ...).
std::string kind_slug(StatementKind kind);
std::optional<StatementKind> kind_from_slug(std::string_view slug);

enum class Scale { Units, Thousands, Millions, Billions };

std::string scale_name(Scale s);
std::optional<Scale> scale_from_name(std::string_view name);
// Power-of-ten factor: units=0, thousands=3, millions=6, billions=9.
int scale_pow10(Scale s);

struct Cell {
    enum class Type { Missing, Number, Text };
    Type type = Type::Missing;
    Decimal number;
    std::string text;

    static Cell missing() { return Cell{}; }
    static Cell of_number(Decimal d) { return Cell{Type::Number, d, {}}; }
    static Cell of_text(std::string s) { return Cell{Type::Text, {}, std::move(s)}; }
};

struct Row {
    std::string label;
    std::vector<Cell> values;  // one slot per column
    bool monetary = true;      // monetary cells rescale; physical ones do not
    std::string unit;          // non-monetary rows carry a unit string ("stores")
};

// One table: line items (rows) by fiscal periods (columns). Non-statement
// kinds reuse the grid with role-specific column labels (acquisition deals,
// transcript turns).
struct StatementTable {
    std::string subject;
    StatementKind kind = StatementKind::Income;
    std::vector<std::string> columns;
    std::vector<Row> rows;
    Scale scale_applied = Scale::Units;
    std::string currency = "n/a";

    // Returns a copy with every monetary number cell shifted to `target`.
    StatementTable rescaled(Scale target) const;

    // Keeps the first `n` columns (requested period plus trailing ones).
    StatementTable truncated_columns(size_t n) const;

    // Plain-text aligned rendering, the form presented to models.
    std::string render_text() const;

    // Canonical machine-readable payload; numbers serialize as exact decimal
    // strings. Deterministic for identical tables.
    json to_json() const;
    static StatementTable from_json(const json& j);
};

}  // namespace finmcp
