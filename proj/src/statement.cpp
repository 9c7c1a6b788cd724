#include "finmcp/statement.hpp"

#include <algorithm>
#include <array>
#include <sstream>
#include <stdexcept>

namespace finmcp {

namespace {
struct KindName {
    StatementKind kind;
    const char* slug;
};
constexpr std::array<KindName, 11> kKindNames{{
    {StatementKind::BalanceSheet, "balancesheet"},
    {StatementKind::Income, "income"},
    {StatementKind::CashFlow, "cashflow"},
    {StatementKind::BusinessSegments, "business_segments"},
    {StatementKind::GeographicSegments, "geographic_segments"},
    {StatementKind::ProductSegments, "product_segments"},
    {StatementKind::CapitalStructure, "capital_structure"},
    {StatementKind::OperatingMetrics, "operating_metrics"},
    {StatementKind::PensionPlan, "pension_plan"},
    {StatementKind::Acquisitions, "acquisitions"},
    {StatementKind::Transcript, "transcript"},
}};
}  // namespace

std::string kind_slug(StatementKind kind) {
    for (const auto& kn : kKindNames)
        if (kn.kind == kind) return kn.slug;
    return "unknown";
}

std::optional<StatementKind> kind_from_slug(std::string_view slug) {
    for (const auto& kn : kKindNames)
        if (slug == kn.slug) return kn.kind;
    return std::nullopt;
}

std::string scale_name(Scale s) {
    switch (s) {
        case Scale::Units: return "units";
        case Scale::Thousands: return "thousands";
        case Scale::Millions: return "millions";
        case Scale::Billions: return "billions";
    }
    return "units";
}

std::optional<Scale> scale_from_name(std::string_view name) {
    if (name == "units") return Scale::Units;
    if (name == "thousands") return Scale::Thousands;
    if (name == "millions") return Scale::Millions;
    if (name == "billions") return Scale::Billions;
    return std::nullopt;
}

int scale_pow10(Scale s) {
    switch (s) {
        case Scale::Units: return 0;
        case Scale::Thousands: return 3;
        case Scale::Millions: return 6;
        case Scale::Billions: return 9;
    }
    return 0;
}

StatementTable StatementTable::rescaled(Scale target) const {
    StatementTable out = *this;
    const int shift = scale_pow10(target) - scale_pow10(scale_applied);
    out.scale_applied = target;
    if (shift == 0) return out;
    for (auto& row : out.rows) {
        if (!row.monetary) continue;
        for (auto& cell : row.values)
            if (cell.type == Cell::Type::Number) cell.number = cell.number.shifted(shift);
    }
    return out;
}

StatementTable StatementTable::truncated_columns(size_t n) const {
    StatementTable out = *this;
    if (n == 0 || n >= columns.size()) return out;
    out.columns.resize(n);
    for (auto& row : out.rows) row.values.resize(n);
    return out;
}

std::string StatementTable::render_text() const {
    std::ostringstream os;
    os << subject << " | " << kind_slug(kind);
    if (kind != StatementKind::Transcript && kind != StatementKind::Acquisitions) {
        os << " | values in " << scale_name(scale_applied);
        if (currency != "n/a") os << " " << currency;
    }
    os << "\n";

    if (kind == StatementKind::Transcript) {
        for (const auto& row : rows) {
            // columns: Speaker, Role, Text
            std::string speaker = row.values.size() > 0 && row.values[0].type == Cell::Type::Text
                                      ? row.values[0].text
                                      : row.label;
            std::string role =
                row.values.size() > 1 && row.values[1].type == Cell::Type::Text ? row.values[1].text : "";
            std::string text =
                row.values.size() > 2 && row.values[2].type == Cell::Type::Text ? row.values[2].text : "";
            os << speaker;
            if (!role.empty()) os << " (" << role << ")";
            os << ": " << text << "\n";
        }
        return os.str();
    }

    auto cell_text = [](const Cell& c, const Row& r) -> std::string {
        switch (c.type) {
            case Cell::Type::Missing: return "-";
            case Cell::Type::Text: return c.text;
            case Cell::Type::Number: {
                std::string s = c.number.to_string();
                if (!r.monetary && !r.unit.empty()) s += " " + r.unit;
                return s;
            }
        }
        return "-";
    };

    std::vector<size_t> widths;
    size_t label_w = 0;
    for (const auto& row : rows) label_w = std::max(label_w, row.label.size());
    widths.assign(columns.size(), 0);
    for (size_t c = 0; c < columns.size(); ++c) widths[c] = columns[c].size();
    for (const auto& row : rows)
        for (size_t c = 0; c < row.values.size() && c < widths.size(); ++c)
            widths[c] = std::max(widths[c], cell_text(row.values[c], row).size());

    os << std::string(label_w, ' ');
    for (size_t c = 0; c < columns.size(); ++c) {
        os << "  " << std::string(widths[c] - columns[c].size(), ' ') << columns[c];
    }
    os << "\n";
    for (const auto& row : rows) {
        os << row.label << std::string(label_w - row.label.size(), ' ');
        for (size_t c = 0; c < columns.size(); ++c) {
            std::string s = c < row.values.size() ? cell_text(row.values[c], row) : "-";
            os << "  " << std::string(widths[c] - s.size(), ' ') << s;
        }
        os << "\n";
    }
    return os.str();
}

json StatementTable::to_json() const {
    json j;
    j["subject"] = subject;
    j["kind"] = kind_slug(kind);
    j["columns"] = columns;
    j["scale"] = scale_name(scale_applied);
    j["currency"] = currency;
    json rows_j = json::array();
    for (const auto& row : rows) {
        json r;
        r["label"] = row.label;
        r["monetary"] = row.monetary;
        if (!row.unit.empty()) r["unit"] = row.unit;
        json vals = json::array();
        for (const auto& cell : row.values) {
            switch (cell.type) {
                case Cell::Type::Missing: vals.push_back(nullptr); break;
                case Cell::Type::Number: vals.push_back(cell.number.to_string()); break;
                case Cell::Type::Text: vals.push_back(json{{"text", cell.text}}); break;
            }
        }
        r["values"] = std::move(vals);
        rows_j.push_back(std::move(r));
    }
    j["rows"] = std::move(rows_j);
    return j;
}

StatementTable StatementTable::from_json(const json& j) {
    StatementTable t;
    t.subject = j.at("subject").get<std::string>();
    auto kind = kind_from_slug(j.at("kind").get<std::string>());
    if (!kind) throw std::runtime_error("unknown statement kind: " + j.at("kind").dump());
    t.kind = *kind;
    t.columns = j.at("columns").get<std::vector<std::string>>();
    auto scale = scale_from_name(j.value("scale", "units"));
    if (!scale) throw std::runtime_error("unknown scale: " + j.at("scale").dump());
    t.scale_applied = *scale;
    t.currency = j.value("currency", "n/a");
    for (const auto& r : j.at("rows")) {
        Row row;
        row.label = r.at("label").get<std::string>();
        row.monetary = r.value("monetary", true);
        row.unit = r.value("unit", "");
        for (const auto& v : r.at("values")) {
            if (v.is_null()) {
                row.values.push_back(Cell::missing());
            } else if (v.is_string()) {
                auto d = Decimal::parse(v.get<std::string>());
                if (!d) throw std::runtime_error("bad decimal literal: " + v.dump());
                row.values.push_back(Cell::of_number(*d));
            } else if (v.is_object() && v.contains("text")) {
                row.values.push_back(Cell::of_text(v["text"].get<std::string>()));
            } else {
                throw std::runtime_error("bad cell value: " + v.dump());
            }
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

}  // namespace finmcp
