#include "finmcp/provider.hpp"
#include "finmcp/util.hpp"

#include <filesystem>
#include <fstream>

namespace fs = std::filesystem;

namespace finmcp {

namespace {
constexpr const char* kSchemaTag = "finmcp-fixture/1";

json load_json_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ProviderError(ProviderErrc::NotFound, "missing file: " + path.string());
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded())
        throw ProviderError(ProviderErrc::DecodeError, "invalid JSON in " + path.string());
    return j;
}

void check_schema(const json& j, const fs::path& path) {
    if (j.value("schema", "") != kSchemaTag)
        throw ProviderError(ProviderErrc::DecodeError,
                            "unsupported fixture schema in " + path.string());
}
}  // namespace

const CompanyMeta* CompanyDirectory::resolve(const std::string& subject) const {
    for (const auto& c : companies_)
        if (c.name == subject) return &c;
    for (const auto& c : companies_)
        if (iequals(c.name, subject)) return &c;
    for (const auto& c : companies_)
        for (const auto& a : c.aliases)
            if (a == subject) return &c;
    for (const auto& c : companies_)
        for (const auto& a : c.aliases)
            if (iequals(a, subject)) return &c;
    return nullptr;
}

std::string fixture_file_name(StatementKind kind, const std::string& period) {
    if (kind == StatementKind::Acquisitions) return "acquisitions.json";
    return kind_slug(kind) + "_" + period + ".json";
}

bool absence_is_empty(StatementKind kind) {
    switch (kind) {
        case StatementKind::BusinessSegments:
        case StatementKind::GeographicSegments:
        case StatementKind::ProductSegments:
        case StatementKind::CapitalStructure:
        case StatementKind::OperatingMetrics:
        case StatementKind::PensionPlan:
            return true;
        default:
            return false;
    }
}

StatementTable decode_fixture_table(const json& file, StatementKind kind,
                                    const CompanyMeta& company) {
    StatementTable t;
    t.subject = company.name;
    t.kind = kind;
    t.currency = file.value("currency", company.currency);
    auto scale = scale_from_name(file.value("scale", "units"));
    if (!scale) throw ProviderError(ProviderErrc::DecodeError, "bad scale in fixture file");
    t.scale_applied = *scale;
    if (!file.contains("columns") || !file.contains("rows"))
        throw ProviderError(ProviderErrc::DecodeError, "fixture file missing columns/rows");
    t.columns = file.at("columns").get<std::vector<std::string>>();
    for (const auto& r : file.at("rows")) {
        Row row;
        row.label = r.at("label").get<std::string>();
        row.monetary = r.value("monetary", true);
        row.unit = r.value("unit", "");
        for (const auto& v : r.at("values")) {
            if (v.is_null()) {
                row.values.push_back(Cell::missing());
            } else if (v.is_string()) {
                auto d = Decimal::parse(v.get<std::string>());
                if (!d)
                    throw ProviderError(ProviderErrc::DecodeError,
                                        "bad decimal in fixture row " + row.label);
                row.values.push_back(Cell::of_number(*d));
            } else if (v.is_object() && v.contains("text")) {
                row.values.push_back(Cell::of_text(v["text"].get<std::string>()));
            } else {
                throw ProviderError(ProviderErrc::DecodeError,
                                    "bad cell in fixture row " + row.label);
            }
        }
        if (row.values.size() != t.columns.size())
            throw ProviderError(ProviderErrc::DecodeError,
                                "row " + row.label + " has wrong number of values");
        t.rows.push_back(std::move(row));
    }
    return t;
}

StatementTable decode_acquisitions(const json& file, const CompanyMeta& company,
                                   const std::string& start_date, const std::string& end_date) {
    StatementTable t;
    t.subject = company.name;
    t.kind = StatementKind::Acquisitions;
    t.currency = file.value("currency", company.currency);
    t.columns = {"Target", "Announced", "Value", "Status"};
    if (start_date > end_date)
        throw ProviderError(ProviderErrc::InvalidDateRange,
                            "start_date is after end_date: " + start_date + " > " + end_date);
    for (const auto& deal : file.value("deals", json::array())) {
        const std::string announced = deal.at("announced").get<std::string>();
        if (announced < start_date || announced > end_date) continue;
        Row row;
        row.label = deal.at("target").get<std::string>();
        row.values.push_back(Cell::of_text(row.label));
        row.values.push_back(Cell::of_text(announced));
        auto d = Decimal::parse(deal.at("value").get<std::string>());
        if (!d) throw ProviderError(ProviderErrc::DecodeError, "bad deal value");
        row.values.push_back(Cell::of_number(*d));
        row.values.push_back(Cell::of_text(deal.at("status").get<std::string>()));
        t.rows.push_back(std::move(row));
    }
    return t;
}

StatementTable decode_transcript(const json& file, const CompanyMeta& company) {
    StatementTable t;
    t.subject = company.name;
    t.kind = StatementKind::Transcript;
    t.currency = "n/a";
    t.columns = {"Speaker", "Role", "Text"};
    int n = 0;
    for (const auto& turn : file.value("turns", json::array())) {
        Row row;
        row.label = std::to_string(++n);
        row.monetary = false;
        row.values.push_back(Cell::of_text(turn.at("speaker").get<std::string>()));
        row.values.push_back(Cell::of_text(turn.value("role", "")));
        row.values.push_back(Cell::of_text(turn.at("text").get<std::string>()));
        t.rows.push_back(std::move(row));
    }
    return t;
}

FixtureProvider::FixtureProvider(std::string fixtures_dir) : dir_(std::move(fixtures_dir)) {
    if (!fs::is_directory(dir_))
        throw ProviderError(ProviderErrc::ProviderFailure, "fixtures dir not found: " + dir_);
    for (const auto& entry : fs::directory_iterator(dir_)) {
        if (!entry.is_directory()) continue;
        const fs::path meta_path = entry.path() / "company.json";
        if (!fs::exists(meta_path)) continue;
        json meta = load_json_file(meta_path);
        check_schema(meta, meta_path);
        CompanyMeta company;
        company.name = meta.at("name").get<std::string>();
        company.dir = entry.path().filename().string();
        company.currency = meta.value("currency", "n/a");
        for (const auto& a : meta.value("aliases", json::array()))
            company.aliases.push_back(a.get<std::string>());
        directory_.add(std::move(company));
    }
}

StatementTable FixtureProvider::fetch(StatementKind kind, const std::string& subject,
                                      const FetchWindow& window) {
    const CompanyMeta* company = directory_.resolve(subject);
    if (!company)
        throw ProviderError(ProviderErrc::UnknownCompany, "unknown company: " + subject);

    if (kind == StatementKind::Acquisitions) {
        const fs::path path = fs::path(dir_) / company->dir / "acquisitions.json";
        if (!fs::exists(path)) {
            json empty = {{"schema", kSchemaTag}, {"deals", json::array()}};
            return decode_acquisitions(empty, *company, window.start_date, window.end_date);
        }
        json file = load_json_file(path);
        check_schema(file, path);
        return decode_acquisitions(file, *company, window.start_date, window.end_date);
    }

    const fs::path path = fs::path(dir_) / company->dir / fixture_file_name(kind, window.period);
    if (!fs::exists(path)) {
        if (absence_is_empty(kind)) {
            StatementTable t;
            t.subject = company->name;
            t.kind = kind;
            t.currency = company->currency;
            t.columns = {window.period};
            return t;
        }
        throw ProviderError(ProviderErrc::PeriodUnavailable,
                            "no " + kind_slug(kind) + " data for " + company->name + " " +
                                window.period);
    }
    json file = load_json_file(path);
    check_schema(file, path);
    if (kind == StatementKind::Transcript) return decode_transcript(file, *company);
    StatementTable t = decode_fixture_table(file, kind, *company);
    size_t n = window.num_periods > 0 ? static_cast<size_t>(window.num_periods) : 1;
    return t.truncated_columns(n);
}

std::unique_ptr<FixtureProvider> make_fixture_provider(const std::string& fixtures_dir) {
    return std::make_unique<FixtureProvider>(fixtures_dir);
}

}  // namespace finmcp
