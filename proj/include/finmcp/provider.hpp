#pragma once
// Pluggable backends that supply StatementTables: a deterministic on-disk
// fixture store, and an HTTP client for a vendor API speaking the same wire
// schema (docs/fixtures.md).

#include "finmcp/statement.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace finmcp {

enum class ProviderErrc {
    UnknownCompany,
    PeriodUnavailable,
    InvalidDateRange,
    NotFound,
    AuthFailure,
    RateLimited,
    DecodeError,
    ProviderFailure,
};

struct ProviderError : std::runtime_error {
    ProviderErrc code;
    ProviderError(ProviderErrc c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

// Window of data to fetch: a fiscal period plus trailing-period count for
// statements, or a date range for acquisitions.
struct FetchWindow {
    std::string period;
    int num_periods = 1;
    std::string start_date;
    std::string end_date;
};

class Provider {
public:
    virtual ~Provider() = default;
    virtual StatementTable fetch(StatementKind kind, const std::string& subject,
                                 const FetchWindow& window) = 0;
};

struct CompanyMeta {
    std::string name;
    std::string dir;  // directory name in the fixture store
    std::vector<std::string> aliases;
    std::string currency = "n/a";
};

// Company-name resolution: exact match, then case-insensitive match, then
// alias table lookup. No fuzzy matching.
class CompanyDirectory {
public:
    void add(CompanyMeta meta) { companies_.push_back(std::move(meta)); }
    const CompanyMeta* resolve(const std::string& subject) const;
    const std::vector<CompanyMeta>& companies() const { return companies_; }

private:
    std::vector<CompanyMeta> companies_;
};

// Shared fixture-file decoding; both providers parse identical bytes into
// identical tables.
StatementTable decode_fixture_table(const json& file, StatementKind kind,
                                    const CompanyMeta& company);
StatementTable decode_acquisitions(const json& file, const CompanyMeta& company,
                                   const std::string& start_date, const std::string& end_date);
StatementTable decode_transcript(const json& file, const CompanyMeta& company);

// Fixture file name for a (kind, period) pair; acquisitions live in a single
// undated file.
std::string fixture_file_name(StatementKind kind, const std::string& period);

// Kinds whose absence means "no such data" (empty table) rather than an error.
bool absence_is_empty(StatementKind kind);

class FixtureProvider : public Provider {
public:
    explicit FixtureProvider(std::string fixtures_dir);

    StatementTable fetch(StatementKind kind, const std::string& subject,
                         const FetchWindow& window) override;

    const CompanyDirectory& directory() const { return directory_; }

private:
    std::string dir_;
    CompanyDirectory directory_;
};

std::unique_ptr<FixtureProvider> make_fixture_provider(const std::string& fixtures_dir);

}  // namespace finmcp
