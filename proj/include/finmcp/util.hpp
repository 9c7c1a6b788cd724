#pragma once
// Small string/file helpers shared across modules.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace finmcp {

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
bool iequals(std::string_view a, std::string_view b);

std::vector<std::string> split(std::string_view s, char sep);

// Whole-file read; throws std::runtime_error when the file cannot be opened.
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

// Atomic replace: writes to path + ".tmp" then renames over path.
void write_file_atomic(const std::string& path, std::string_view content);

// Calendar-valid ISO-8601 date (YYYY-MM-DD), comparable lexicographically.
bool is_valid_iso_date(std::string_view s);

// Fiscal period label: FY<year> optionally followed by Q<1-4>.
struct FiscalPeriod {
    int year = 0;
    int quarter = 0;  // 0 = annual
    std::string label() const;
};
std::optional<FiscalPeriod> parse_fiscal_period(std::string_view s);

}  // namespace finmcp
