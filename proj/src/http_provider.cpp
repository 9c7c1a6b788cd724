#include "finmcp/http_provider.hpp"

#include <cstdlib>
#include <thread>

#include "httplib.h"

namespace finmcp {

namespace {
std::string url_host(const std::string& base) {
    // httplib takes scheme://host:port directly; strip any trailing slash.
    std::string s = base;
    while (!s.empty() && s.back() == '/') s.pop_back();
    return s;
}

bool retryable_status(int status) {
    return status == 429 || (status >= 500 && status < 600);
}

std::chrono::milliseconds backoff_delay(int attempt) {
    auto ms = std::chrono::milliseconds(50) * (1 << attempt);
    return std::min(ms, std::chrono::milliseconds(2000));
}
}  // namespace

HttpProvider::HttpProvider(HttpProviderOptions opts)
    : opts_(std::move(opts)),
      bucket_(opts_.per_minute_budget),
      slots_(std::max(1, std::min(64, opts_.max_concurrency))) {
    if (!opts_.sleeper)
        opts_.sleeper = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

HttpProvider::~HttpProvider() = default;

std::string HttpProvider::get_body(const std::string& path) {
    if (!bucket_.try_acquire())
        throw ProviderError(ProviderErrc::RateLimited, "request budget exhausted");
    slots_.acquire();
    struct Release {
        std::counting_semaphore<64>& s;
        ~Release() { s.release(); }
    } release{slots_};

    httplib::Client client(url_host(opts_.base_url));
    client.set_connection_timeout(5);
    client.set_read_timeout(10);
    httplib::Headers headers;
    if (!opts_.token_env.empty()) {
        const char* token = std::getenv(opts_.token_env.c_str());
        if (token && *token) headers.emplace("Authorization", std::string("Bearer ") + token);
    }

    for (int attempt = 0;; ++attempt) {
        auto res = client.Get(path, headers);
        if (res) {
            if (res->status == 200) return res->body;
            if (res->status == 401 || res->status == 403)
                throw ProviderError(ProviderErrc::AuthFailure,
                                    "authorization rejected (HTTP " +
                                        std::to_string(res->status) + ")");
            if (res->status == 404)
                throw ProviderError(ProviderErrc::NotFound, "not found: " + path);
            if (!retryable_status(res->status))
                throw ProviderError(ProviderErrc::ProviderFailure,
                                    "HTTP " + std::to_string(res->status) + " for " + path);
        }
        if (attempt >= opts_.max_retries)
            throw ProviderError(ProviderErrc::ProviderFailure,
                                res ? "HTTP " + std::to_string(res->status) + " after retries"
                                    : "connection failed after retries");
        opts_.sleeper(backoff_delay(attempt));
    }
}

void HttpProvider::refresh_directory() {
    const std::string body = get_body("/v1/companies");
    json j = json::parse(body, nullptr, false);
    if (j.is_discarded() || !j.contains("companies"))
        throw ProviderError(ProviderErrc::DecodeError, "bad companies listing");
    for (const auto& c : j["companies"]) {
        CompanyMeta company;
        company.name = c.at("name").get<std::string>();
        // The listing's "dir" names the wire path segment; the display name
        // only stands in when the vendor omits it.
        company.dir = c.value("dir", company.name);
        company.currency = c.value("currency", "n/a");
        for (const auto& a : c.value("aliases", json::array()))
            company.aliases.push_back(a.get<std::string>());
        directory_.add(std::move(company));
    }
    directory_loaded_ = true;
}

StatementTable HttpProvider::fetch(StatementKind kind, const std::string& subject,
                                   const FetchWindow& window) {
    if (!directory_loaded_) refresh_directory();
    const CompanyMeta* company = directory_.resolve(subject);
    if (!company)
        throw ProviderError(ProviderErrc::UnknownCompany, "unknown company: " + subject);

    const std::string file = fixture_file_name(kind, window.period);
    std::string body;
    try {
        body = get_body("/v1/companies/" + company->dir + "/files/" + file);
    } catch (const ProviderError& e) {
        if (e.code != ProviderErrc::NotFound) throw;
        if (kind == StatementKind::Acquisitions) {
            json empty = {{"schema", "finmcp-fixture/1"}, {"deals", json::array()}};
            return decode_acquisitions(empty, *company, window.start_date, window.end_date);
        }
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

    json j = json::parse(body, nullptr, false);
    if (j.is_discarded())
        throw ProviderError(ProviderErrc::DecodeError, "invalid JSON from vendor for " + file);
    if (kind == StatementKind::Acquisitions)
        return decode_acquisitions(j, *company, window.start_date, window.end_date);
    if (kind == StatementKind::Transcript) return decode_transcript(j, *company);
    StatementTable t = decode_fixture_table(j, kind, *company);
    size_t n = window.num_periods > 0 ? static_cast<size_t>(window.num_periods) : 1;
    return t.truncated_columns(n);
}

std::unique_ptr<HttpProvider> make_http_provider(HttpProviderOptions opts) {
    return std::make_unique<HttpProvider>(std::move(opts));
}

}  // namespace finmcp
