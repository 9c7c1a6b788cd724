#pragma once

#include "finmcp/provider.hpp"
#include "finmcp/rate_limit.hpp"

#include <functional>
#include <memory>
#include <semaphore>
#include <string>

namespace finmcp {

struct HttpProviderOptions {
    std::string base_url = "http://127.0.0.1:8790";
    // Name of the environment variable holding the bearer token. The token
    // value itself is read at request time and never stored in config files.
    std::string token_env = "";
    int max_retries = 3;
    int max_concurrency = 4;
    std::uint32_t per_minute_budget = 0;
    // Injectable sleeper so retry tests run without wall-clock delays.
    std::function<void(std::chrono::milliseconds)> sleeper;
};

// Fetches fixture-shaped JSON from a vendor HTTP endpoint and decodes it with
// the same helpers as FixtureProvider, so the two are structurally equivalent.
class HttpProvider : public Provider {
public:
    explicit HttpProvider(HttpProviderOptions opts);
    ~HttpProvider() override;

    StatementTable fetch(StatementKind kind, const std::string& subject,
                         const FetchWindow& window) override;

    // Fetches the company listing eagerly; fetch() also does this lazily on
    // first use, so calling it up front just surfaces connectivity errors early.
    void refresh_directory();

private:
    std::string get_body(const std::string& path);

    HttpProviderOptions opts_;
    CompanyDirectory directory_;
    bool directory_loaded_ = false;
    TokenBucket bucket_;
    std::counting_semaphore<64> slots_;
};

std::unique_ptr<HttpProvider> make_http_provider(HttpProviderOptions opts);

}  // namespace finmcp
