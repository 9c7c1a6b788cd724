#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <mutex>

namespace finmcp {

// Per-minute token budget with lazy refill. budget == 0 means unlimited.
// The clock is injectable so tests can drive time deterministically.
class TokenBucket {
public:
    using Clock = std::function<std::chrono::steady_clock::time_point()>;

    explicit TokenBucket(std::uint32_t per_minute_budget, Clock clock = nullptr)
        : budget_(per_minute_budget),
          clock_(clock ? std::move(clock) : [] { return std::chrono::steady_clock::now(); }) {
        tokens_ = budget_;
        window_start_ = clock_();
    }

    // Consumes one token. Returns false when the current window is exhausted.
    bool try_acquire() {
        if (budget_ == 0) return true;
        std::lock_guard lock(mu_);
        const auto now = clock_();
        if (now - window_start_ >= std::chrono::minutes(1)) {
            tokens_ = budget_;
            window_start_ = now;
        }
        if (tokens_ == 0) return false;
        --tokens_;
        return true;
    }

    std::uint32_t budget() const { return budget_; }

private:
    std::uint32_t budget_;
    Clock clock_;
    std::uint32_t tokens_ = 0;
    std::chrono::steady_clock::time_point window_start_;
    std::mutex mu_;
};

}  // namespace finmcp
