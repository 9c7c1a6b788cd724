#include "finmcp/decimal.hpp"

#include <cctype>
#include <cstdlib>
#include <stdexcept>

namespace finmcp {

namespace {
using int128 = __int128;

std::int64_t checked_narrow(int128 v) {
    if (v > int128(INT64_MAX) || v < int128(INT64_MIN))
        throw std::overflow_error("decimal mantissa overflow");
    return static_cast<std::int64_t>(v);
}
}  // namespace

void Decimal::normalize() {
    if (mant_ == 0) {
        exp_ = 0;
        return;
    }
    while (mant_ % 10 == 0) {
        mant_ /= 10;
        ++exp_;
    }
}

std::optional<Decimal> Decimal::parse(std::string_view text) {
    if (text.empty()) return std::nullopt;
    size_t i = 0;
    bool neg = false;
    if (text[i] == '+' || text[i] == '-') {
        neg = text[i] == '-';
        ++i;
    }
    int128 mant = 0;
    std::int32_t exp = 0;
    bool any_digit = false;
    bool seen_dot = false;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (c == '.') {
            if (seen_dot) return std::nullopt;
            seen_dot = true;
            continue;
        }
        if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
        mant = mant * 10 + (c - '0');
        if (mant > int128(INT64_MAX)) return std::nullopt;
        if (seen_dot) --exp;
        any_digit = true;
    }
    if (!any_digit) return std::nullopt;
    if (neg) mant = -mant;
    return Decimal(static_cast<std::int64_t>(mant), exp);
}

Decimal Decimal::operator+(const Decimal& other) const {
    if (is_zero()) return other;
    if (other.is_zero()) return *this;
    std::int32_t common = exp_ < other.exp_ ? exp_ : other.exp_;
    int128 a = mant_;
    for (std::int32_t e = exp_; e > common; --e) a *= 10;
    int128 b = other.mant_;
    for (std::int32_t e = other.exp_; e > common; --e) b *= 10;
    return Decimal(checked_narrow(a + b), common);
}

std::string Decimal::to_string() const {
    if (mant_ == 0) return "0";
    std::int64_t m = mant_;
    std::string digits;
    bool neg = m < 0;
    while (m != 0) {
        int d = static_cast<int>(m % 10);
        if (d < 0) d = -d;
        digits.insert(digits.begin(), static_cast<char>('0' + d));
        m /= 10;
    }
    std::string out;
    if (exp_ >= 0) {
        out = digits + std::string(static_cast<size_t>(exp_), '0');
    } else {
        size_t frac = static_cast<size_t>(-exp_);
        if (digits.size() <= frac)
            digits.insert(0, frac - digits.size() + 1, '0');
        out = digits.substr(0, digits.size() - frac) + "." + digits.substr(digits.size() - frac);
    }
    return neg ? "-" + out : out;
}

double Decimal::to_double() const {
    double v = static_cast<double>(mant_);
    std::int32_t e = exp_;
    while (e > 0) {
        v *= 10.0;
        --e;
    }
    while (e < 0) {
        v /= 10.0;
        ++e;
    }
    return v;
}

}  // namespace finmcp
