#pragma once
// Exact decimal values as mantissa * 10^exponent.
//
// Financial line items are stored and rescaled in decimal arithmetic so that
// unit-scale conversion (units -> thousands -> millions -> billions) is a pure
// exponent shift and therefore lossless. Binary floats never enter the data
// path.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace finmcp {

class Decimal {
public:
    Decimal() = default;
    Decimal(std::int64_t mantissa, std::int32_t exponent) : mant_(mantissa), exp_(exponent) {
        normalize();
    }

    // Parses a plain decimal literal: optional sign, digits, optional
    // fractional part ("-420000000", "640.25"). No exponent syntax, no
    // thousands separators.
    static std::optional<Decimal> parse(std::string_view text);

    std::int64_t mantissa() const { return mant_; }
    std::int32_t exponent() const { return exp_; }
    bool is_zero() const { return mant_ == 0; }
    bool is_negative() const { return mant_ < 0; }

    // Value divided by 10^k, exactly (exponent shift).
    Decimal shifted(std::int32_t k) const { return Decimal(mant_, exp_ - k); }

    Decimal operator-() const { return Decimal(-mant_, exp_); }
    Decimal operator+(const Decimal& other) const;
    Decimal operator-(const Decimal& other) const { return *this + (-other); }

    bool operator==(const Decimal& other) const {
        return mant_ == other.mant_ && exp_ == other.exp_;
    }
    bool operator!=(const Decimal& other) const { return !(*this == other); }

    // Canonical minimal rendering: "5003", "640.25", "-0.5", "0".
    std::string to_string() const;

    double to_double() const;

private:
    void normalize();

    std::int64_t mant_ = 0;
    std::int32_t exp_ = 0;
};

// True when a = b * 10^k exactly.
inline bool differs_by_pow10(const Decimal& a, const Decimal& b, std::int32_t k) {
    if (a.is_zero() && b.is_zero()) return true;
    return a.mantissa() == b.mantissa() && a.exponent() == b.exponent() + k;
}

}  // namespace finmcp
