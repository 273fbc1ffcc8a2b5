#pragma once

#include <cstdint>
#include <compare>
#include <stdexcept>
#include <string>

namespace hsasim {

// Non-negative monetary amount stored as an exact count of centavos.
// All account arithmetic in the simulator is integer arithmetic on this
// type; doubles appear only in statistics layers downstream.
class Money {
public:
    constexpr Money() = default;

    static constexpr Money from_cents(std::int64_t cents) {
        if (cents < 0) throw std::invalid_argument("Money cannot be negative");
        Money m;
        m.cents_ = cents;
        return m;
    }

    static constexpr Money from_reais(std::int64_t reais) {
        return from_cents(reais * 100);
    }

    // Parses a plain decimal like "1234.56" or "300". At most two
    // fractional digits; a third digit is a precision error, not rounded.
    static Money parse(const std::string& text);

    constexpr std::int64_t cents() const { return cents_; }
    double reais() const { return static_cast<double>(cents_) / 100.0; }

    // Always "D.CC" with exactly two fractional digits.
    std::string str() const;

    constexpr bool is_zero() const { return cents_ == 0; }

    friend constexpr Money operator+(Money a, Money b) {
        return from_cents(a.cents_ + b.cents_);
    }
    // Throws if the result would be negative.
    friend constexpr Money operator-(Money a, Money b) {
        if (a.cents_ < b.cents_) throw std::invalid_argument("Money underflow");
        return from_cents(a.cents_ - b.cents_);
    }
    friend constexpr Money operator*(Money a, std::int64_t k) {
        return from_cents(a.cents_ * k);
    }
    Money& operator+=(Money b) { *this = *this + b; return *this; }
    Money& operator-=(Money b) { *this = *this - b; return *this; }

    friend constexpr auto operator<=>(Money a, Money b) = default;

private:
    std::int64_t cents_ = 0;
};

constexpr Money min(Money a, Money b) { return a < b ? a : b; }

inline Money Money::parse(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty money value");
    std::size_t i = 0;
    if (text[0] == '-') throw std::invalid_argument("negative money value: " + text);
    std::int64_t whole = 0;
    bool any_digit = false;
    for (; i < text.size() && text[i] != '.'; ++i) {
        char c = text[i];
        if (c < '0' || c > '9') throw std::invalid_argument("malformed money value: " + text);
        whole = whole * 10 + (c - '0');
        any_digit = true;
    }
    if (!any_digit) throw std::invalid_argument("malformed money value: " + text);
    std::int64_t frac = 0;
    int frac_digits = 0;
    if (i < text.size()) {  // at '.'
        ++i;
        if (i == text.size()) throw std::invalid_argument("malformed money value: " + text);
        for (; i < text.size(); ++i) {
            char c = text[i];
            if (c < '0' || c > '9') throw std::invalid_argument("malformed money value: " + text);
            if (++frac_digits > 2)
                throw std::invalid_argument("expense precision exceeds cents: " + text);
            frac = frac * 10 + (c - '0');
        }
    }
    if (frac_digits == 1) frac *= 10;
    return from_cents(whole * 100 + frac);
}

inline std::string Money::str() const {
    std::string s = std::to_string(cents_ / 100);
    std::int64_t f = cents_ % 100;
    s += '.';
    s += static_cast<char>('0' + f / 10);
    s += static_cast<char>('0' + f % 10);
    return s;
}

}  // namespace hsasim
