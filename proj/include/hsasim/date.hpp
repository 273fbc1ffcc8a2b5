#pragma once

#include <compare>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace hsasim {

// Proleptic Gregorian calendar date. Small and checked; we only need
// comparisons, ISO-8601 round trips and completed-age arithmetic.
struct Date {
    int year = 1970;
    int month = 1;  // 1..12
    int day = 1;    // 1..days_in_month

    friend constexpr auto operator<=>(const Date&, const Date&) = default;

    static constexpr bool is_leap(int y) {
        return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    }

    static constexpr int days_in_month(int y, int m) {
        constexpr int d[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
        return (m == 2 && is_leap(y)) ? 29 : d[m - 1];
    }

    constexpr bool valid() const {
        return month >= 1 && month <= 12 && day >= 1 &&
               day <= days_in_month(year, month);
    }

    // "YYYY-MM-DD"
    static Date parse(const std::string& s) {
        if (s.size() != 10 || s[4] != '-' || s[7] != '-')
            throw std::invalid_argument("malformed date: " + s);
        auto digits = [&](int from, int len) {
            int v = 0;
            for (int i = from; i < from + len; ++i) {
                if (s[i] < '0' || s[i] > '9')
                    throw std::invalid_argument("malformed date: " + s);
                v = v * 10 + (s[i] - '0');
            }
            return v;
        };
        Date d{digits(0, 4), digits(5, 2), digits(8, 2)};
        if (!d.valid()) throw std::invalid_argument("invalid date: " + s);
        return d;
    }

    std::string str() const {
        char buf[11];
        std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
        return buf;
    }
};

// Completed years between birth and reference (floor of the calendar
// difference; the birthday itself already counts).
inline int age_at(const Date& birth, const Date& reference) {
    if (reference < birth)
        throw std::invalid_argument("reference date precedes birth date");
    int age = reference.year - birth.year;
    if (reference.month < birth.month ||
        (reference.month == birth.month && reference.day < birth.day))
        --age;
    return age;
}

}  // namespace hsasim
