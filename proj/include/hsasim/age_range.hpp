#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>

#include "hsasim/date.hpp"

namespace hsasim {

// Nine age bands covering 21..65. The first band (21-24) appears in
// persistence analysis only; simulation strata use the last eight.
enum class AgeRange : int {
    A21_24 = 0,
    A25_30 = 1,
    A31_35 = 2,
    A36_40 = 3,
    A41_45 = 4,
    A46_50 = 5,
    A51_55 = 6,
    A56_60 = 7,
    A61_65 = 8,
};

inline constexpr int kNumAgeRanges = 9;
inline constexpr int kFirstSimRange = 1;  // A25_30
inline constexpr int kNumSimRanges = 8;

struct AgeBand {
    int lo;
    int hi;
};

inline constexpr std::array<AgeBand, kNumAgeRanges> kAgeBands = {{
    {21, 24}, {25, 30}, {31, 35}, {36, 40}, {41, 45},
    {46, 50}, {51, 55}, {56, 60}, {61, 65},
}};

constexpr int index(AgeRange r) { return static_cast<int>(r); }

constexpr AgeBand band(AgeRange r) { return kAgeBands[index(r)]; }

inline std::string label(AgeRange r) {
    const AgeBand b = band(r);
    return std::to_string(b.lo) + "-" + std::to_string(b.hi);
}

inline AgeRange age_range_from_label(const std::string& s) {
    for (int i = 0; i < kNumAgeRanges; ++i)
        if (s == label(static_cast<AgeRange>(i))) return static_cast<AgeRange>(i);
    throw std::invalid_argument("unknown age range: " + s);
}

// Range containing a completed age, or nullopt outside 21..65.
constexpr std::optional<AgeRange> range_for_age(int age) {
    for (int i = 0; i < kNumAgeRanges; ++i)
        if (age >= kAgeBands[i].lo && age <= kAgeBands[i].hi)
            return static_cast<AgeRange>(i);
    return std::nullopt;
}

constexpr bool is_simulation_range(AgeRange r) {
    return index(r) >= kFirstSimRange;
}

// A month window, inclusive on both ends.
struct MonthWindow {
    int first_year;
    int first_month;
    int last_year;
    int last_month;

    int months() const {
        return (last_year - first_year) * 12 + (last_month - first_month) + 1;
    }
};

// The age range a person occupies for the most months of the window,
// measuring completed age on the first day of each month. Ties go to the
// older range. Months where the person is outside 21..65 do not count;
// if no month counts, this is an error.
inline AgeRange dominant_age_range(const Date& birth, const MonthWindow& w) {
    std::array<int, kNumAgeRanges> months{};
    int counted = 0;
    int y = w.first_year, m = w.first_month;
    for (int i = 0; i < w.months(); ++i) {
        const Date first_of_month{y, m, 1};
        if (!(first_of_month < birth)) {
            const int age = age_at(birth, first_of_month);
            if (auto r = range_for_age(age)) {
                ++months[index(*r)];
                ++counted;
            }
        }
        if (++m == 13) { m = 1; ++y; }
    }
    if (counted == 0)
        throw std::invalid_argument(
            "person outside the 21-65 age window for the whole period");
    int best = 0;
    for (int i = 1; i < kNumAgeRanges; ++i)
        if (months[i] >= months[best]) best = i;  // >= keeps the older range on ties
    return static_cast<AgeRange>(best);
}

}  // namespace hsasim
