#pragma once

#include <array>
#include <compare>
#include <stdexcept>
#include <string>

#include "hsasim/age_range.hpp"

namespace hsasim {

enum class Sex : int { female = 0, male = 1 };

inline constexpr std::array<Sex, 2> kBothSexes = {Sex::female, Sex::male};

constexpr int index(Sex s) { return static_cast<int>(s); }

inline std::string label(Sex s) { return s == Sex::female ? "F" : "M"; }

inline Sex sex_from_label(const std::string& s) {
    if (s == "F") return Sex::female;
    if (s == "M") return Sex::male;
    throw std::invalid_argument("unknown sex: " + s + " (expected F or M)");
}

// One (sex, age range) estimation cell. Simulation uses the 16 cells
// built from the eight ranges 25-30 .. 61-65.
struct Stratum {
    Sex sex;
    AgeRange age_range;

    friend constexpr auto operator<=>(const Stratum&, const Stratum&) = default;
};

inline std::string label(const Stratum& s) {
    return label(s.sex) + " " + label(s.age_range);
}

inline constexpr int kNumSimStrata = 2 * kNumSimRanges;

// Dense index 0..15 over the simulation strata, female block first.
constexpr int sim_stratum_index(const Stratum& s) {
    if (!is_simulation_range(s.age_range))
        throw std::invalid_argument("age range 21-24 is not a simulation stratum");
    return index(s.sex) * kNumSimRanges + (index(s.age_range) - kFirstSimRange);
}

constexpr Stratum sim_stratum_at(int i) {
    if (i < 0 || i >= kNumSimStrata) throw std::invalid_argument("bad stratum index");
    return Stratum{static_cast<Sex>(i / kNumSimRanges),
                   static_cast<AgeRange>(kFirstSimRange + i % kNumSimRanges)};
}

inline std::array<Stratum, kNumSimStrata> simulation_strata() {
    std::array<Stratum, kNumSimStrata> out{};
    for (int i = 0; i < kNumSimStrata; ++i) out[i] = sim_stratum_at(i);
    return out;
}

}  // namespace hsasim
