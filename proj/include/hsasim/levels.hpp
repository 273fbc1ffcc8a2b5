#pragma once

#include <array>
#include <stdexcept>
#include <string>

#include "hsasim/money.hpp"

namespace hsasim {

// Annual-expense bands. F1 = [0, 300], F2 = (300, 1000], F3 = (1000, 5000],
// F4 = (5000, inf), in R$, upper boundaries inclusive.
enum class ExpenseLevel : int { F1 = 0, F2 = 1, F3 = 2, F4 = 3 };

inline constexpr int kNumLevels = 4;

inline constexpr std::array<ExpenseLevel, 4> kAllLevels = {
    ExpenseLevel::F1, ExpenseLevel::F2, ExpenseLevel::F3, ExpenseLevel::F4};

constexpr int index(ExpenseLevel l) { return static_cast<int>(l); }

constexpr ExpenseLevel level_from_index(int i) {
    if (i < 0 || i >= kNumLevels) throw std::invalid_argument("bad level index");
    return static_cast<ExpenseLevel>(i);
}

inline std::string label(ExpenseLevel l) {
    static const char* names[] = {"F1", "F2", "F3", "F4"};
    return names[index(l)];
}

inline ExpenseLevel level_from_label(const std::string& s) {
    for (int i = 0; i < kNumLevels; ++i)
        if (s == label(static_cast<ExpenseLevel>(i))) return static_cast<ExpenseLevel>(i);
    throw std::invalid_argument("unknown expense level: " + s);
}

// The three break points between the four bands.
struct LevelBreaks {
    Money f1_max = Money::from_reais(300);
    Money f2_max = Money::from_reais(1000);
    Money f3_max = Money::from_reais(5000);

    constexpr bool ordered() const { return f1_max < f2_max && f2_max < f3_max; }
};

constexpr ExpenseLevel classify_level(Money expense,
                                      const LevelBreaks& breaks = {}) {
    if (expense <= breaks.f1_max) return ExpenseLevel::F1;
    if (expense <= breaks.f2_max) return ExpenseLevel::F2;
    if (expense <= breaks.f3_max) return ExpenseLevel::F3;
    return ExpenseLevel::F4;
}

}  // namespace hsasim
