#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hsasim/date.hpp"
#include "hsasim/levels.hpp"
#include "hsasim/money.hpp"
#include "hsasim/stratum.hpp"

namespace hsasim {

// One person's annual expense for one calendar year.
struct PersonYearRecord {
    std::string person_id;
    Sex sex;
    Date birth_date;
    int year;
    Money expense;
};

// Raw longitudinal claims data over a consecutive run of calendar years.
struct Dataset {
    std::vector<PersonYearRecord> records;
    std::vector<int> study_years;  // consecutive, ascending
};

// One person after cohort filtering: a complete follow-up with one
// expense per study year, levels precomputed.
struct PersonHistory {
    std::string id;
    Sex sex;
    Date birth_date;
    std::vector<Money> expenses;        // aligned with Cohort::study_years
    std::vector<ExpenseLevel> levels;   // classified from expenses
    std::optional<AgeRange> dominant;   // over the last three study years

    // Completed age on December 31 of the given year.
    int age_at_end_of(int year) const {
        return age_at(birth_date, Date{year, 12, 31});
    }
};

struct Cohort {
    std::vector<int> study_years;
    std::vector<PersonHistory> persons;  // sorted by id
    LevelBreaks breaks;

    int year_index(int year) const {
        for (std::size_t i = 0; i < study_years.size(); ++i)
            if (study_years[i] == year) return static_cast<int>(i);
        throw std::invalid_argument("year " + std::to_string(year) +
                                    " is outside the study window");
    }

    // The month window of the last three study years (the triennial used
    // for order-2 estimation and stratum assignment).
    MonthWindow triennial_window() const {
        if (study_years.size() < 3)
            throw std::invalid_argument("study window shorter than three years");
        const int last = study_years.back();
        return MonthWindow{last - 2, 1, last, 12};
    }
};

}  // namespace hsasim
