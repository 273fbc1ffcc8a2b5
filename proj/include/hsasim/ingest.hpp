#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>

#include "hsasim/records.hpp"

namespace hsasim {

// Input format: UTF-8 CSV, header `person_id,sex,birth_date,year,expense`,
// sex F|M, birth_date ISO-8601, expense decimal with at most two
// fractional digits. One row per person-year.
Dataset load_person_years(const std::string& path);
Dataset read_person_years(std::istream& in, const std::string& origin);

void write_person_years(const Dataset& dataset, const std::string& path);

struct CohortFilterParams {
    int min_age_at_start = 25;  // completed age on Jan 1 of the first study year
    int max_age_at_end = 65;    // completed age on Dec 31 of the last study year
    LevelBreaks breaks;
};

struct CohortFilterReport {
    std::size_t kept = 0;
    std::size_t dropped_age_window = 0;
    std::size_t dropped_incomplete = 0;

    std::size_t total() const {
        return kept + dropped_age_window + dropped_incomplete;
    }
};

struct CohortFilterResult {
    Cohort cohort;
    CohortFilterReport report;
};

// Keeps exactly the persons with a record in every study year and a
// completed age inside [min, max] at the anchor dates. Age is tested
// first, then follow-up completeness.
CohortFilterResult filter_cohort(const Dataset& dataset,
                                 const CohortFilterParams& params = {});

// A cohort viewed as a dataset again (used to state filter idempotence).
Dataset to_dataset(const Cohort& cohort);

}  // namespace hsasim
