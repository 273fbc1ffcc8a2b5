#pragma once

// Shared fixture builders for the test suites: synthetic persons with
// chosen level sequences, routed through the public ingest path so every
// test exercises the same invariants as production loads.

#include <algorithm>
#include <array>
#include <map>
#include <string>
#include <vector>

#include "hsasim/ingest.hpp"
#include "hsasim/markov.hpp"
#include "hsasim/sampler.hpp"

namespace hsasim::testing {

// A representative expense inside each level (R$ cents).
inline Money expense_for(ExpenseLevel l) {
    switch (l) {
        case ExpenseLevel::F1: return Money::from_reais(100);
        case ExpenseLevel::F2: return Money::from_reais(500);
        case ExpenseLevel::F3: return Money::from_reais(2000);
        case ExpenseLevel::F4: return Money::from_reais(10000);
    }
    throw std::logic_error("bad level");
}

struct FixturePerson {
    std::string id;
    Sex sex = Sex::female;
    Date birth{1974, 6, 15};
    std::vector<ExpenseLevel> levels;     // one per study year
    std::vector<Money> expenses;          // optional, overrides levels
};

inline Dataset build_dataset(const std::vector<FixturePerson>& persons,
                             int first_year = 2005) {
    Dataset ds;
    std::size_t n_years = 0;
    for (const auto& p : persons) {
        const auto years =
            p.expenses.empty() ? p.levels.size() : p.expenses.size();
        n_years = std::max(n_years, years);
        for (std::size_t y = 0; y < years; ++y) {
            const Money e = p.expenses.empty()
                                ? expense_for(p.levels[y])
                                : p.expenses[y];
            ds.records.push_back(PersonYearRecord{
                p.id, p.sex, p.birth, first_year + static_cast<int>(y), e});
        }
    }
    for (std::size_t y = 0; y < n_years; ++y)
        ds.study_years.push_back(first_year + static_cast<int>(y));
    return ds;
}

inline Cohort build_cohort(const std::vector<FixturePerson>& persons,
                           int first_year = 2005) {
    return filter_cohort(build_dataset(persons, first_year)).cohort;
}

// Birth dates that put a person's dominant range (over the last three of
// five study years starting in 2005) squarely inside one band, while
// passing the 25..65 cohort filter.
inline Date birth_for_range(AgeRange r) {
    switch (r) {
        case AgeRange::A25_30: return Date{1979, 6, 15};  // 27..30 in 2007-2009
        case AgeRange::A31_35: return Date{1974, 6, 15};  // 32..35
        case AgeRange::A36_40: return Date{1969, 6, 15};  // 37..40
        case AgeRange::A41_45: return Date{1964, 6, 15};  // 42..45
        case AgeRange::A46_50: return Date{1959, 6, 15};  // 47..50
        case AgeRange::A51_55: return Date{1954, 6, 15};  // 52..55
        case AgeRange::A56_60: return Date{1949, 6, 15};  // 57..60
        case AgeRange::A61_65: return Date{1944, 6, 15};  // 62..65
        case AgeRange::A21_24: break;
    }
    throw std::logic_error("no cohort-safe birth date for 21-24");
}

// A cohort whose members never spend anything: one person per simulation
// stratum, all levels F1, all expenses zero. The estimated model forces
// F1 wherever the chain can actually go, so simulated lives are
// all-deposit and replications are identical.
inline Cohort quiet_cohort() {
    std::vector<FixturePerson> persons;
    int i = 0;
    for (const auto& s : simulation_strata()) {
        FixturePerson p;
        p.id = "q" + std::to_string(i++);
        p.sex = s.sex;
        p.birth = birth_for_range(s.age_range);
        p.levels.assign(5, ExpenseLevel::F1);
        p.expenses.assign(5, Money{});
        persons.push_back(std::move(p));
    }
    return build_cohort(persons);
}

inline EmpiricalDistribution make_dist(const Stratum& s,
                                       std::vector<std::int64_t> cents,
                                       const LevelBreaks& breaks = {}) {
    std::sort(cents.begin(), cents.end());
    EmpiricalDistribution d;
    d.stratum = s;
    d.values = std::move(cents);
    auto upper = [&](Money b) {
        return static_cast<std::size_t>(
            std::upper_bound(d.values.begin(), d.values.end(), b.cents()) -
            d.values.begin());
    };
    d.slices = {{{0, upper(breaks.f1_max)},
                 {upper(breaks.f1_max), upper(breaks.f2_max)},
                 {upper(breaks.f2_max), upper(breaks.f3_max)},
                 {upper(breaks.f3_max), d.values.size()}}};
    return d;
}

// A model whose every row deterministically selects next_of[range].
inline TransitionModel forced_model(
    const std::map<AgeRange, ExpenseLevel>& next_of) {
    TransitionModel model;
    model.years = {2007, 2008, 2009};
    model.strata.resize(kNumSimStrata);
    for (const auto& s : simulation_strata()) {
        Order2Matrix m;
        m.stratum = s;
        m.years = model.years;
        const ExpenseLevel target = next_of.at(s.age_range);
        for (int r = 0; r < 16; ++r) {
            m.probs[static_cast<std::size_t>(r)].fill(0.0);
            m.probs[static_cast<std::size_t>(r)][static_cast<std::size_t>(
                index(target))] = 1.0;
            m.provenance[static_cast<std::size_t>(r)] = RowProvenance::observed;
        }
        model.strata[static_cast<std::size_t>(sim_stratum_index(s))] = m;
    }
    return model;
}

inline std::map<AgeRange, ExpenseLevel> all_ranges(ExpenseLevel l) {
    std::map<AgeRange, ExpenseLevel> out;
    for (const auto& s : simulation_strata()) out[s.age_range] = l;
    return out;
}

}  // namespace hsasim::testing
