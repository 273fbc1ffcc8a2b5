#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "hsasim/records.hpp"
#include "hsasim/rng.hpp"

namespace hsasim {

// Pooled annual expenses of one stratum's members over all study years,
// sorted ascending so each expense level owns a contiguous slice.
struct EmpiricalDistribution {
    Stratum stratum{Sex::female, AgeRange::A25_30};
    std::vector<std::int64_t> values;                       // cents, sorted
    std::array<std::pair<std::size_t, std::size_t>, 4> slices{};  // [begin, end) per level

    std::size_t slice_size(ExpenseLevel l) const {
        const auto [b, e] = slices[static_cast<std::size_t>(index(l))];
        return e - b;
    }
    bool slice_empty(ExpenseLevel l) const { return slice_size(l) == 0; }
};

// Membership: dominant age range over the last three study years plus
// sex; each member contributes one value per study year.
EmpiricalDistribution build_empirical(const Cohort& cohort, const Stratum& stratum);

// The 16 per-stratum distributions plus the cross-stratum fallback rules
// for empty slices.
class DistributionSet {
public:
    DistributionSet() = default;
    DistributionSet(LevelBreaks breaks, std::vector<EmpiricalDistribution> strata);

    static DistributionSet build(const Cohort& cohort);

    // Uniform draw from the requested stratum's slice for `level`. When
    // that slice is empty: (1) an adjacent age range of the same sex,
    // older first; (2) the level pooled over the sex's eight ranges;
    // (3) the level pooled over everything; (4) error.
    Money sample_within_level(const Stratum& stratum, ExpenseLevel level,
                              Rng& rng) const;

    const EmpiricalDistribution& at(const Stratum& s) const {
        return strata_.at(static_cast<std::size_t>(sim_stratum_index(s)));
    }
    const std::vector<EmpiricalDistribution>& strata() const { return strata_; }
    const LevelBreaks& breaks() const { return breaks_; }

private:
    LevelBreaks breaks_;
    std::vector<EmpiricalDistribution> strata_;  // size kNumSimStrata
};

// A life entering the simulation at 25: the source person's last two
// observed levels plus the final-year expense, dependence preserved.
struct InitialLife {
    Sex sex = Sex::female;
    ExpenseLevel level_prev = ExpenseLevel::F1;   // proxy for age 24
    ExpenseLevel level_first = ExpenseLevel::F1;  // age 25
    Money first_expense;
};

// Source pool: cohort members aged 25..30 (completed, on Dec 31 of the
// final study year). Sampling is uniform with replacement.
class InitialLifePool {
public:
    explicit InitialLifePool(const Cohort& cohort);

    InitialLife sample(Rng& rng) const;
    std::size_t size() const { return pool_.size(); }

private:
    std::vector<InitialLife> pool_;
};

inline InitialLife sample_initial_life(const Cohort& cohort, Rng& rng) {
    return InitialLifePool(cohort).sample(rng);
}

}  // namespace hsasim
