#include "hsasim/sampler.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>

namespace hsasim {

namespace {

std::array<std::pair<std::size_t, std::size_t>, 4> slice_sorted(
    const std::vector<std::int64_t>& values, const LevelBreaks& breaks) {
    auto upper = [&](Money bound) -> std::size_t {
        return static_cast<std::size_t>(
            std::upper_bound(values.begin(), values.end(), bound.cents()) -
            values.begin());
    };
    const std::size_t e1 = upper(breaks.f1_max);
    const std::size_t e2 = upper(breaks.f2_max);
    const std::size_t e3 = upper(breaks.f3_max);
    return {{{0, e1}, {e1, e2}, {e2, e3}, {e3, values.size()}}};
}

}  // namespace

EmpiricalDistribution build_empirical(const Cohort& cohort,
                                      const Stratum& stratum) {
    EmpiricalDistribution d;
    d.stratum = stratum;
    for (const auto& p : cohort.persons) {
        if (p.sex != stratum.sex) continue;
        if (!p.dominant || *p.dominant != stratum.age_range) continue;
        for (const auto& e : p.expenses) d.values.push_back(e.cents());
    }
    if (d.values.empty())
        throw std::runtime_error("empty stratum " + label(stratum) +
                                 " in empirical distribution");
    std::sort(d.values.begin(), d.values.end());
    d.slices = slice_sorted(d.values, cohort.breaks);
    return d;
}

DistributionSet::DistributionSet(LevelBreaks breaks,
                                 std::vector<EmpiricalDistribution> strata)
    : breaks_(breaks), strata_(std::move(strata)) {
    if (strata_.size() != static_cast<std::size_t>(kNumSimStrata))
        throw std::invalid_argument("expected one distribution per simulation stratum");
}

DistributionSet DistributionSet::build(const Cohort& cohort) {
    std::vector<EmpiricalDistribution> all;
    all.reserve(kNumSimStrata);
    for (const auto& s : simulation_strata()) all.push_back(build_empirical(cohort, s));
    return DistributionSet(cohort.breaks, std::move(all));
}

Money DistributionSet::sample_within_level(const Stratum& stratum,
                                           ExpenseLevel level, Rng& rng) const {
    auto draw_from = [&](const EmpiricalDistribution& d) {
        const auto [b, e] = d.slices[static_cast<std::size_t>(index(level))];
        const std::size_t i = b + static_cast<std::size_t>(rng.below(e - b));
        return Money::from_cents(d.values[i]);
    };

    const EmpiricalDistribution& own = at(stratum);
    if (!own.slice_empty(level)) return draw_from(own);

    // Rule 1: adjacent age range, same sex, older side first.
    const int ri = index(stratum.age_range) - kFirstSimRange;
    for (int adj : {ri + 1, ri - 1}) {
        if (adj < 0 || adj >= kNumSimRanges) continue;
        const Stratum s{stratum.sex,
                        static_cast<AgeRange>(kFirstSimRange + adj)};
        if (!at(s).slice_empty(level)) return draw_from(at(s));
    }

    // Rules 2 and 3: uniform over the union of same-level slices, first
    // within the sex, then across everything.
    auto pooled_draw = [&](bool same_sex_only) -> std::optional<Money> {
        std::size_t total = 0;
        for (const auto& d : strata_) {
            if (same_sex_only && d.stratum.sex != stratum.sex) continue;
            total += d.slice_size(level);
        }
        if (total == 0) return std::nullopt;
        std::size_t i = static_cast<std::size_t>(rng.below(total));
        for (const auto& d : strata_) {
            if (same_sex_only && d.stratum.sex != stratum.sex) continue;
            const std::size_t n = d.slice_size(level);
            if (i < n) {
                const auto [b, e] = d.slices[static_cast<std::size_t>(index(level))];
                (void)e;
                return Money::from_cents(d.values[b + i]);
            }
            i -= n;
        }
        return std::nullopt;  // unreachable
    };
    if (auto m = pooled_draw(true)) return *m;
    if (auto m = pooled_draw(false)) return *m;
    throw std::runtime_error("no values anywhere for level " + label(level));
}

InitialLifePool::InitialLifePool(const Cohort& cohort) {
    if (cohort.study_years.size() < 2)
        throw std::invalid_argument("initial lives need at least two study years");
    const int last = static_cast<int>(cohort.study_years.size()) - 1;
    const int final_year = cohort.study_years.back();
    for (const auto& p : cohort.persons) {
        const int age = p.age_at_end_of(final_year);
        if (age < band(AgeRange::A25_30).lo || age > band(AgeRange::A25_30).hi)
            continue;
        pool_.push_back(InitialLife{p.sex, p.levels[last - 1], p.levels[last],
                                    p.expenses[last]});
    }
    if (pool_.empty())
        throw std::runtime_error(
            "no cohort members aged 25-30 in the final study year");
}

InitialLife InitialLifePool::sample(Rng& rng) const {
    return pool_[static_cast<std::size_t>(rng.below(pool_.size()))];
}

}  // namespace hsasim
