// Acceptance suite: one pass/fail line per criterion, nonzero exit if
// any fails. Tolerances are pinned in code next to each check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <vector>

#include "hsasim/ingest.hpp"
#include "hsasim/markov.hpp"
#include "hsasim/report.hpp"
#include "hsasim/sampler.hpp"
#include "hsasim/sim.hpp"
#include "hsasim/stats.hpp"
#include "hsasim/synth.hpp"

using namespace hsasim;

namespace {

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void expect(bool ok, const std::string& what) {
    if (!ok) throw Failure(what);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

// ---------------------------------------------------------------------------
// shared fixtures

Money level_expense(ExpenseLevel l) {
    switch (l) {
        case ExpenseLevel::F1: return Money::from_reais(100);
        case ExpenseLevel::F2: return Money::from_reais(500);
        case ExpenseLevel::F3: return Money::from_reais(2000);
        case ExpenseLevel::F4: return Money::from_reais(10000);
    }
    throw std::logic_error("bad level");
}

struct RawPerson {
    std::string id;
    Sex sex;
    Date birth;
    std::vector<ExpenseLevel> levels;
};

Cohort cohort_from(const std::vector<RawPerson>& persons) {
    Dataset ds;
    ds.study_years = {2005, 2006, 2007, 2008, 2009};
    for (const auto& p : persons)
        for (int y = 0; y < 5; ++y)
            ds.records.push_back(
                PersonYearRecord{p.id, p.sex, p.birth, 2005 + y,
                                 level_expense(p.levels[static_cast<std::size_t>(y)])});
    return filter_cohort(ds).cohort;
}

Date birth_for(AgeRange r) {
    static const std::map<AgeRange, Date> table = {
        {AgeRange::A25_30, Date{1979, 6, 15}}, {AgeRange::A31_35, Date{1974, 6, 15}},
        {AgeRange::A36_40, Date{1969, 6, 15}}, {AgeRange::A41_45, Date{1964, 6, 15}},
        {AgeRange::A46_50, Date{1959, 6, 15}}, {AgeRange::A51_55, Date{1954, 6, 15}},
        {AgeRange::A56_60, Date{1949, 6, 15}}, {AgeRange::A61_65, Date{1944, 6, 15}},
    };
    return table.at(r);
}

std::vector<RawPerson> fixture_persons(int n, unsigned seed) {
    std::mt19937 gen(seed);
    const std::array<AgeRange, 4> ranges = {AgeRange::A25_30, AgeRange::A31_35,
                                            AgeRange::A41_45, AgeRange::A56_60};
    std::vector<RawPerson> out;
    for (int i = 0; i < n; ++i) {
        RawPerson p;
        p.id = "p" + std::to_string(i);
        p.sex = (gen() % 2) ? Sex::male : Sex::female;
        p.birth = birth_for(ranges[gen() % ranges.size()]);
        for (int y = 0; y < 5; ++y)
            p.levels.push_back(level_from_index(static_cast<int>(gen() % 4)));
        out.push_back(std::move(p));
    }
    return out;
}

StudyResult synthetic_study(int persons, int lives, int reps, int threads,
                            std::uint64_t seed) {
    SynthCalibration calib = default_calibration();
    calib.n_persons = persons;
    const Cohort cohort = filter_cohort(generate_dataset(calib)).cohort;
    const TransitionModel model = estimate_model(cohort);
    const DistributionSet dists = DistributionSet::build(cohort);
    SimulationParams params;
    params.n_lives = lives;
    params.n_replications = reps;
    params.threads = threads;
    params.master_seed = seed;
    return run_study(model, dists, cohort, params);
}

// ---------------------------------------------------------------------------
// criteria

void criterion_estimators() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto persons = fixture_persons(90, 424242);
    const Cohort cohort = cohort_from(persons);
    expect(cohort.persons.size() == 90, "fixture must keep 90 persons");

    // Pairwise vs exhaustive counting, all year pairs.
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = i + 1; j < 5; ++j) {
            const PairwiseMatrix m =
                estimate_pairwise(cohort, 2005 + static_cast<int>(i),
                                  2005 + static_cast<int>(j));
            std::array<std::array<std::int64_t, 4>, 4> oracle{};
            for (const auto& p : persons)
                ++oracle[static_cast<std::size_t>(index(p.levels[i]))]
                        [static_cast<std::size_t>(index(p.levels[j]))];
            expect(m.counts == oracle, "pairwise counts differ from oracle");
            for (int k = 0; k < 4; ++k) {
                if (m.row_empty(k)) continue;
                double sum = 0;
                for (double v : m.probs[static_cast<std::size_t>(k)]) sum += v;
                expect(std::abs(sum - 1.0) <= 1e-9, "pairwise row not stochastic");
            }
        }

    // Order-2 vs exhaustive triple counting, every stratum.
    const MonthWindow window{2007, 1, 2009, 12};
    for (const auto& stratum : simulation_strata()) {
        const Order2Matrix m = estimate_order2(cohort, {2007, 2008, 2009}, stratum);
        std::array<std::array<std::int64_t, 4>, 16> oracle{};
        for (const auto& p : persons) {
            if (p.sex != stratum.sex) continue;
            if (dominant_age_range(p.birth, window) != stratum.age_range) continue;
            const int row = index(p.levels[2]) * 4 + index(p.levels[3]);
            ++oracle[static_cast<std::size_t>(row)]
                    [static_cast<std::size_t>(index(p.levels[4]))];
        }
        expect(m.counts == oracle, "order-2 counts differ from oracle");
        for (int r = 0; r < 16; ++r) {
            if (m.row_empty(r)) continue;
            double sum = 0;
            for (double v : m.probs[static_cast<std::size_t>(r)]) sum += v;
            expect(std::abs(sum - 1.0) <= 1e-9, "order-2 row not stochastic");
        }
    }
    expect(seconds_since(t0) < 1.0, "estimator check exceeded 1 s");
}

void criterion_conservation() {
    const auto t0 = std::chrono::steady_clock::now();
    const StudyResult study = synthetic_study(4000, 10000, 10, 2, 90210);

    const std::int64_t deposits_per_life =
        study.params.hsa.annual_deposit.cents() * study.params.hsa.deposits;
    std::int64_t sum_exp = 0, sum_hsa = 0, sum_ci = 0, sum_dep = 0;
    for (const auto& rep : study.lives) {
        expect(rep.size() == 10000, "replication must hold 10,000 lives");
        for (const auto& l : rep) {
            expect(l.final_balance + l.hsa_total == deposits_per_life,
                   "per-life deposit identity violated");
            expect(l.expense_total == l.hsa_total + l.ci_total,
                   "per-life expense identity violated");
            sum_exp += l.expense_total;
            sum_hsa += l.hsa_total;
            sum_ci += l.ci_total;
            sum_dep += deposits_per_life;
        }
    }
    expect(study.total_expenses == sum_exp && study.total_hsa == sum_hsa &&
               study.total_ci == sum_ci && study.total_deposits == sum_dep,
           "aggregate totals differ from per-life sums");
    expect(study.total_expenses == study.total_hsa + study.total_ci,
           "aggregate expense identity violated");
    expect(study.replications.size() == 10, "expected 10 replications");
    expect(seconds_since(t0) < 60.0, "conservation study exceeded 60 s");
}

void criterion_zero_expense_balance() {
    const InitialLife quiet{Sex::female, ExpenseLevel::F1, ExpenseLevel::F1,
                            Money{}};
    HsaParams params;
    params.years = 41;
    params.deposits = 40;
    auto t = simulate_account(quiet, [](int) { return Money{}; }, params);
    expect(t.final_balance == Money::from_reais(100000),
           "40 deposits must leave exactly R$ 100,000");
    params.deposits = 41;
    t = simulate_account(quiet, [](int) { return Money{}; }, params);
    expect(t.final_balance == Money::from_reais(102500),
           "41 deposits must leave exactly R$ 102,500");
}

void criterion_hsa_rules() {
    SynthCalibration calib = default_calibration();
    calib.n_persons = 2000;
    const Cohort cohort = filter_cohort(generate_dataset(calib)).cohort;
    const TransitionModel model = estimate_model(cohort);
    const DistributionSet dists = DistributionSet::build(cohort);
    const InitialLifePool pool(cohort);

    SimulationParams params;
    params.n_lives = 1000;
    params.n_replications = 1;

    std::int64_t audited_years = 0;
    const auto audit = [&](int, const LifeTrajectory& t) {
        Money balance;
        for (std::size_t y = 0; y < t.years.size(); ++y) {
            if (static_cast<int>(y) < params.hsa.deposits)
                balance += params.hsa.annual_deposit;
            const Money before = balance;
            const auto& yo = t.years[y];
            expect(yo.hsa_paid <= params.hsa.annual_cap,
                   "hsa_paid exceeds the annual cap");
            expect(yo.hsa_paid <= before, "hsa_paid exceeds the balance");
            balance = before - yo.hsa_paid;  // throws if negative
            expect(balance == yo.balance_after, "balance recurrence mismatch");
            ++audited_years;
        }
    };
    run_replication(model, dists, pool, params, 0, audit);
    expect(audited_years == 1000 * 41, "audit must cover every life-year");
}

void criterion_determinism() {
    std::vector<StudyResult> results;
    for (int threads : {1, 2, 8})
        results.push_back(synthetic_study(1200, 300, 4, threads, 777));
    expect(identical(results[0], results[1]),
           "thread counts 1 and 2 disagree");
    expect(identical(results[0], results[2]),
           "thread counts 1 and 8 disagree");
}

void criterion_sampler_conditioning() {
    SynthCalibration calib = default_calibration();
    calib.n_persons = 12000;
    const Cohort cohort = filter_cohort(generate_dataset(calib)).cohort;
    const DistributionSet dists = DistributionSet::build(cohort);

    Rng rng(31337);
    const int n_draws = 100000;
    for (const auto& stratum : simulation_strata()) {
        const EmpiricalDistribution& d = dists.at(stratum);
        for (const auto level : kAllLevels) {
            const std::size_t size = d.slice_size(level);
            expect(size > 0, "fixture slice unexpectedly empty for " +
                                 label(stratum) + " " + label(level));
            const auto [begin, end] =
                d.slices[static_cast<std::size_t>(index(level))];
            // Count draws per distinct slice position via value counts.
            std::map<std::int64_t, std::int64_t> value_counts;
            for (std::size_t i = begin; i < end; ++i)
                value_counts[d.values[i]] += 0;
            for (int i = 0; i < n_draws; ++i) {
                const Money v = dists.sample_within_level(stratum, level, rng);
                expect(classify_level(v) == level,
                       "draw fell outside the requested level");
                ++value_counts[v.cents()];
            }
            // Uniformity over slice positions: expected count per value is
            // draws * multiplicity / size.
            std::map<std::int64_t, std::int64_t> multiplicity;
            for (std::size_t i = begin; i < end; ++i) ++multiplicity[d.values[i]];
            double x2 = 0.0;
            for (const auto& [value, mult] : multiplicity) {
                const double expected =
                    static_cast<double>(n_draws) * static_cast<double>(mult) /
                    static_cast<double>(size);
                const double observed =
                    static_cast<double>(value_counts.at(value));
                x2 += (observed - expected) * (observed - expected) / expected;
            }
            const int df = static_cast<int>(multiplicity.size()) - 1;
            if (df >= 1)
                expect(x2 < chi_square_critical(df, 0.001),
                       "uniformity rejected at alpha=0.001 for " +
                           label(stratum) + " " + label(level));
        }
    }
}

void criterion_persistence_decay() {
    SynthCalibration calib = default_calibration();
    calib.n_persons = 8000;
    const Cohort cohort = filter_cohort(generate_dataset(calib)).cohort;
    const auto report = persistence_report(cohort);
    double gap1 = 0, gap4 = 0;
    int n1 = 0, n4 = 0;
    for (const auto& m : report) {
        if (m.gap() == 1) {
            gap1 += m.mean_diagonal();
            ++n1;
        }
        if (m.gap() == 4) {
            gap4 += m.mean_diagonal();
            ++n4;
        }
    }
    gap1 /= n1;
    gap4 /= n4;
    std::ostringstream msg;
    msg << "gap-1 mean diagonal " << gap1 << " must exceed gap-4 " << gap4;
    expect(gap1 > gap4, msg.str());
}

void criterion_report_oracle() {
    // Toy study: 3 lives, 3 years, every life spends R$ 6,000 a year.
    // Hand trace per life: deposits 3 x 2500; each year hsa 2500, ci 3500;
    // final balance 0, hsa total 7500, ci total 10500, 3 insurance uses.
    std::vector<RawPerson> persons;
    int i = 0;
    for (const auto& s : simulation_strata()) {
        RawPerson p;
        p.id = "t" + std::to_string(i++);
        p.sex = s.sex;
        p.birth = birth_for(s.age_range);
        p.levels.assign(5, ExpenseLevel::F4);
        persons.push_back(std::move(p));
    }
    Dataset ds;
    ds.study_years = {2005, 2006, 2007, 2008, 2009};
    for (const auto& p : persons)
        for (int y = 0; y < 5; ++y)
            ds.records.push_back(PersonYearRecord{p.id, p.sex, p.birth, 2005 + y,
                                                  Money::from_reais(6000)});
    const Cohort cohort = filter_cohort(ds).cohort;
    const TransitionModel model = estimate_model(cohort);
    const DistributionSet dists = DistributionSet::build(cohort);

    SimulationParams params;
    params.n_lives = 3;
    params.n_replications = 2;
    params.hsa.years = 3;
    params.hsa.deposits = 3;
    params.snapshot_ages = {26, 27};
    const StudyResult study = run_study(model, dists, cohort, params);

    const auto snapshots = balance_snapshots(study, {26, 27});
    for (const auto& col : snapshots) {
        expect(col.n_zero.mean == 3.0 && col.n_zero.sd == 0.0,
               "toy snapshot n0 must be 3 exactly");
        for (const auto& [q, m] : col.percentiles)
            expect(m.mean == 0.0, "toy snapshot balances must be zero");
    }

    const auto usage = ci_usage_table(study);
    expect(usage.size() == 4, "toy usage table must have rows 0..3");
    expect(usage[3].n_lives.mean == 3.0 && usage[3].n_lives.sd == 0.0,
           "toy usage row 3 must hold all lives");
    expect(std::abs(usage[3].pct_of_lives.mean - 100.0) < 1e-12 &&
               std::abs(usage[3].cum_pct_of_lives - 100.0) < 1e-12 &&
               std::abs(usage[3].cum_pct_of_ci - 100.0) < 1e-12,
           "cumulative columns must end at exactly 100.00");
    expect(std::abs(usage[3].total_ci.mean - 31500.0) < 1e-9 &&
               std::abs(usage[3].mean_ci_per_life.mean - 10500.0) < 1e-9,
           "toy severity must match the hand computation");

    const CoverageSummary cs = coverage_summary(study);
    expect(std::abs(cs.hsa.mean.mean - 7500.0) < 1e-9,
           "toy HSA coverage must be 7,500");
    expect(std::abs(cs.ci.mean.mean - 10500.0) < 1e-9,
           "toy CI coverage must be 10,500");
    expect(cs.balance.pct_zero.mean == 100.0, "toy balances must all be zero");

    // Tukey fixture: {1..100, 10000} has exactly one outlier.
    std::vector<double> values;
    for (int v = 1; v <= 100; ++v) values.push_back(v);
    values.push_back(10000.0);
    const auto outliers = tukey_outliers(values);
    expect(outliers.size() == 1 && outliers[0] == 10000.0,
           "Tukey fixture must yield exactly one outlier");
}

void criterion_structural_tables() {
    // The paper-scale numbers depend on proprietary claims data and are
    // out of acceptance; what ships is the identical table structure
    // computed from synthetic data. Checked here: the full row/column
    // skeleton of every table on a synthetic study.
    const StudyResult study = synthetic_study(1500, 400, 3, 2, 1234);
    const auto snapshots = balance_snapshots(study, study.params.snapshot_ages);
    expect(snapshots.size() == 8, "table 5 must have 8 snapshot columns");
    for (const auto& col : snapshots)
        expect(col.percentiles.size() == kSimTablePercentiles.size(),
               "table 5 percentile rows incomplete");
    const auto usage = ci_usage_table(study);
    expect(!usage.empty(), "table 6 must have rows");
    expect(std::abs(usage.back().cum_pct_of_lives - 100.0) < 1e-9,
           "table 6 cumulative must end at 100");
    const CoverageSummary cs = coverage_summary(study);
    expect(cs.balance.percentiles.size() == kSimTablePercentiles.size() &&
               cs.hsa.percentiles.size() == kSimTablePercentiles.size() &&
               cs.ci.percentiles.size() == kSimTablePercentiles.size(),
           "table 7 must expose all three percentile columns");
    expect(std::isfinite(cs.skewness), "skewness must be computed");
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<void()> body;
    };
    const std::vector<Criterion> criteria = {
        {1, "estimator oracle equivalence (< 1 s)", criterion_estimators},
        {2, "exact conservation on a 10,000 x 10 x 41 study (< 60 s)",
         criterion_conservation},
        {3, "zero-expense balance: 40 deposits = R$100,000, 41 = R$102,500",
         criterion_zero_expense_balance},
        {4, "HSA rules hold on an audited 1,000-life study", criterion_hsa_rules},
        {5, "bit-identical results for 1, 2 and 8 threads", criterion_determinism},
        {6, "sampler conditioning and uniformity (alpha = 0.001)",
         criterion_sampler_conditioning},
        {7, "persistence decays: gap-1 diagonal exceeds gap-4",
         criterion_persistence_decay},
        {8, "report tables equal the hand-computed toy oracle",
         criterion_report_oracle},
        {9, "synthetic-data tables keep the full structure (paper values"
            " out of acceptance)",
         criterion_structural_tables},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.body();
            std::printf("[PASS] %d. %s (%.2fs)\n", c.id, c.name,
                        seconds_since(t0));
        } catch (const std::exception& e) {
            ++failures;
            std::printf("[FAIL] %d. %s: %s\n", c.id, c.name, e.what());
        }
        std::fflush(stdout);
    }
    if (failures) std::printf("%d criteria failed\n", failures);
    return failures ? 1 : 0;
}
