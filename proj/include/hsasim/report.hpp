#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hsasim/records.hpp"
#include "hsasim/sim.hpp"
#include "hsasim/stats.hpp"

namespace hsasim {

// Descriptive-statistics row set used by the cohort expense tables.
inline constexpr std::array<double, 11> kDescriptivePercentiles = {
    25, 50, 75, 90, 95, 96, 97, 98, 99, 99.5, 99.9};

struct StatsSummary {
    std::int64_t n = 0;              // all values, zeros included
    double pct_no_expense = 0.0;     // share of exact zeros, in percent
    bool positive_only = false;      // percentiles/mean/sd/max over positives
    std::int64_t n_stat = 0;         // how many values fed the statistics
    std::vector<std::pair<double, double>> percentiles;
    double max = 0.0;
    double mean = 0.0;
    double sd = 0.0;
};

// values are cents; statistics are reported in R$.
StatsSummary descriptive_stats(std::span<const std::int64_t> values,
                               bool positive_only);

// Cross-replication aggregate of one statistic.
struct Aggregate {
    MeanSd value;
};

// Table of HSA balances at the snapshot ages: every row is the
// (mean, sd) over replications of a within-replication statistic.
struct BalanceSnapshotColumn {
    int age = 0;
    MeanSd n_zero;
    std::vector<std::pair<double, MeanSd>> percentiles;
    MeanSd max;
    MeanSd mean;
    MeanSd sd;
};

std::vector<BalanceSnapshotColumn> balance_snapshots(
    const StudyResult& study, const std::vector<int>& snapshot_ages);

// Frequency/severity of catastrophic-insurance use. Rows cover usage
// counts 0..max observed anywhere in the study. Per-row mean/sd are over
// the replications where the count occurs; cumulative and share columns
// come from the unconditional totals so they end at exactly 100.
struct CiUsageRow {
    int times = 0;
    std::int64_t reps_present = 0;
    MeanSd n_lives;
    MeanSd pct_of_lives;
    MeanSd total_ci;
    double pct_of_ci_total = 0.0;
    double cum_pct_of_lives = 0.0;
    double cum_pct_of_ci = 0.0;
    MeanSd mean_ci_per_life;
};

std::vector<CiUsageRow> ci_usage_table(const StudyResult& study);

// Final balance / HSA coverage / CI coverage summary, positive-only
// percentile rows as (mean, sd) over replications, plus the pooled
// final-balance shape diagnostics.
struct CoverageColumn {
    std::string name;
    MeanSd pct_zero;
    std::vector<std::pair<double, MeanSd>> percentiles;
    MeanSd max;
    MeanSd mean;
    MeanSd sd;
    bool any_positive = false;
};

struct CoverageSummary {
    CoverageColumn balance;
    CoverageColumn hsa;
    CoverageColumn ci;
    double skewness = 0.0;        // pooled final balances, all replications
    TukeyFences fences;           // on pooled final balances (R$)
    std::vector<double> outliers; // values outside the fences, ascending
};

CoverageSummary coverage_summary(const StudyResult& study);

// Person-year expense counts per level for each simulation stratum.
struct LevelShareRow {
    Stratum stratum{Sex::female, AgeRange::A25_30};
    std::array<std::int64_t, kNumLevels> counts{};
    std::array<double, kNumLevels> pct{};
    std::int64_t total = 0;
};

std::vector<LevelShareRow> level_share_table(const Cohort& cohort);

// Plain-text renderings (money cells rounded to whole R$, computed from
// exact cents upstream).
std::string render_balance_snapshots(const std::vector<BalanceSnapshotColumn>&);
std::string render_ci_usage(const std::vector<CiUsageRow>&);
std::string render_coverage(const CoverageSummary&);
std::string render_level_share(const std::vector<LevelShareRow>&);
std::string render_stats_summary(const std::string& title, const StatsSummary&);

// Histogram plot feed: equal-width bins over [lo, hi].
struct HistogramBin {
    double lo = 0.0;
    double hi = 0.0;
    std::int64_t count = 0;
};

std::vector<HistogramBin> histogram(std::span<const double> values, int n_bins);

}  // namespace hsasim
