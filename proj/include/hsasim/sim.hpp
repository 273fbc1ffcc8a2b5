#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "hsasim/hsa.hpp"
#include "hsasim/markov.hpp"
#include "hsasim/rng.hpp"
#include "hsasim/sampler.hpp"

namespace hsasim {

// Percentile grid shared by the balance-snapshot and coverage tables.
inline constexpr std::array<double, 10> kSimTablePercentiles = {
    5, 10, 15, 25, 40, 50, 75, 85, 95, 98};

struct SimulationParams {
    int n_lives = 10000;
    int n_replications = 1000;
    HsaParams hsa;
    std::uint64_t master_seed = 20052009;
    LevelBreaks breaks;
    std::vector<int> snapshot_ages = {30, 35, 40, 45, 50, 55, 60, 65};
    int threads = 1;

    void validate() const;
};

// Per-life reduction kept for pooled statistics and plot feeds. Cents.
struct LifeSummary {
    std::int64_t final_balance = 0;
    std::int64_t hsa_total = 0;
    std::int64_t ci_total = 0;
    std::int64_t expense_total = 0;
    std::int32_t ci_uses = 0;

    friend bool operator==(const LifeSummary&, const LifeSummary&) = default;
};

// Within-replication distribution of balances at one snapshot age (R$).
struct SnapshotStats {
    int age = 0;
    std::int64_t n_zero = 0;
    std::vector<std::pair<double, double>> percentiles;  // (q, value)
    double mean = 0.0;
    double sd = 0.0;
    double max = 0.0;
};

struct UsageCell {
    int times = 0;
    std::int64_t n_lives = 0;
    std::int64_t total_ci = 0;  // cents
};

// Positive-only summary of one per-life quantity inside a replication.
struct PositiveStats {
    std::int64_t n_total = 0;
    std::int64_t n_zero = 0;
    bool has_positive = false;
    std::vector<std::pair<double, double>> percentiles;
    double mean = 0.0;
    double sd = 0.0;
    double max = 0.0;

    double pct_zero() const {
        return n_total ? 100.0 * static_cast<double>(n_zero) /
                             static_cast<double>(n_total)
                       : 0.0;
    }
};

struct ReplicationSummary {
    int index = 0;
    std::int64_t total_expenses = 0;  // cents, exact sums over lives
    std::int64_t total_hsa = 0;
    std::int64_t total_ci = 0;
    std::int64_t total_deposits = 0;
    std::vector<SnapshotStats> snapshots;
    std::vector<UsageCell> usage;  // dense, times = 0..max observed here
    // Power sums of final balances in R$, for pooled skewness.
    double fb_n = 0.0, fb_s1 = 0.0, fb_s2 = 0.0, fb_s3 = 0.0;
    PositiveStats balance_stats;  // final balances
    PositiveStats hsa_stats;      // HSA-covered totals per life
    PositiveStats ci_stats;       // insurance-covered totals per life
};

struct ReplicationResult {
    ReplicationSummary summary;
    std::vector<LifeSummary> lives;
};

struct StudyResult {
    SimulationParams params;
    std::vector<ReplicationSummary> replications;
    std::vector<std::vector<LifeSummary>> lives;  // [replication][life]
    std::int64_t total_expenses = 0;
    std::int64_t total_hsa = 0;
    std::int64_t total_ci = 0;
    std::int64_t total_deposits = 0;
};

// Categorical draw from the stratum's row for the last two levels.
ExpenseLevel predict_next_level(const TransitionModel& model,
                                const Stratum& stratum,
                                std::pair<ExpenseLevel, ExpenseLevel> prev2,
                                Rng& rng);

// One life from 25 to 25+years-1. Year 0 spends the initial expense;
// every later year draws a level from the rolling two-year history (the
// stratum is the one containing the age being predicted), then an exact
// expense from that stratum's empirical distribution.
LifeTrajectory simulate_life(const TransitionModel& model,
                             const DistributionSet& dists,
                             const InitialLife& initial,
                             const SimulationParams& params, Rng& rng);

using LifeObserver = std::function<void(int life_index, const LifeTrajectory&)>;

// n_lives lives drawn from the pool and simulated. The stream for life i
// of replication r is seeded with derive_seed(derive_seed(master, r), i),
// so results do not depend on execution order.
ReplicationResult run_replication(const TransitionModel& model,
                                  const DistributionSet& dists,
                                  const InitialLifePool& pool,
                                  const SimulationParams& params,
                                  int replication_index,
                                  const LifeObserver& observer = nullptr);

// All replications, optionally across threads; the result is a pure
// function of (model, dists, cohort, params). The observer, when given,
// sees the lives of replication 0 only.
StudyResult run_study(const TransitionModel& model, const DistributionSet& dists,
                      const Cohort& cohort, const SimulationParams& params,
                      const LifeObserver& observer = nullptr);

// JSON text round trip for the study configuration file.
std::string simulation_params_to_json(const SimulationParams& params);
SimulationParams simulation_params_from_json(const std::string& text);

// Results directory: replications/rep_#####.json summaries,
// lives/rep_#####.csv per-life rows, study_summary.json aggregates.
void write_study_dir(const StudyResult& study, const std::string& dir);
StudyResult read_study_dir(const std::string& dir);

// Equality of the full result, used by the scheduling-invariance checks.
bool identical(const StudyResult& a, const StudyResult& b);

}  // namespace hsasim
