#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hsasim/records.hpp"

namespace hsasim {

using PersonFilter = std::function<bool(const PersonHistory&)>;

// Level-to-level transition counts between two years, row = origin level.
// Probabilities are row-normalized counts; counts stay the source of truth.
struct PairwiseMatrix {
    int origin_year = 0;
    int destination_year = 0;
    std::int64_t n_persons = 0;
    std::array<std::array<std::int64_t, kNumLevels>, kNumLevels> counts{};
    std::array<std::array<double, kNumLevels>, kNumLevels> probs{};
    std::array<std::int64_t, kNumLevels> row_totals{};

    bool row_empty(int k) const { return row_totals[k] == 0; }
    int gap() const { return destination_year - origin_year; }
    double mean_diagonal() const;
};

enum class RowProvenance : int { observed = 0, fallback_order1 = 1, fallback_pooled = 2 };

std::string label(RowProvenance p);
RowProvenance provenance_from_label(const std::string& s);

// Order-2 transition table for one stratum: 16 rows indexed by the
// ordered level pair (two years back, one year back), 4 destination
// columns.
struct Order2Matrix {
    Stratum stratum{Sex::female, AgeRange::A25_30};
    std::array<int, 3> years{};  // the estimation triple (y-2, y-1, y)
    std::array<std::array<std::int64_t, kNumLevels>, 16> counts{};
    std::array<std::array<double, kNumLevels>, 16> probs{};
    std::array<std::int64_t, 16> row_totals{};
    std::array<RowProvenance, 16> provenance{};

    static int row_index(ExpenseLevel two_back, ExpenseLevel one_back) {
        return index(two_back) * kNumLevels + index(one_back);
    }
    bool row_empty(int r) const { return row_totals[r] == 0; }
};

// The 16 completed per-stratum matrices used by the simulator. Indexed by
// sim_stratum_index; every row has a usable probability distribution.
struct TransitionModel {
    std::array<int, 3> years{};
    LevelBreaks breaks;
    std::vector<Order2Matrix> strata;  // size kNumSimStrata

    const Order2Matrix& at(const Stratum& s) const {
        return strata.at(static_cast<std::size_t>(sim_stratum_index(s)));
    }
};

// Proportion of filtered persons moving between each pair of levels from
// year_i to year_j (j > i). Throws "empty estimation set" if nobody
// passes the filter.
PairwiseMatrix estimate_pairwise(const Cohort& cohort, int year_i, int year_j,
                                 const PersonFilter& filter = nullptr);

// Raw order-2 counts for one stratum over three consecutive study years.
// Stratum membership uses the dominant age range over the triple's month
// window plus the person's sex. Empty rows are allowed here.
Order2Matrix estimate_order2(const Cohort& cohort,
                             const std::array<int, 3>& years,
                             const Stratum& stratum);

// Fills every empty row of the 16 raw matrices: first from the stratum's
// order-1 transition out of the row's most recent level (estimated on the
// triple's last year pair), then from the order-2 row pooled across all
// strata, then uniform. Provenance records which rule fired.
TransitionModel complete_model(std::vector<Order2Matrix> raw,
                               const Cohort& cohort);

// Raw estimation plus fallback completion for all 16 simulation strata
// over the last three study years.
TransitionModel estimate_model(const Cohort& cohort);
TransitionModel estimate_model(const Cohort& cohort,
                               const std::array<int, 3>& years);

// All C(n,2) ordered year-pair matrices over the study window.
std::vector<PairwiseMatrix> persistence_report(const Cohort& cohort,
                                               const PersonFilter& filter = nullptr);

// Year-gap similarity summary for the persistence matrices: under
// homogeneity, matrices sharing a gap should look alike. Exported as a
// diagnostic only; no pass/fail threshold is claimed.
struct GapDiagnostic {
    int gap = 0;
    int n_matrices = 0;
    double mean_diagonal = 0.0;
    // Mean absolute probability difference across matrix pairs with this
    // gap, over cells whose row is non-empty in both (0 when < 2 matrices).
    double mean_abs_diff = 0.0;
};

std::vector<GapDiagnostic> homogeneity_diagnostic(
    const std::vector<PairwiseMatrix>& report);

}  // namespace hsasim
