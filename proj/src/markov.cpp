#include "hsasim/markov.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace hsasim {

double PairwiseMatrix::mean_diagonal() const {
    double sum = 0.0;
    int n = 0;
    for (int k = 0; k < kNumLevels; ++k) {
        if (row_empty(k)) continue;
        sum += probs[k][k];
        ++n;
    }
    return n ? sum / n : 0.0;
}

std::string label(RowProvenance p) {
    switch (p) {
        case RowProvenance::observed: return "observed";
        case RowProvenance::fallback_order1: return "fallback_order1";
        case RowProvenance::fallback_pooled: return "fallback_pooled";
    }
    throw std::logic_error("bad provenance");
}

RowProvenance provenance_from_label(const std::string& s) {
    if (s == "observed") return RowProvenance::observed;
    if (s == "fallback_order1") return RowProvenance::fallback_order1;
    if (s == "fallback_pooled") return RowProvenance::fallback_pooled;
    throw std::invalid_argument("unknown provenance: " + s);
}

namespace {

void normalize_rows(auto& counts, auto& probs, auto& row_totals) {
    for (std::size_t r = 0; r < counts.size(); ++r) {
        std::int64_t total = 0;
        for (int l = 0; l < kNumLevels; ++l) total += counts[r][l];
        row_totals[r] = total;
        for (int l = 0; l < kNumLevels; ++l)
            probs[r][l] = total ? static_cast<double>(counts[r][l]) /
                                      static_cast<double>(total)
                                : 0.0;
    }
}

bool in_stratum(const PersonHistory& p, const Stratum& s, const MonthWindow& w) {
    if (p.sex != s.sex) return false;
    try {
        return dominant_age_range(p.birth_date, w) == s.age_range;
    } catch (const std::invalid_argument&) {
        return false;  // outside 21..65 for the whole window
    }
}

}  // namespace

PairwiseMatrix estimate_pairwise(const Cohort& cohort, int year_i, int year_j,
                                 const PersonFilter& filter) {
    if (year_i >= year_j)
        throw std::invalid_argument("pairwise estimation needs year_i < year_j");
    const int i = cohort.year_index(year_i);
    const int j = cohort.year_index(year_j);

    PairwiseMatrix m;
    m.origin_year = year_i;
    m.destination_year = year_j;
    for (const auto& p : cohort.persons) {
        if (filter && !filter(p)) continue;
        ++m.n_persons;
        ++m.counts[index(p.levels[i])][index(p.levels[j])];
    }
    if (m.n_persons == 0) throw std::runtime_error("empty estimation set");
    normalize_rows(m.counts, m.probs, m.row_totals);
    return m;
}

Order2Matrix estimate_order2(const Cohort& cohort,
                             const std::array<int, 3>& years,
                             const Stratum& stratum) {
    if (years[0] + 1 != years[1] || years[1] + 1 != years[2])
        throw std::invalid_argument("order-2 estimation needs three consecutive years");
    const int i0 = cohort.year_index(years[0]);
    const int i1 = cohort.year_index(years[1]);
    const int i2 = cohort.year_index(years[2]);
    const MonthWindow window{years[0], 1, years[2], 12};

    Order2Matrix m;
    m.stratum = stratum;
    m.years = years;
    for (const auto& p : cohort.persons) {
        if (!in_stratum(p, stratum, window)) continue;
        const int row = Order2Matrix::row_index(p.levels[i0], p.levels[i1]);
        ++m.counts[row][index(p.levels[i2])];
    }
    normalize_rows(m.counts, m.probs, m.row_totals);
    m.provenance.fill(RowProvenance::observed);
    return m;
}

TransitionModel complete_model(std::vector<Order2Matrix> raw,
                               const Cohort& cohort) {
    if (raw.size() != static_cast<std::size_t>(kNumSimStrata))
        throw std::invalid_argument("expected one raw matrix per simulation stratum");
    const auto years = raw.front().years;
    const MonthWindow window{years[0], 1, years[2], 12};

    // Pooled order-2 counts across the 16 strata.
    std::array<std::array<std::int64_t, kNumLevels>, 16> pooled{};
    std::array<std::int64_t, 16> pooled_totals{};
    for (const auto& m : raw)
        for (int r = 0; r < 16; ++r)
            for (int l = 0; l < kNumLevels; ++l) {
                pooled[r][l] += m.counts[r][l];
                pooled_totals[r] += m.counts[r][l];
            }

    // Per-stratum order-1 rows from the triple's last transition,
    // computed lazily since most strata never need them.
    std::map<int, PairwiseMatrix> order1;
    auto order1_for = [&](const Stratum& s) -> const PairwiseMatrix* {
        const int key = sim_stratum_index(s);
        auto it = order1.find(key);
        if (it == order1.end()) {
            PairwiseMatrix m;
            m.origin_year = years[1];
            m.destination_year = years[2];
            const int i1 = cohort.year_index(years[1]);
            const int i2 = cohort.year_index(years[2]);
            for (const auto& p : cohort.persons) {
                if (!in_stratum(p, s, window)) continue;
                ++m.n_persons;
                ++m.counts[index(p.levels[i1])][index(p.levels[i2])];
            }
            normalize_rows(m.counts, m.probs, m.row_totals);
            it = order1.emplace(key, std::move(m)).first;
        }
        return &it->second;
    };

    TransitionModel model;
    model.years = years;
    model.breaks = cohort.breaks;
    model.strata.resize(kNumSimStrata);
    for (auto& m : raw) {
        for (int r = 0; r < 16; ++r) {
            if (!m.row_empty(r)) {
                m.provenance[r] = RowProvenance::observed;
                continue;
            }
            const int one_back = r % kNumLevels;  // the row's most recent level
            const PairwiseMatrix* o1 = order1_for(m.stratum);
            if (!o1->row_empty(one_back)) {
                m.probs[r] = o1->probs[one_back];
                m.provenance[r] = RowProvenance::fallback_order1;
            } else if (pooled_totals[r] > 0) {
                for (int l = 0; l < kNumLevels; ++l)
                    m.probs[r][l] = static_cast<double>(pooled[r][l]) /
                                    static_cast<double>(pooled_totals[r]);
                m.provenance[r] = RowProvenance::fallback_pooled;
            } else {
                m.probs[r].fill(1.0 / kNumLevels);
                m.provenance[r] = RowProvenance::fallback_pooled;
            }
        }
        model.strata[static_cast<std::size_t>(sim_stratum_index(m.stratum))] =
            std::move(m);
    }
    return model;
}

TransitionModel estimate_model(const Cohort& cohort,
                               const std::array<int, 3>& years) {
    std::vector<Order2Matrix> raw;
    raw.reserve(kNumSimStrata);
    for (const auto& s : simulation_strata())
        raw.push_back(estimate_order2(cohort, years, s));
    return complete_model(std::move(raw), cohort);
}

TransitionModel estimate_model(const Cohort& cohort) {
    const auto w = cohort.triennial_window();
    return estimate_model(cohort,
                          {w.first_year, w.first_year + 1, w.first_year + 2});
}

std::vector<PairwiseMatrix> persistence_report(const Cohort& cohort,
                                               const PersonFilter& filter) {
    std::vector<PairwiseMatrix> out;
    const auto& years = cohort.study_years;
    for (std::size_t i = 0; i < years.size(); ++i)
        for (std::size_t j = i + 1; j < years.size(); ++j)
            out.push_back(estimate_pairwise(cohort, years[i], years[j], filter));
    return out;
}

std::vector<GapDiagnostic> homogeneity_diagnostic(
    const std::vector<PairwiseMatrix>& report) {
    std::map<int, std::vector<const PairwiseMatrix*>> by_gap;
    for (const auto& m : report) by_gap[m.gap()].push_back(&m);

    std::vector<GapDiagnostic> out;
    for (const auto& [gap, ms] : by_gap) {
        GapDiagnostic d;
        d.gap = gap;
        d.n_matrices = static_cast<int>(ms.size());
        for (const auto* m : ms) d.mean_diagonal += m->mean_diagonal();
        d.mean_diagonal /= static_cast<double>(ms.size());
        double diff_sum = 0.0;
        std::int64_t diff_n = 0;
        for (std::size_t a = 0; a < ms.size(); ++a)
            for (std::size_t b = a + 1; b < ms.size(); ++b)
                for (int k = 0; k < kNumLevels; ++k) {
                    if (ms[a]->row_empty(k) || ms[b]->row_empty(k)) continue;
                    for (int l = 0; l < kNumLevels; ++l) {
                        diff_sum += std::abs(ms[a]->probs[k][l] - ms[b]->probs[k][l]);
                        ++diff_n;
                    }
                }
        d.mean_abs_diff = diff_n ? diff_sum / static_cast<double>(diff_n) : 0.0;
        out.push_back(d);
    }
    return out;
}

}  // namespace hsasim
