#include "hsasim/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace hsasim {

StatsSummary descriptive_stats(std::span<const std::int64_t> values,
                               bool positive_only) {
    if (values.empty()) throw std::invalid_argument("descriptive_stats: empty input");

    StatsSummary s;
    s.n = static_cast<std::int64_t>(values.size());
    s.positive_only = positive_only;

    std::int64_t zeros = 0;
    std::vector<double> stat_values;
    stat_values.reserve(values.size());
    for (auto c : values) {
        if (c == 0) ++zeros;
        if (!positive_only || c != 0)
            stat_values.push_back(static_cast<double>(c) / 100.0);
    }
    s.pct_no_expense =
        100.0 * static_cast<double>(zeros) / static_cast<double>(s.n);
    s.n_stat = static_cast<std::int64_t>(stat_values.size());
    if (s.n_stat > 0) {
        std::sort(stat_values.begin(), stat_values.end());
        for (double q : kDescriptivePercentiles)
            s.percentiles.emplace_back(q, percentile_sorted(stat_values, q));
        s.max = stat_values.back();
        s.mean = mean(stat_values);
        s.sd = sample_sd(stat_values);
    }
    return s;
}

namespace {

MeanSd aggregate(const std::vector<double>& per_rep) {
    return mean_sd(per_rep);
}

const SnapshotStats& snapshot_for(const ReplicationSummary& rep, int age) {
    for (const auto& s : rep.snapshots)
        if (s.age == age) return s;
    throw std::invalid_argument("snapshot age " + std::to_string(age) +
                                " was not recorded by the study");
}

double percentile_entry(const std::vector<std::pair<double, double>>& pctls,
                        double q) {
    for (const auto& [pq, v] : pctls)
        if (pq == q) return v;
    throw std::logic_error("percentile grid mismatch");
}

}  // namespace

std::vector<BalanceSnapshotColumn> balance_snapshots(
    const StudyResult& study, const std::vector<int>& snapshot_ages) {
    if (study.replications.empty()) throw std::invalid_argument("empty study");

    std::vector<BalanceSnapshotColumn> table;
    for (int age : snapshot_ages) {
        BalanceSnapshotColumn col;
        col.age = age;
        std::vector<double> n_zero, mx, mn, sd;
        std::vector<std::vector<double>> per_q(kSimTablePercentiles.size());
        for (const auto& rep : study.replications) {
            const SnapshotStats& s = snapshot_for(rep, age);
            n_zero.push_back(static_cast<double>(s.n_zero));
            mx.push_back(s.max);
            mn.push_back(s.mean);
            sd.push_back(s.sd);
            for (std::size_t qi = 0; qi < kSimTablePercentiles.size(); ++qi)
                per_q[qi].push_back(
                    percentile_entry(s.percentiles, kSimTablePercentiles[qi]));
        }
        col.n_zero = aggregate(n_zero);
        for (std::size_t qi = 0; qi < kSimTablePercentiles.size(); ++qi)
            col.percentiles.emplace_back(kSimTablePercentiles[qi],
                                         aggregate(per_q[qi]));
        col.max = aggregate(mx);
        col.mean = aggregate(mn);
        col.sd = aggregate(sd);
        table.push_back(std::move(col));
    }
    return table;
}

std::vector<CiUsageRow> ci_usage_table(const StudyResult& study) {
    if (study.replications.empty()) throw std::invalid_argument("empty study");

    int max_times = 0;
    for (const auto& rep : study.replications)
        if (!rep.usage.empty())
            max_times = std::max(max_times, rep.usage.back().times);

    const std::size_t n_rows = static_cast<std::size_t>(max_times) + 1;
    std::vector<std::int64_t> sum_n(n_rows, 0), sum_ci(n_rows, 0);
    std::vector<std::vector<double>> per_n(n_rows), per_pct(n_rows),
        per_ci(n_rows), per_mean(n_rows);

    std::int64_t grand_n = 0, grand_ci = 0;
    for (const auto& rep : study.replications) {
        std::int64_t rep_lives = 0;
        for (const auto& u : rep.usage) rep_lives += u.n_lives;
        for (const auto& u : rep.usage) {
            if (u.n_lives == 0) continue;
            const auto k = static_cast<std::size_t>(u.times);
            sum_n[k] += u.n_lives;
            sum_ci[k] += u.total_ci;
            per_n[k].push_back(static_cast<double>(u.n_lives));
            per_pct[k].push_back(100.0 * static_cast<double>(u.n_lives) /
                                 static_cast<double>(rep_lives));
            per_ci[k].push_back(static_cast<double>(u.total_ci) / 100.0);
            per_mean[k].push_back(static_cast<double>(u.total_ci) / 100.0 /
                                  static_cast<double>(u.n_lives));
        }
        grand_n += rep_lives;
        grand_ci += rep.total_ci;
    }

    std::vector<CiUsageRow> out;
    std::int64_t run_n = 0, run_ci = 0;
    for (std::size_t k = 0; k < n_rows; ++k) {
        CiUsageRow row;
        row.times = static_cast<int>(k);
        row.reps_present = static_cast<std::int64_t>(per_n[k].size());
        if (row.reps_present > 0) {
            row.n_lives = aggregate(per_n[k]);
            row.pct_of_lives = aggregate(per_pct[k]);
            row.total_ci = aggregate(per_ci[k]);
            row.mean_ci_per_life = aggregate(per_mean[k]);
        }
        run_n += sum_n[k];
        run_ci += sum_ci[k];
        row.pct_of_ci_total =
            grand_ci ? 100.0 * static_cast<double>(sum_ci[k]) /
                           static_cast<double>(grand_ci)
                     : 0.0;
        row.cum_pct_of_lives = 100.0 * static_cast<double>(run_n) /
                               static_cast<double>(grand_n);
        row.cum_pct_of_ci =
            grand_ci ? 100.0 * static_cast<double>(run_ci) /
                           static_cast<double>(grand_ci)
                     : 100.0;
        out.push_back(std::move(row));
    }
    return out;
}

namespace {

CoverageColumn coverage_column(const StudyResult& study, const std::string& name,
                               const PositiveStats ReplicationSummary::*member) {
    CoverageColumn col;
    col.name = name;
    std::vector<double> pct_zero, mx, mn, sd;
    std::vector<std::vector<double>> per_q(kSimTablePercentiles.size());
    for (const auto& rep : study.replications) {
        const PositiveStats& s = rep.*member;
        pct_zero.push_back(s.pct_zero());
        if (!s.has_positive) continue;
        mx.push_back(s.max);
        mn.push_back(s.mean);
        sd.push_back(s.sd);
        for (std::size_t qi = 0; qi < kSimTablePercentiles.size(); ++qi)
            per_q[qi].push_back(
                percentile_entry(s.percentiles, kSimTablePercentiles[qi]));
    }
    col.pct_zero = aggregate(pct_zero);
    col.any_positive = !mx.empty();
    for (std::size_t qi = 0; qi < kSimTablePercentiles.size(); ++qi)
        col.percentiles.emplace_back(
            kSimTablePercentiles[qi],
            col.any_positive ? aggregate(per_q[qi]) : MeanSd{});
    if (col.any_positive) {
        col.max = aggregate(mx);
        col.mean = aggregate(mn);
        col.sd = aggregate(sd);
    }
    return col;
}

}  // namespace

CoverageSummary coverage_summary(const StudyResult& study) {
    if (study.replications.empty()) throw std::invalid_argument("empty study");

    CoverageSummary cs;
    cs.balance = coverage_column(study, "HSA Balance",
                                 &ReplicationSummary::balance_stats);
    cs.hsa = coverage_column(study, "HSA Coverage",
                             &ReplicationSummary::hsa_stats);
    cs.ci = coverage_column(study, "Cat. Insurance Coverage",
                            &ReplicationSummary::ci_stats);

    double n = 0, s1 = 0, s2 = 0, s3 = 0;
    for (const auto& rep : study.replications) {
        n += rep.fb_n;
        s1 += rep.fb_s1;
        s2 += rep.fb_s2;
        s3 += rep.fb_s3;
    }
    cs.skewness = n >= 3 ? skewness_adjusted_from_moments(n, s1, s2, s3) : 0.0;

    std::vector<double> finals;
    for (const auto& rep : study.lives)
        for (const auto& l : rep)
            finals.push_back(static_cast<double>(l.final_balance) / 100.0);
    if (!finals.empty()) {
        std::sort(finals.begin(), finals.end());
        cs.fences = tukey_fences(finals);
        cs.outliers = tukey_outliers(finals);
    }
    return cs;
}

std::vector<LevelShareRow> level_share_table(const Cohort& cohort) {
    if (cohort.persons.empty()) throw std::invalid_argument("empty cohort");

    std::vector<LevelShareRow> out;
    for (const auto& stratum : simulation_strata()) {
        LevelShareRow row;
        row.stratum = stratum;
        for (const auto& p : cohort.persons) {
            if (p.sex != stratum.sex) continue;
            if (!p.dominant || *p.dominant != stratum.age_range) continue;
            for (const auto& l : p.levels) {
                ++row.counts[static_cast<std::size_t>(index(l))];
                ++row.total;
            }
        }
        if (row.total == 0) continue;
        for (int l = 0; l < kNumLevels; ++l)
            row.pct[static_cast<std::size_t>(l)] =
                100.0 * static_cast<double>(row.counts[static_cast<std::size_t>(l)]) /
                static_cast<double>(row.total);
        out.push_back(row);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

std::string thousands(std::int64_t v) {
    const bool neg = v < 0;
    std::string digits = std::to_string(neg ? -v : v);
    std::string out;
    int c = 0;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
        if (c && c % 3 == 0) out += ',';
        out += *it;
        ++c;
    }
    if (neg) out += '-';
    std::reverse(out.begin(), out.end());
    return out;
}

std::string money_cell(double reais) {
    return thousands(static_cast<std::int64_t>(std::llround(reais)));
}

std::string fixed2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string pad(const std::string& s, std::size_t w) {
    return s.size() >= w ? s : std::string(w - s.size(), ' ') + s;
}

std::string sd_cell(const MeanSd& m, bool money) {
    if (!m.sd_defined) return "-";
    return money ? money_cell(m.sd) : fixed2(m.sd);
}

std::string pct_label(double q) {
    char buf[16];
    if (q == static_cast<int>(q))
        std::snprintf(buf, sizeof buf, "p%d", static_cast<int>(q));
    else
        std::snprintf(buf, sizeof buf, "p%g", q * 10);  // p995, p999
    return buf;
}

}  // namespace

std::string render_balance_snapshots(
    const std::vector<BalanceSnapshotColumn>& table) {
    std::ostringstream out;
    const std::size_t w = 11;
    out << "HSA balance snapshots (mean / sd over replications)\n";
    out << pad("", 6);
    for (const auto& col : table)
        out << pad("age " + std::to_string(col.age), w) << pad("sd", w);
    out << '\n';

    auto row = [&](const std::string& name, auto value_of, bool money) {
        out << pad(name, 6);
        for (const auto& col : table) {
            const MeanSd m = value_of(col);
            out << pad(money ? money_cell(m.mean) : fixed2(m.mean), w)
                << pad(sd_cell(m, money), w);
        }
        out << '\n';
    };

    row("n0", [](const auto& c) { return c.n_zero; }, true);
    for (std::size_t qi = 0; qi < kSimTablePercentiles.size(); ++qi) {
        const double q = kSimTablePercentiles[qi];
        row(pct_label(q),
            [qi](const auto& c) { return c.percentiles[qi].second; }, true);
    }
    row("max", [](const auto& c) { return c.max; }, true);
    row("mean", [](const auto& c) { return c.mean; }, true);
    row("sd", [](const auto& c) { return c.sd; }, true);
    return out.str();
}

std::string render_ci_usage(const std::vector<CiUsageRow>& rows) {
    std::ostringstream out;
    out << "Catastrophic insurance frequency and severity"
           " (mean / sd over replications where the count occurs)\n";
    out << pad("times", 6) << pad("n", 9) << pad("sd", 9) << pad("%lives", 9)
        << pad("sd", 7) << pad("total CI", 16) << pad("sd", 13) << pad("%CI", 8)
        << pad("cum%lv", 8) << pad("cum%CI", 8) << pad("CI/life", 12)
        << pad("sd", 11) << '\n';
    for (const auto& r : rows) {
        out << pad(std::to_string(r.times), 6)
            << pad(money_cell(r.n_lives.mean), 9) << pad(sd_cell(r.n_lives, false), 9)
            << pad(fixed2(r.pct_of_lives.mean), 9)
            << pad(sd_cell(r.pct_of_lives, false), 7)
            << pad(money_cell(r.total_ci.mean), 16)
            << pad(sd_cell(r.total_ci, true), 13)
            << pad(fixed2(r.pct_of_ci_total), 8)
            << pad(fixed2(r.cum_pct_of_lives), 8)
            << pad(fixed2(r.cum_pct_of_ci), 8)
            << pad(money_cell(r.mean_ci_per_life.mean), 12)
            << pad(sd_cell(r.mean_ci_per_life, true), 11) << '\n';
    }
    return out.str();
}

std::string render_coverage(const CoverageSummary& cs) {
    std::ostringstream out;
    const std::size_t w = 14;
    out << "Balance and coverage at the end of the work life"
           " (mean / sd over replications)\n";
    out << pad("", 8);
    for (const auto* col : {&cs.balance, &cs.hsa, &cs.ci})
        out << pad(col->name, 2 * w).substr(0, 2 * w);
    out << '\n'
        << pad("", 8);
    for (int i = 0; i < 3; ++i) out << pad("mean", w) << pad("sd", w);
    out << '\n';

    auto row = [&](const std::string& name, auto value_of, bool money) {
        out << pad(name, 8);
        for (const auto* col : {&cs.balance, &cs.hsa, &cs.ci}) {
            if (!col->any_positive && name != "pctnul") {
                out << pad("0", w) << pad("-", w);
                continue;
            }
            const MeanSd m = value_of(*col);
            out << pad(money ? money_cell(m.mean) : fixed2(m.mean), w)
                << pad(sd_cell(m, money), w);
        }
        out << '\n';
    };

    out << pad("pctnul", 8);
    for (const auto* col : {&cs.balance, &cs.hsa, &cs.ci})
        out << pad(fixed2(col->pct_zero.mean), w) << pad("-", w);
    out << '\n';
    for (std::size_t qi = 0; qi < kSimTablePercentiles.size(); ++qi) {
        const double q = kSimTablePercentiles[qi];
        row(pct_label(q),
            [qi](const auto& c) { return c.percentiles[qi].second; }, true);
    }
    row("max", [](const auto& c) { return c.max; }, true);
    row("mean", [](const auto& c) { return c.mean; }, true);
    row("sd", [](const auto& c) { return c.sd; }, true);

    out << "\nPooled final balances: skewness " << fixed2(cs.skewness)
        << ", Tukey fences [" << money_cell(cs.fences.lower) << ", "
        << money_cell(cs.fences.upper) << "], outliers "
        << cs.outliers.size() << '\n';
    return out.str();
}

std::string render_level_share(const std::vector<LevelShareRow>& rows) {
    std::ostringstream out;
    out << "Person-year expenses per level by sex and age range\n";
    out << pad("stratum", 10);
    for (const auto l : kAllLevels)
        out << pad(label(l), 10) << pad("%", 8);
    out << pad("total", 10) << '\n';
    for (const auto& r : rows) {
        out << pad(label(r.stratum), 10);
        for (int l = 0; l < kNumLevels; ++l)
            out << pad(thousands(r.counts[static_cast<std::size_t>(l)]), 10)
                << pad(fixed2(r.pct[static_cast<std::size_t>(l)]), 8);
        out << pad(thousands(r.total), 10) << '\n';
    }
    return out.str();
}

std::string render_stats_summary(const std::string& title,
                                 const StatsSummary& s) {
    std::ostringstream out;
    out << title << '\n';
    out << pad("n", 14) << pad(thousands(s.n), 14) << '\n';
    out << pad("PctNoExpense", 14) << pad(fixed2(s.pct_no_expense), 14) << '\n';
    for (const auto& [q, v] : s.percentiles)
        out << pad(pct_label(q), 14) << pad(money_cell(v), 14) << '\n';
    out << pad("max", 14) << pad(money_cell(s.max), 14) << '\n';
    out << pad("mean", 14) << pad(money_cell(s.mean), 14) << '\n';
    out << pad("sd", 14) << pad(money_cell(s.sd), 14) << '\n';
    return out.str();
}

std::vector<HistogramBin> histogram(std::span<const double> values, int n_bins) {
    std::vector<HistogramBin> bins;
    if (values.empty() || n_bins < 1) return bins;
    const auto [mn_it, mx_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *mn_it, hi = *mx_it;
    if (lo == hi) {
        bins.push_back({lo, hi, static_cast<std::int64_t>(values.size())});
        return bins;
    }
    const double width = (hi - lo) / n_bins;
    bins.resize(static_cast<std::size_t>(n_bins));
    for (int b = 0; b < n_bins; ++b) {
        bins[static_cast<std::size_t>(b)].lo = lo + b * width;
        bins[static_cast<std::size_t>(b)].hi = lo + (b + 1) * width;
    }
    for (double v : values) {
        auto b = static_cast<std::size_t>((v - lo) / width);
        if (b >= bins.size()) b = bins.size() - 1;
        ++bins[b].count;
    }
    return bins;
}

}  // namespace hsasim
