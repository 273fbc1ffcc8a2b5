#include "hsasim/model_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace hsasim {

using nlohmann::json;

namespace {

void dump_to(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

json load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return json::parse(in);
}

json breaks_to_json(const LevelBreaks& b) {
    return json{b.f1_max.cents(), b.f2_max.cents(), b.f3_max.cents()};
}

LevelBreaks breaks_from_json(const json& j) {
    const auto v = j.get<std::vector<std::int64_t>>();
    if (v.size() != 3) throw std::runtime_error("expected 3 break points");
    LevelBreaks b;
    b.f1_max = Money::from_cents(v[0]);
    b.f2_max = Money::from_cents(v[1]);
    b.f3_max = Money::from_cents(v[2]);
    return b;
}

}  // namespace

void write_model(const TransitionModel& model, const std::string& path) {
    json j;
    j["estimation_years"] = model.years;
    j["breaks_cents"] = breaks_to_json(model.breaks);
    json strata = json::array();
    for (const auto& m : model.strata) {
        json rows = json::array();
        for (int r = 0; r < 16; ++r) {
            rows.push_back(
                {{"pair",
                  {label(level_from_index(r / kNumLevels)),
                   label(level_from_index(r % kNumLevels))}},
                 {"counts", m.counts[static_cast<std::size_t>(r)]},
                 {"probs", m.probs[static_cast<std::size_t>(r)]},
                 {"provenance", label(m.provenance[static_cast<std::size_t>(r)])}});
        }
        strata.push_back({{"sex", label(m.stratum.sex)},
                          {"age_range", label(m.stratum.age_range)},
                          {"rows", rows}});
    }
    j["strata"] = std::move(strata);
    dump_to(j, path);
}

TransitionModel read_model(const std::string& path) {
    const json j = load(path);
    TransitionModel model;
    const auto years = j.at("estimation_years").get<std::vector<int>>();
    if (years.size() != 3) throw std::runtime_error("expected 3 estimation years");
    model.years = {years[0], years[1], years[2]};
    model.breaks = breaks_from_json(j.at("breaks_cents"));
    model.strata.resize(kNumSimStrata);
    std::size_t seen = 0;
    for (const auto& s : j.at("strata")) {
        Order2Matrix m;
        m.stratum.sex = sex_from_label(s.at("sex").get<std::string>());
        m.stratum.age_range =
            age_range_from_label(s.at("age_range").get<std::string>());
        m.years = model.years;
        const auto& rows = s.at("rows");
        if (rows.size() != 16) throw std::runtime_error("expected 16 rows per stratum");
        for (std::size_t r = 0; r < 16; ++r) {
            const auto& row = rows[r];
            const auto pair = row.at("pair").get<std::vector<std::string>>();
            const int idx = Order2Matrix::row_index(level_from_label(pair.at(0)),
                                                    level_from_label(pair.at(1)));
            if (idx != static_cast<int>(r))
                throw std::runtime_error("model rows out of order");
            m.counts[r] = row.at("counts").get<std::array<std::int64_t, 4>>();
            m.probs[r] = row.at("probs").get<std::array<double, 4>>();
            m.provenance[r] =
                provenance_from_label(row.at("provenance").get<std::string>());
            m.row_totals[r] = 0;
            for (auto c : m.counts[r]) m.row_totals[r] += c;
        }
        model.strata[static_cast<std::size_t>(sim_stratum_index(m.stratum))] = m;
        ++seen;
    }
    if (seen != static_cast<std::size_t>(kNumSimStrata))
        throw std::runtime_error("expected 16 strata in model");
    return model;
}

void write_distributions(const DistributionSet& dists, const std::string& path) {
    json j;
    j["breaks_cents"] = breaks_to_json(dists.breaks());
    json strata = json::array();
    for (const auto& d : dists.strata())
        strata.push_back({{"sex", label(d.stratum.sex)},
                          {"age_range", label(d.stratum.age_range)},
                          {"values_cents", d.values}});
    j["strata"] = std::move(strata);
    dump_to(j, path);
}

DistributionSet read_distributions(const std::string& path) {
    const json j = load(path);
    const LevelBreaks breaks = breaks_from_json(j.at("breaks_cents"));
    std::vector<EmpiricalDistribution> all(kNumSimStrata);
    std::size_t seen = 0;
    for (const auto& s : j.at("strata")) {
        EmpiricalDistribution d;
        d.stratum.sex = sex_from_label(s.at("sex").get<std::string>());
        d.stratum.age_range =
            age_range_from_label(s.at("age_range").get<std::string>());
        d.values = s.at("values_cents").get<std::vector<std::int64_t>>();
        if (!std::is_sorted(d.values.begin(), d.values.end()))
            throw std::runtime_error("distribution values must be sorted");
        auto upper = [&](Money bound) -> std::size_t {
            return static_cast<std::size_t>(
                std::upper_bound(d.values.begin(), d.values.end(), bound.cents()) -
                d.values.begin());
        };
        const std::size_t e1 = upper(breaks.f1_max);
        const std::size_t e2 = upper(breaks.f2_max);
        const std::size_t e3 = upper(breaks.f3_max);
        d.slices = {{{0, e1}, {e1, e2}, {e2, e3}, {e3, d.values.size()}}};
        all[static_cast<std::size_t>(sim_stratum_index(d.stratum))] = std::move(d);
        ++seen;
    }
    if (seen != static_cast<std::size_t>(kNumSimStrata))
        throw std::runtime_error("expected 16 strata in distributions");
    return DistributionSet(breaks, std::move(all));
}

void write_persistence(const std::vector<PairwiseMatrix>& report,
                       const std::string& path) {
    json j = json::array();
    for (const auto& m : report) {
        j.push_back({{"origin_year", m.origin_year},
                     {"destination_year", m.destination_year},
                     {"n_persons", m.n_persons},
                     {"counts", m.counts},
                     {"probs", m.probs}});
    }
    dump_to(j, path);
}

std::string persistence_heatmap_csv(const std::vector<PairwiseMatrix>& report) {
    std::ostringstream out;
    out << "origin_year,destination_year,origin,destination,probability\n";
    for (const auto& m : report)
        for (int k = 0; k < kNumLevels; ++k)
            for (int l = 0; l < kNumLevels; ++l)
                out << m.origin_year << ',' << m.destination_year << ','
                    << label(level_from_index(k)) << ','
                    << label(level_from_index(l)) << ',' << m.probs[k][l] << '\n';
    return out.str();
}

void write_homogeneity(const std::vector<GapDiagnostic>& diag,
                       const std::string& path) {
    json j = json::array();
    for (const auto& d : diag)
        j.push_back({{"gap", d.gap},
                     {"n_matrices", d.n_matrices},
                     {"mean_diagonal", d.mean_diagonal},
                     {"mean_abs_diff", d.mean_abs_diff}});
    dump_to(j, path);
}

void write_distribution_log_feed(const DistributionSet& dists,
                                 const std::string& csv_path,
                                 const std::string& zeros_json_path) {
    std::ofstream csv(csv_path);
    if (!csv) throw std::runtime_error("cannot write " + csv_path);
    csv << "sex,age_range,log_expense\n";
    json zeros = json::array();
    for (const auto& d : dists.strata()) {
        std::int64_t zero_count = 0;
        for (auto c : d.values) {
            if (c == 0) {
                ++zero_count;
                continue;
            }
            csv << label(d.stratum.sex) << ',' << label(d.stratum.age_range)
                << ',' << std::log(static_cast<double>(c) / 100.0) << '\n';
        }
        zeros.push_back({{"sex", label(d.stratum.sex)},
                         {"age_range", label(d.stratum.age_range)},
                         {"zero_values", zero_count},
                         {"total_values", d.values.size()}});
    }
    if (!csv) throw std::runtime_error("write failed: " + csv_path);
    dump_to(zeros, zeros_json_path);
}

}  // namespace hsasim
