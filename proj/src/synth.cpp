#include "hsasim/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "hsasim/rng.hpp"

namespace hsasim {

using nlohmann::json;

void SynthCalibration::validate() const {
    if (n_persons < 1) throw std::invalid_argument("n_persons must be >= 1");
    if (n_years < 1) throw std::invalid_argument("n_years must be >= 1");
    if (female_share < 0.0 || female_share > 1.0)
        throw std::invalid_argument("female_share must be in [0,1]");
    if (frailty_sd <= 0.0) throw std::invalid_argument("frailty_sd must be > 0");
    if (frailty_rho < 0.0 || frailty_rho >= 1.0)
        throw std::invalid_argument("frailty_rho must be in [0,1)");
    double wsum = 0.0;
    for (double w : start_age_weights) {
        if (w < 0.0) throw std::invalid_argument("negative start-age weight");
        wsum += w;
    }
    if (wsum <= 0.0) throw std::invalid_argument("start-age weights sum to zero");
    for (const auto& row : strata)
        for (const auto& c : row) {
            if (c.zero_prob < 0.0 || c.zero_prob > 1.0)
                throw std::invalid_argument("zero_prob must be in [0,1]");
            if (c.log_scale <= 0.0)
                throw std::invalid_argument("log_scale must be > 0");
        }
}

SynthCalibration default_calibration() {
    SynthCalibration c;
    // Median targets in R$ (log_location = ln(median)) and zero shares,
    // increasing with age, women above men.
    const double f_median[kNumSimRanges] = {830, 854, 840, 936, 1135, 1318, 1481, 1542};
    const double f_zero[kNumSimRanges] = {.046, .050, .060, .059, .051, .044, .053, .057};
    const double m_median[kNumSimRanges] = {417, 476, 515, 581, 671, 803, 983, 1025};
    const double m_zero[kNumSimRanges] = {.090, .074, .069, .058, .053, .048, .058, .081};
    for (int r = 0; r < kNumSimRanges; ++r) {
        c.strata[index(Sex::female)][r] =
            StratumCalib{f_zero[r], std::log(f_median[r]), 1.1};
        c.strata[index(Sex::male)][r] =
            StratumCalib{m_zero[r], std::log(m_median[r]), 1.1};
    }
    return c;
}

namespace {

// Box-Muller on our own uniform bits; keeps the byte stream independent
// of the standard library's distribution internals.
double gaussian(Rng& rng) {
    const double u1 = 1.0 - rng.next_unit();  // (0, 1]
    const double u2 = rng.next_unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

int pick_weighted(Rng& rng, const std::array<double, 7>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double u = rng.next_unit() * total;
    for (int i = 0; i < 7; ++i) {
        u -= weights[static_cast<std::size_t>(i)];
        if (u < 0.0) return i;
    }
    return 6;
}

}  // namespace

Dataset generate_dataset(const SynthCalibration& calib) {
    calib.validate();
    Rng rng(calib.seed);

    // Start-age buckets over 25..60 so nobody exceeds 65 by the last
    // December even with a mid-year birthday.
    static constexpr AgeBand kStartBuckets[7] = {
        {25, 30}, {31, 35}, {36, 40}, {41, 45}, {46, 50}, {51, 55}, {56, 60}};

    Dataset ds;
    for (int y = 0; y < calib.n_years; ++y)
        ds.study_years.push_back(calib.first_year + y);
    ds.records.reserve(static_cast<std::size_t>(calib.n_persons) *
                       static_cast<std::size_t>(calib.n_years));

    char idbuf[16];
    for (int i = 0; i < calib.n_persons; ++i) {
        std::snprintf(idbuf, sizeof idbuf, "p%06d", i);
        const Sex sex =
            rng.next_unit() < calib.female_share ? Sex::female : Sex::male;
        const AgeBand bucket =
            kStartBuckets[pick_weighted(rng, calib.start_age_weights)];
        const int start_age =
            bucket.lo +
            static_cast<int>(rng.below(static_cast<std::uint64_t>(
                bucket.hi - bucket.lo + 1)));
        const int month = 2 + static_cast<int>(rng.below(11));  // 2..12
        const int day = 1 + static_cast<int>(rng.below(28));
        const Date birth{calib.first_year - start_age - 1, month, day};

        double log_frailty = calib.frailty_sd * gaussian(rng);
        for (int y = 0; y < calib.n_years; ++y) {
            if (y > 0)
                log_frailty = calib.frailty_rho * log_frailty +
                              std::sqrt(1.0 - calib.frailty_rho * calib.frailty_rho) *
                                  calib.frailty_sd * gaussian(rng);
            const int year = calib.first_year + y;
            const int age_dec31 = start_age + 1 + y;
            const auto range = range_for_age(age_dec31);
            if (!range || !is_simulation_range(*range))
                throw std::logic_error("generated age outside simulation ranges");
            const StratumCalib& sc =
                calib.strata[index(sex)][index(*range) - kFirstSimRange];

            Money expense;
            if (rng.next_unit() >= sc.zero_prob) {
                const double value = std::exp(sc.log_location +
                                              sc.log_scale * gaussian(rng) +
                                              log_frailty);
                const auto cents = static_cast<std::int64_t>(std::llround(value * 100.0));
                expense = Money::from_cents(cents > 0 ? cents : 1);
            }
            ds.records.push_back(
                PersonYearRecord{idbuf, sex, birth, year, expense});
        }
    }
    return ds;
}

SynthCalibration load_calibration(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    const json j = json::parse(in);

    SynthCalibration c = default_calibration();
    if (j.contains("n_persons")) c.n_persons = j.at("n_persons").get<int>();
    if (j.contains("first_year")) c.first_year = j.at("first_year").get<int>();
    if (j.contains("n_years")) c.n_years = j.at("n_years").get<int>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("female_share"))
        c.female_share = j.at("female_share").get<double>();
    if (j.contains("frailty_sd")) c.frailty_sd = j.at("frailty_sd").get<double>();
    if (j.contains("frailty_rho"))
        c.frailty_rho = j.at("frailty_rho").get<double>();
    if (j.contains("start_age_weights")) {
        const auto w = j.at("start_age_weights").get<std::vector<double>>();
        if (w.size() != c.start_age_weights.size())
            throw std::runtime_error("start_age_weights needs 7 entries");
        std::copy(w.begin(), w.end(), c.start_age_weights.begin());
    }
    if (j.contains("strata")) {
        for (const Sex sex : kBothSexes) {
            const auto& block = j.at("strata").at(label(sex));
            for (int r = 0; r < kNumSimRanges; ++r) {
                const auto key =
                    label(static_cast<AgeRange>(kFirstSimRange + r));
                if (!block.contains(key)) continue;
                const auto& e = block.at(key);
                StratumCalib& sc = c.strata[index(sex)][r];
                if (e.contains("zero_prob"))
                    sc.zero_prob = e.at("zero_prob").get<double>();
                if (e.contains("median_reais"))
                    sc.log_location = std::log(e.at("median_reais").get<double>());
                if (e.contains("log_location"))
                    sc.log_location = e.at("log_location").get<double>();
                if (e.contains("log_scale"))
                    sc.log_scale = e.at("log_scale").get<double>();
            }
        }
    }
    c.validate();
    return c;
}

void save_calibration(const SynthCalibration& calib, const std::string& path) {
    json j;
    j["n_persons"] = calib.n_persons;
    j["first_year"] = calib.first_year;
    j["n_years"] = calib.n_years;
    j["seed"] = calib.seed;
    j["female_share"] = calib.female_share;
    j["frailty_sd"] = calib.frailty_sd;
    j["frailty_rho"] = calib.frailty_rho;
    j["start_age_weights"] = calib.start_age_weights;
    json strata;
    for (const Sex sex : kBothSexes) {
        json block;
        for (int r = 0; r < kNumSimRanges; ++r) {
            const StratumCalib& sc = calib.strata[index(sex)][r];
            block[label(static_cast<AgeRange>(kFirstSimRange + r))] = {
                {"zero_prob", sc.zero_prob},
                {"median_reais", std::exp(sc.log_location)},
                {"log_scale", sc.log_scale}};
        }
        strata[label(sex)] = std::move(block);
    }
    j["strata"] = std::move(strata);

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

}  // namespace hsasim
