#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "hsasim/records.hpp"

namespace hsasim {

// Per-stratum generating parameters: chance of a no-expense year, and the
// location/spread of log positive expenses (log R$).
struct StratumCalib {
    double zero_prob = 0.06;
    double log_location = 6.7;
    double log_scale = 1.4;
};

// Controls for the synthetic claims generator. Positive expenses are
// lognormal around the stratum location, scaled by a per-person frailty
// multiplier that evolves as a stationary AR(1) in log space so that
// cross-year persistence decays with the year gap.
struct SynthCalibration {
    int n_persons = 27780;
    int first_year = 2005;
    int n_years = 5;
    std::uint64_t seed = 20050101;
    double female_share = 0.49;
    double frailty_sd = 0.85;   // stationary sd of log frailty
    double frailty_rho = 0.75;  // year-over-year autocorrelation
    // Indexed by [sex][sim age range 0..7] (25-30 .. 61-65).
    std::array<std::array<StratumCalib, kNumSimRanges>, 2> strata{};
    // Start-age buckets (age on Jan 1 of the first year, capped so the
    // age window filter keeps everyone).
    std::array<double, 7> start_age_weights = {1.2, 1.5, 1.7, 1.7, 1.6, 1.1, 0.6};

    void validate() const;
};

// Defaults tuned so the generated cohort lands near the usual claims
// shape: zero share around 5-6% a year, stratum medians rising with age,
// female medians above male.
SynthCalibration default_calibration();

SynthCalibration load_calibration(const std::string& path);
void save_calibration(const SynthCalibration& calib, const std::string& path);

// Deterministic under calib.seed; output loads through the ingest format
// unchanged.
Dataset generate_dataset(const SynthCalibration& calib);

}  // namespace hsasim
