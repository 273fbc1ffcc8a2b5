#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace hsasim {

// Percentile by linear interpolation between the closest order
// statistics: rank = q/100 * (n-1) over the ascending sort. This is the
// convention used by every table in the project.
double percentile_sorted(std::span<const double> sorted, double q);

// Convenience: copies, sorts, interpolates.
double percentile(std::vector<double> values, double q);

double mean(std::span<const double> values);

// Sample standard deviation (n-1); 0 for fewer than two values.
double sample_sd(std::span<const double> values);

// Adjusted Fisher-Pearson sample skewness: g1 * sqrt(n(n-1))/(n-2).
double skewness_adjusted(std::span<const double> values);

// Same, from power sums (n, sum x, sum x^2, sum x^3).
double skewness_adjusted_from_moments(double n, double s1, double s2, double s3);

struct TukeyFences {
    double lower = 0.0;
    double upper = 0.0;
};

// 1.5*IQR fences around the quartiles of the sorted data.
TukeyFences tukey_fences(std::span<const double> sorted);

std::vector<double> tukey_outliers(std::span<const double> sorted);

// Mean and sample sd across replications; sd is undefined (flagged) when
// there is a single replication.
struct MeanSd {
    double mean = 0.0;
    double sd = 0.0;
    bool sd_defined = false;
};

MeanSd mean_sd(std::span<const double> values);

// Upper critical value of the chi-square distribution via the
// Wilson-Hilferty cube approximation (exact table entries for df <= 4).
// Used by the goodness-of-fit gates in the test suites.
double chi_square_critical(int df, double alpha);

}  // namespace hsasim
