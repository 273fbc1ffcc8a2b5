#include "hsasim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hsasim {

double percentile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw std::invalid_argument("percentile of empty data");
    if (q <= 0.0) return sorted.front();
    if (q >= 100.0) return sorted.back();
    const double rank = q / 100.0 * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(rank);
    const double frac = rank - static_cast<double>(lo);
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

double percentile(std::vector<double> values, double q) {
    std::sort(values.begin(), values.end());
    return percentile_sorted(values, q);
}

double mean(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("mean of empty data");
    double s = 0.0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
}

double sample_sd(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) return 0.0;
    const double m = mean(values);
    double ss = 0.0;
    for (double v : values) ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(n - 1));
}

double skewness_adjusted(std::span<const double> values) {
    const double n = static_cast<double>(values.size());
    if (values.size() < 3) throw std::invalid_argument("skewness needs n >= 3");
    const double m = mean(values);
    double m2 = 0.0, m3 = 0.0;
    for (double v : values) {
        const double d = v - m;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= n;
    m3 /= n;
    if (m2 == 0.0) return 0.0;
    const double g1 = m3 / std::pow(m2, 1.5);
    return g1 * std::sqrt(n * (n - 1.0)) / (n - 2.0);
}

double skewness_adjusted_from_moments(double n, double s1, double s2, double s3) {
    if (n < 3.0) throw std::invalid_argument("skewness needs n >= 3");
    const double m = s1 / n;
    const double m2 = s2 / n - m * m;
    const double m3 = s3 / n - 3.0 * m * s2 / n + 2.0 * m * m * m;
    if (m2 <= 0.0) return 0.0;
    const double g1 = m3 / std::pow(m2, 1.5);
    return g1 * std::sqrt(n * (n - 1.0)) / (n - 2.0);
}

TukeyFences tukey_fences(std::span<const double> sorted) {
    const double q1 = percentile_sorted(sorted, 25.0);
    const double q3 = percentile_sorted(sorted, 75.0);
    const double iqr = q3 - q1;
    return TukeyFences{q1 - 1.5 * iqr, q3 + 1.5 * iqr};
}

std::vector<double> tukey_outliers(std::span<const double> sorted) {
    const TukeyFences f = tukey_fences(sorted);
    std::vector<double> out;
    for (double v : sorted)
        if (v < f.lower || v > f.upper) out.push_back(v);
    return out;
}

MeanSd mean_sd(std::span<const double> values) {
    MeanSd r;
    r.mean = mean(values);
    r.sd_defined = values.size() >= 2;
    r.sd = r.sd_defined ? sample_sd(values) : 0.0;
    return r;
}

double chi_square_critical(int df, double alpha) {
    if (df < 1) throw std::invalid_argument("df must be positive");
    if (alpha != 0.001)
        throw std::invalid_argument("only alpha = 0.001 is tabulated");
    static const double kSmall[] = {10.828, 13.816, 16.266, 18.467};
    if (df <= 4) return kSmall[df - 1];
    const double z = 3.090232;  // z_{0.999}
    const double d = static_cast<double>(df);
    const double c = 1.0 - 2.0 / (9.0 * d) + z * std::sqrt(2.0 / (9.0 * d));
    return d * c * c * c;
}

}  // namespace hsasim
