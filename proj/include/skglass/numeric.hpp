#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace skglass {

/// Compensated (Kahan) accumulator for long reductions.
struct KahanSum {
    double sum = 0.0;
    double compensation = 0.0;

    void add(double v) {
        const double y = v - compensation;
        const double t = sum + y;
        compensation = (t - sum) - y;
        sum = t;
    }

    double value() const { return sum; }
};

/// Max-shifted log(sum_i exp(x_i)); -inf for an empty span.
inline double log_sum_exp(std::span<const double> xs) {
    double max_x = -std::numeric_limits<double>::infinity();
    for (double x : xs) max_x = std::max(max_x, x);
    if (!std::isfinite(max_x)) return max_x;
    KahanSum s;
    for (double x : xs) s.add(std::exp(x - max_x));
    return max_x + std::log(s.value());
}

inline double mean(std::span<const double> xs) {
    KahanSum s;
    for (double x : xs) s.add(x);
    return s.value() / static_cast<double>(xs.size());
}

/// Unbiased sample variance; 0 for fewer than two points.
inline double sample_variance(std::span<const double> xs) {
    if (xs.size() < 2) return 0.0;
    const double m = mean(xs);
    KahanSum s;
    for (double x : xs) s.add((x - m) * (x - m));
    return s.value() / static_cast<double>(xs.size() - 1);
}

/// Standard error of the mean, sd/sqrt(count).
inline double standard_error(std::span<const double> xs) {
    if (xs.size() < 2) return 0.0;
    return std::sqrt(sample_variance(xs) / static_cast<double>(xs.size()));
}

} // namespace skglass
