#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "skglass/analytics.hpp"

namespace skglass {

struct SweepRow {
    int n = 0;
    double beta = 0.0;
    double f_mean = 0.0, f_se = 0.0;
    double s_mean = 0.0, s_se = 0.0;
    double u_mean = 0.0, u_se = 0.0;
};

struct ExtrapolationResult {
    double intercept = 0.0;
    double slope = 0.0;
    double intercept_std_error = 0.0;
    double ci_low = 0.0; // 95% interval on the intercept
    double ci_high = 0.0;
    int points = 0;
};

// Weighted least squares of s against 1/n (weights 1/SE^2); the intercept is
// the n -> infinity estimate. Needs >= 3 distinct n values.
ExtrapolationResult extrapolate_entropy(const std::vector<int>& n_list,
                                        const std::vector<double>& s_means,
                                        const std::vector<double>& s_std_errors);

struct BetaExtrapolation {
    double beta = 0.0;
    ExtrapolationResult fit;
};

struct SweepReport {
    std::string schema_version = "1";
    std::string generated_at; // excluded from the content hash
    std::uint64_t master_seed = 0;
    int sample_count = 0;
    std::vector<int> n_list;
    std::vector<double> betas;
    std::string extrapolation_model = "linear-1-over-n";
    std::vector<SweepRow> rows;
    PredictionSet predictions;
    std::vector<BetaExtrapolation> extrapolation; // present when |n_list| >= 3
};

// 17 significant digits, locale-independent, round-trip exact.
std::string format_number(double value);

// Frozen header n,beta,f_mean,f_se,s_mean,s_se,u_mean,u_se; LF endings.
std::string to_csv(const std::vector<SweepRow>& rows);

// Single top-level object with schema_version, metadata, rows, predictions,
// extrapolation. metadata.content_hash covers the document with generated_at
// and the hash field blanked, so reruns differ only in the timestamp.
std::string to_json(const SweepReport& report);

std::uint64_t fnv1a64(std::string_view bytes);

struct ZeroCrossResult {
    bool crossed = false;
    double beta_cross = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double intercept_at_low = 0.0;
    double intercept_at_high = 0.0;
    int evaluations = 0;
};

// Bisection for the smallest beta in [beta_low, beta_high] where the
// extrapolated intercept drops below 1e-6 (the curve may touch zero without
// going negative). The CI comes from re-bisecting the intercept -+ half of
// its 95% interval; evaluations are memoized per beta.
ZeroCrossResult zero_cross(const std::function<ExtrapolationResult(double)>& intercept_at,
                           double beta_low, double beta_high, double beta_tolerance = 0.01);

} // namespace skglass
