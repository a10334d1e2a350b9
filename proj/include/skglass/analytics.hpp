#pragma once

#include <vector>

#include "skglass/model.hpp"

namespace skglass {

// Thermodynamic-limit constants at the reference temperature beta1 = 1 and at
// beta_star = 4 log 2, the point where the limiting entropy density hits zero.
struct PredictionSet {
    double beta1;
    double beta_star;
    double f_beta1;                  // log2 + 1/4
    double f_beta_star;              // beta_star log2 + 1/4
    double annealed_f_beta_star;     // log2 + beta_star^2/4
    double alpha_infinity;           // (beta1/4)(beta_star - beta1)
    double a_infinity;               // beta_star beta1/4 - beta1^2/4
    double kl_prediction;            // (beta_star - beta1)/(4 beta_star)
    double cross_entropy_prediction; // 1/(4 beta_star) - 1/4
    double kl_uniform_at_beta_star;  // log2
    double entropy_at_beta_star;     // 0
    double spherical_bound;          // display-only comparison constant
};

PredictionSet predictions();

// Freezing point of the random energy model in the same normalization as the
// annealed curve log2 + beta^2/4.
double rem_beta_c();

// log2 + beta^2/4 below beta_c, beta sqrt(log2) above; continuous at beta_c.
double rem_free_energy(InverseTemperature beta);

// log2 - beta^2/4 below beta_c, exactly 0 at and above beta_c.
double rem_entropy(InverseTemperature beta);

struct SkEntropyRow {
    int n = 0;
    double beta = 0.0;
    double entropy_mean = 0.0;
    double entropy_std_error = 0.0;
};

struct RemComparisonRow {
    int n = 0;
    double beta = 0.0;
    double sk_entropy_mean = 0.0;
    double sk_entropy_std_error = 0.0;
    double rem_entropy = 0.0;
};

struct RemComparisonReport {
    double beta_c = 0.0;
    double beta_star = 0.0;
    double beta_star_minus_beta_c_squared = 0.0;
    std::vector<RemComparisonRow> rows;
};

// Side-by-side finite-n SK entropies against the REM curve. The input must
// contain rows at both beta_c and beta_star (matched within 1e-9).
RemComparisonReport sk_vs_rem_report(const std::vector<SkEntropyRow>& sk_entropy_table);

} // namespace skglass
