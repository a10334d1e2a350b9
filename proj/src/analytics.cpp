#include "skglass/analytics.hpp"

#include <cmath>
#include <stdexcept>

namespace skglass {

PredictionSet predictions() {
    const double log2 = std::log(2.0);
    const double beta1 = 1.0;
    const double beta_star = 4.0 * log2;

    PredictionSet p;
    p.beta1 = beta1;
    p.beta_star = beta_star;
    p.f_beta1 = log2 + 0.25;
    p.f_beta_star = beta_star * log2 + 0.25;
    p.annealed_f_beta_star = log2 + beta_star * beta_star / 4.0;
    p.alpha_infinity = (beta1 / 4.0) * (beta_star - beta1);
    p.a_infinity = beta_star * beta1 / 4.0 - beta1 * beta1 / 4.0;
    p.kl_prediction = (beta_star - beta1) / (4.0 * beta_star);
    p.cross_entropy_prediction = 1.0 / (4.0 * beta_star) - 0.25;
    p.kl_uniform_at_beta_star = log2;
    p.entropy_at_beta_star = 0.0;
    p.spherical_bound = 2.2058;
    return p;
}

double rem_beta_c() { return 2.0 * std::sqrt(std::log(2.0)); }

double rem_free_energy(InverseTemperature beta) {
    const double log2 = std::log(2.0);
    if (beta.value <= rem_beta_c()) return log2 + beta.value * beta.value / 4.0;
    return beta.value * std::sqrt(log2);
}

double rem_entropy(InverseTemperature beta) {
    // Frozen phase is pinned to exactly zero; the branch point itself is in it.
    if (beta.value >= rem_beta_c()) return 0.0;
    return std::max(0.0, std::log(2.0) - beta.value * beta.value / 4.0);
}

RemComparisonReport sk_vs_rem_report(const std::vector<SkEntropyRow>& sk_entropy_table) {
    if (sk_entropy_table.empty()) throw std::invalid_argument("empty SK entropy table");

    const double beta_c = rem_beta_c();
    const double beta_star = 4.0 * std::log(2.0);
    bool has_beta_c = false, has_beta_star = false;
    for (const auto& row : sk_entropy_table) {
        if (std::abs(row.beta - beta_c) <= 1e-9) has_beta_c = true;
        if (std::abs(row.beta - beta_star) <= 1e-9) has_beta_star = true;
    }
    if (!has_beta_c || !has_beta_star) {
        throw std::invalid_argument("SK entropy table must include rows at beta_c and beta_star");
    }

    RemComparisonReport report;
    report.beta_c = beta_c;
    report.beta_star = beta_star;
    report.beta_star_minus_beta_c_squared = beta_star - beta_c * beta_c;
    report.rows.reserve(sk_entropy_table.size());
    for (const auto& row : sk_entropy_table) {
        RemComparisonRow out;
        out.n = row.n;
        out.beta = row.beta;
        out.sk_entropy_mean = row.entropy_mean;
        out.sk_entropy_std_error = row.entropy_std_error;
        out.rem_entropy = rem_entropy(InverseTemperature(row.beta));
        report.rows.push_back(out);
    }
    return report;
}

} // namespace skglass
