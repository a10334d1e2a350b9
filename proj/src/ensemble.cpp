#include "skglass/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "skglass/exact.hpp"
#include "skglass/numeric.hpp"
#include "skglass/parallel.hpp"
#include "skglass/rng.hpp"

namespace skglass {

namespace {

constexpr int kRetainDefaultCap = 10000;

void check_config(const EnsembleConfig& cfg) {
    if (cfg.sample_count < 1) throw std::invalid_argument("sample_count must be >= 1");
    if (cfg.betas.empty()) throw std::invalid_argument("at least one beta is required");
    if (cfg.n < 1) throw std::invalid_argument("n must be >= 1");
}

struct SampleColumns {
    // [beta][sample], written once per slot, reduced in sample order.
    std::vector<std::vector<double>> f, s, u;
    std::vector<double> gs;
};

SampleColumns run_samples(const EnsembleConfig& cfg) {
    check_config(cfg);
    const std::size_t nb = cfg.betas.size();
    const std::size_t m = static_cast<std::size_t>(cfg.sample_count);

    SampleColumns cols;
    cols.f.assign(nb, std::vector<double>(m));
    cols.s.assign(nb, std::vector<double>(m));
    cols.u.assign(nb, std::vector<double>(m));
    cols.gs.assign(m, 0.0);

    const int workers = resolve_worker_count(cfg.worker_count);
    parallel_for(cfg.sample_count, workers, [&](int i) {
        const auto couplings = sample_couplings(cfg.n, derive_seed(cfg.master_seed, i));
        const auto result = enumerate_observables(couplings, cfg.betas);
        for (std::size_t b = 0; b < nb; ++b) {
            const auto& p = result.points[b];
            cols.f[b][static_cast<std::size_t>(i)] = p.free_energy_density;
            cols.s[b][static_cast<std::size_t>(i)] = p.entropy / cfg.n;
            cols.u[b][static_cast<std::size_t>(i)] = p.mean_h / cfg.n;
        }
        cols.gs[static_cast<std::size_t>(i)] = result.ground_state.energy_density;
    });
    return cols;
}

EnsembleStats reduce(double beta, const std::vector<double>& values) {
    EnsembleStats st;
    st.beta = beta;
    st.mean = mean(values);
    st.std_error = standard_error(values);
    st.sample_count = static_cast<int>(values.size());
    return st;
}

bool retain_samples(const EnsembleConfig& cfg) {
    if (cfg.retain_samples.has_value()) return *cfg.retain_samples;
    return cfg.sample_count <= kRetainDefaultCap;
}

} // namespace

EnsembleResult ensemble_observables(const EnsembleConfig& cfg) {
    auto cols = run_samples(cfg);

    EnsembleResult result;
    for (std::size_t b = 0; b < cfg.betas.size(); ++b) {
        const double beta = cfg.betas[b].value;
        result.f.push_back(reduce(beta, cols.f[b]));
        result.s.push_back(reduce(beta, cols.s[b]));
        result.u.push_back(reduce(beta, cols.u[b]));
    }
    result.ground_state_density = reduce(0.0, cols.gs);
    if (retain_samples(cfg)) {
        result.samples.f = std::move(cols.f);
        result.samples.s = std::move(cols.s);
        result.samples.u = std::move(cols.u);
        result.samples.ground_state_density = std::move(cols.gs);
        result.samples_retained = true;
    }
    return result;
}

std::vector<EnsembleStats> quenched_free_energy(const EnsembleConfig& cfg) {
    return ensemble_observables(cfg).f;
}

std::vector<EnsembleStats> quenched_entropy(const EnsembleConfig& cfg) {
    return ensemble_observables(cfg).s;
}

double annealed_free_energy_exact(int n, InverseTemperature beta) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    return std::log(2.0) + beta.value * beta.value * (n - 1) / (4.0 * n);
}

std::vector<AnnealedStats> annealed_free_energy_empirical(const EnsembleConfig& cfg) {
    const auto cols = run_samples(cfg);
    const std::size_t m = static_cast<std::size_t>(cfg.sample_count);

    std::vector<AnnealedStats> out;
    out.reserve(cfg.betas.size());
    for (std::size_t b = 0; b < cfg.betas.size(); ++b) {
        // log Z_i = n * f_i; all arithmetic stays in log scale.
        std::vector<double> log_z(m);
        for (std::size_t i = 0; i < m; ++i) log_z[i] = cfg.n * cols.f[b][i];
        const double max_l = *std::max_element(log_z.begin(), log_z.end());

        std::vector<double> w(m);
        KahanSum total;
        for (std::size_t i = 0; i < m; ++i) {
            w[i] = std::exp(log_z[i] - max_l);
            total.add(w[i]);
        }
        const double sum_w = total.value();

        AnnealedStats st;
        st.beta = cfg.betas[b].value;
        st.sample_count = cfg.sample_count;
        st.value = (max_l + std::log(sum_w / m)) / cfg.n;
        st.top_weight = 1.0 / sum_w;
        st.heavy_tail = st.top_weight > 0.5;

        // Jackknife over the nonlinear log-mean: delete-one estimates.
        if (m >= 2) {
            std::vector<double> theta(m);
            for (std::size_t i = 0; i < m; ++i) {
                theta[i] = (max_l + std::log((sum_w - w[i]) / (m - 1))) / cfg.n;
            }
            const double theta_bar = mean(theta);
            KahanSum ss;
            for (double t : theta) ss.add((t - theta_bar) * (t - theta_bar));
            st.std_error = std::sqrt((m - 1.0) / m * ss.value());
        }
        out.push_back(st);
    }
    return out;
}

SelfAveragingReport self_averaging_diagnostic(const std::vector<int>& n_list,
                                              InverseTemperature beta, int sample_count,
                                              std::uint64_t master_seed, int worker_count) {
    if (n_list.empty()) throw std::invalid_argument("n_list must be non-empty");

    SelfAveragingReport report;
    for (int n : n_list) {
        EnsembleConfig cfg;
        cfg.n = n;
        cfg.betas = {beta};
        cfg.sample_count = sample_count;
        cfg.master_seed = master_seed;
        cfg.retain_samples = true;
        cfg.worker_count = worker_count;
        const auto cols = run_samples(cfg);

        SelfAveragingRow row;
        row.n = n;
        row.variance = sample_variance(cols.f[0]);
        // Normal-theory approximation: SE(s^2) ~ s^2 sqrt(2/(M-1)).
        row.variance_std_error =
            sample_count > 1 ? row.variance * std::sqrt(2.0 / (sample_count - 1)) : 0.0;
        report.rows.push_back(row);
    }

    if (report.rows.size() >= 2) {
        // Least squares of log(variance) on log(n); zero variances excluded.
        std::vector<double> xs, ys;
        for (const auto& row : report.rows) {
            if (row.variance > 0.0) {
                xs.push_back(std::log(static_cast<double>(row.n)));
                ys.push_back(std::log(row.variance));
            }
        }
        if (xs.size() >= 2) {
            const double mx = mean(xs), my = mean(ys);
            double sxx = 0.0, sxy = 0.0;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                sxx += (xs[i] - mx) * (xs[i] - mx);
                sxy += (xs[i] - mx) * (ys[i] - my);
            }
            report.power_law_exponent = sxy / sxx;
        }
    }
    return report;
}

} // namespace skglass
