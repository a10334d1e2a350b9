#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "skglass/model.hpp"

namespace skglass {

// Disorder-ensemble run description. Per-sample seeds come from
// derive_seed(master_seed, sample_index), so results are a pure function of
// this struct no matter how many workers execute the samples.
struct EnsembleConfig {
    int n = 8;
    std::vector<InverseTemperature> betas;
    int sample_count = 100;
    std::uint64_t master_seed = 1;
    // Unset: retain per-sample values only up to 10^4 samples.
    std::optional<bool> retain_samples;
    // <= 0 picks a worker count from the hardware.
    int worker_count = 0;
};

struct EnsembleStats {
    double beta = 0.0;
    double mean = 0.0;
    double std_error = 0.0;
    int sample_count = 0;
};

// Log-mean-exp estimate of the annealed free energy density with a jackknife
// standard error. heavy_tail flags runs where the single largest Z carries
// more than half of the sample mean.
struct AnnealedStats {
    double beta = 0.0;
    double value = 0.0;
    double std_error = 0.0;
    double top_weight = 0.0;
    bool heavy_tail = false;
    int sample_count = 0;
};

// Per-sample densities in sample-index order, one inner vector per beta.
struct SampleTable {
    std::vector<std::vector<double>> f;
    std::vector<std::vector<double>> s;
    std::vector<std::vector<double>> u;
    std::vector<double> ground_state_density;
};

struct EnsembleResult {
    std::vector<EnsembleStats> f;
    std::vector<EnsembleStats> s;
    std::vector<EnsembleStats> u;
    EnsembleStats ground_state_density;
    SampleTable samples;
    bool samples_retained = false;
};

// One exact enumeration per disorder sample, every beta in one sweep.
// Deterministic in cfg alone; worker_count only affects wall time.
EnsembleResult ensemble_observables(const EnsembleConfig& cfg);

// Mean and standard error of (1/n) log Z per beta.
std::vector<EnsembleStats> quenched_free_energy(const EnsembleConfig& cfg);

// Mean and standard error of the entropy density per beta.
std::vector<EnsembleStats> quenched_entropy(const EnsembleConfig& cfg);

// (1/n) log E_J Z in closed form: log2 + beta^2 (n-1) / (4n).
double annealed_free_energy_exact(int n, InverseTemperature beta);

// (1/n) log of the sample mean of Z, via log-mean-exp over per-sample log Z.
std::vector<AnnealedStats> annealed_free_energy_empirical(const EnsembleConfig& cfg);

struct SelfAveragingRow {
    int n = 0;
    double variance = 0.0;
    double variance_std_error = 0.0;
};

// Sample variance of (1/n) log Z per n, plus the least-squares power-law
// exponent of variance against n on the log-log scale.
struct SelfAveragingReport {
    std::vector<SelfAveragingRow> rows;
    double power_law_exponent = 0.0;
};

SelfAveragingReport self_averaging_diagnostic(const std::vector<int>& n_list,
                                              InverseTemperature beta, int sample_count,
                                              std::uint64_t master_seed, int worker_count = 0);

} // namespace skglass
