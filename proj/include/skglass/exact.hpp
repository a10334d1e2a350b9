#pragma once

#include <cstdint>
#include <vector>

#include "skglass/model.hpp"

namespace skglass {

/// Hard cap for streaming enumeration (2^30 configurations, minutes of work).
inline constexpr int kMaxEnumerationSites = 30;
/// Hard cap for operations that materialize per-configuration arrays.
inline constexpr int kMaxDistributionSites = 20;

/// Exact observables at one (n, J, beta).
struct ThermoPoint {
    int n = 0;
    double beta = 0.0;
    double log_z = 0.0;               // log Z_n(beta, J)
    double mean_h = 0.0;              // Gibbs <H>
    double mean_h2 = 0.0;             // Gibbs <H^2>
    double entropy = 0.0;             // S = log Z + beta <H>, in nats
    double free_energy_density = 0.0; // log Z / n
};

/// Exact Gibbs probabilities indexed by configuration index.
struct GibbsDistribution {
    int n = 0;
    double beta = 0.0;
    std::vector<double> probabilities; // 2^n entries, sum to 1
};

struct GroundStateResult {
    double min_energy = 0.0;
    std::uint64_t argmin_index = 0; // smallest index among exact ties
    std::uint64_t degeneracy = 0;   // >= 2 by global spin-flip symmetry
    double energy_density = 0.0;    // min_energy / n
};

struct EnumerationResult {
    std::vector<ThermoPoint> points; // one per requested beta
    GroundStateResult ground_state;
};

/// One Gray-code sweep over all 2^n configurations with O(n) work per step.
/// All beta accumulators are updated in the same pass; log Z uses streaming
/// max-shifted sums so e^{-beta H} never overflows. Ground-state candidates
/// are re-evaluated with the canonical direct sum, so degeneracy counts exact
/// ties only.
EnumerationResult enumerate_observables(const CouplingMatrix& couplings,
                                        const std::vector<InverseTemperature>& betas);

/// Partitioned sweep: fixes the top `top_bits` spins and runs 2^top_bits
/// independent Gray chains (optionally on several threads), merging the
/// (max, scaled-sum) accumulators in fixed partition order. Agrees with the
/// single sweep up to reassociation (~1e-12 on log Z).
EnumerationResult enumerate_observables_partitioned(const CouplingMatrix& couplings,
                                                    const std::vector<InverseTemperature>& betas,
                                                    int top_bits, int workers = 1);

/// All 2^n energies indexed by configuration index (n <= 20).
std::vector<double> enumerate_energies(const CouplingMatrix& couplings);

/// Exact Gibbs measure at one beta (n <= 20).
GibbsDistribution gibbs_distribution(const CouplingMatrix& couplings, InverseTemperature beta);

/// KL divergence S(mu_beta2 | mu_beta1) in nats by direct summation (n <= 20).
/// Equals (beta1 - beta2) <H>_beta2 + log Z(beta1) - log Z(beta2).
double relative_entropy(const CouplingMatrix& couplings, InverseTemperature beta2,
                        InverseTemperature beta1 = InverseTemperature(1.0));

/// S(mu_beta | uniform) = n log 2 - S(mu_beta), by direct summation (n <= 20).
double relative_entropy_uniform(const CouplingMatrix& couplings, InverseTemperature beta);

/// Max over configurations of the absolute log-residual of the two-temperature
/// functional equation
///   mu_beta(sigma) = mu_beta1(sigma)^{beta/beta1} Z^{beta/beta1}(beta1) / Z(beta).
/// An algebraic identity at finite n; the residual is pure rounding (<= 1e-10).
double functional_equation_residual(const CouplingMatrix& couplings, InverseTemperature beta,
                                    InverseTemperature beta1 = InverseTemperature(1.0));

/// Finite-n deviation (beta/beta1)(1/n) log Z(beta1) - (1/n) log Z(beta).
double alpha_n(const CouplingMatrix& couplings, InverseTemperature beta,
               InverseTemperature beta1 = InverseTemperature(1.0));

/// Finite-n cross-entropy density (1/n) sum_sigma mu_beta_star log mu_beta1.
double cross_entropy_term(const CouplingMatrix& couplings, InverseTemperature beta_star,
                          InverseTemperature beta1 = InverseTemperature(1.0));

} // namespace skglass
