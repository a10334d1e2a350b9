#pragma once

#include <cstdint>
#include <vector>

#include "skglass/model.hpp"

namespace skglass {

// Random-site single-flip Metropolis setup. One sweep = n proposals.
// Measurements run over `sweeps` full sweeps after `burn_in` sweeps.
struct ChainConfig {
    InverseTemperature beta{1.0};
    std::vector<double> ladder; // tempering only; non-decreasing, >= 2 rungs
    int sweeps = 20000;
    int burn_in = 2000;
    int measure_every = 1;
    std::uint64_t seed = 1;
    bool track_visits = false; // per-proposal state histogram, small n only
};

struct MCEstimate {
    double mean_energy_density = 0.0;
    double std_error = 0.0; // batch means, 32 batches
    double acceptance_rate = 0.0;
    // Tempering: acceptance of swaps between this rung and the next one up.
    double swap_acceptance = 0.0;
    std::vector<std::uint64_t> state_visits; // filled when track_visits
};

MCEstimate metropolis(const CouplingMatrix& couplings, const ChainConfig& cfg);

// Replica exchange over cfg.ladder. Adjacent-pair swaps after every sweep,
// even pairs on even sweeps and odd pairs on odd sweeps; one estimate per
// rung, in ladder order.
std::vector<MCEstimate> parallel_tempering(const CouplingMatrix& couplings,
                                           const ChainConfig& cfg);

struct ThermoIntegrationPoint {
    double beta = 0.0;
    double f = 0.0;
    double f_std_error = 0.0;
    double u = 0.0; // mean energy density at this rung
    double u_std_error = 0.0;
};

// (1/n) log Z(beta) = log2 - integral of u from 0 to beta, trapezoidal on the
// given ascending grid anchored at u(0) = 0. Grids with >= 2 points run as a
// tempering ladder; a single point runs a plain chain.
std::vector<ThermoIntegrationPoint> thermo_integration_free_energy(
    const CouplingMatrix& couplings, const std::vector<double>& beta_grid,
    const ChainConfig& cfg);

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
};

// s = f + beta u with independence-approximation error propagation.
Estimate mc_entropy(InverseTemperature beta, Estimate f, Estimate u);

struct AnnealSchedule {
    double beta_start = 0.1;
    double beta_end = 10.0;
    int stages = 200;
    int sweeps_per_stage = 0; // 0 picks n
};

struct AnnealResult {
    double energy = 0.0; // exact recompute of the best configuration
    double energy_density = 0.0;
    std::vector<std::int8_t> spins;
    int restarts = 0;
};

// Geometric-schedule annealing over independent restarts; returns the best
// configuration with its energy recomputed by the canonical direct sum, so
// the result can never undercut an exact enumeration of the same couplings.
AnnealResult simulated_annealing_ground_state(const CouplingMatrix& couplings,
                                              const AnnealSchedule& schedule, int restarts,
                                              std::uint64_t seed);

} // namespace skglass
