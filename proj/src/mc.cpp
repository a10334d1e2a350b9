#include "skglass/mc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "skglass/exact.hpp"
#include "skglass/numeric.hpp"
#include "skglass/rng.hpp"

namespace skglass {

namespace {

constexpr int kBatches = 32;

void validate_chain(const ChainConfig& cfg) {
    if (cfg.burn_in < 0) throw std::invalid_argument("burn_in must be >= 0");
    if (cfg.sweeps <= cfg.burn_in) throw std::invalid_argument("sweeps must exceed burn_in");
    if (cfg.measure_every < 1) throw std::invalid_argument("measure_every must be >= 1");
}

std::size_t measured_sweeps(const ChainConfig& cfg) {
    const std::size_t span = static_cast<std::size_t>(cfg.sweeps - cfg.burn_in);
    return (span + cfg.measure_every - 1) / cfg.measure_every;
}

// Equal-size batch means over a fixed-length measurement stream; trailing
// measurements that do not fill the last batch are dropped.
struct Recorder {
    std::size_t batch_size = 0;
    std::size_t used = 0;
    std::size_t count = 0;
    std::vector<double> batch_sums;

    explicit Recorder(std::size_t measurements) {
        if (measurements < kBatches) {
            throw std::invalid_argument("need at least " + std::to_string(kBatches) +
                                        " measured sweeps for batch means");
        }
        batch_size = measurements / kBatches;
        used = batch_size * kBatches;
        batch_sums.assign(kBatches, 0.0);
    }

    void add(double v) {
        if (count >= used) return;
        batch_sums[count / batch_size] += v;
        ++count;
    }

    std::pair<double, double> finish() const {
        std::vector<double> means(kBatches);
        for (int b = 0; b < kBatches; ++b) means[b] = batch_sums[b] / batch_size;
        return {mean(means), standard_error(means)};
    }
};

struct Chain {
    const CouplingMatrix* couplings;
    const std::vector<double>* dense;
    double inv_sqrt_n;
    std::vector<std::int8_t> spins;
    std::vector<double> spins_d;
    std::uint64_t index = 0;
    double energy = 0.0;
    UniformStream rng;

    Chain(const CouplingMatrix& j, const std::vector<double>& d, std::uint64_t seed)
        : couplings(&j),
          dense(&d),
          inv_sqrt_n(j.n > 1 ? 1.0 / std::sqrt(static_cast<double>(j.n)) : 0.0),
          spins(static_cast<std::size_t>(j.n)),
          spins_d(static_cast<std::size_t>(j.n)),
          rng(seed) {
        for (int i = 0; i < j.n; ++i) {
            const bool up = (rng.next_bits() & 1) != 0;
            spins[static_cast<std::size_t>(i)] = up ? 1 : -1;
            spins_d[static_cast<std::size_t>(i)] = up ? 1.0 : -1.0;
            if (up && i < 64) index |= std::uint64_t{1} << i;
        }
        anchor();
    }

    void anchor() { energy = detail::energy_over_spins(*couplings, spins.data()); }

    double flip_delta(int site) const {
        const double* row = dense->data() + static_cast<std::size_t>(site) * couplings->n;
        double field = 0.0;
        for (int j = 0; j < couplings->n; ++j) {
            field += row[j] * spins_d[static_cast<std::size_t>(j)];
        }
        return 2.0 * spins_d[static_cast<std::size_t>(site)] * field * inv_sqrt_n;
    }

    void flip(int site) {
        spins[static_cast<std::size_t>(site)] = -spins[static_cast<std::size_t>(site)];
        spins_d[static_cast<std::size_t>(site)] = -spins_d[static_cast<std::size_t>(site)];
        if (site < 64) index ^= std::uint64_t{1} << site;
    }

    // One sweep of n random-site proposals; returns accepted count.
    int sweep(double beta, std::vector<std::uint64_t>* visits) {
        int accepted = 0;
        for (int k = 0; k < couplings->n; ++k) {
            const int site = static_cast<int>(rng.next_index(couplings->n));
            const double de = flip_delta(site);
            if (de <= 0.0 || rng.next_unit() < std::exp(-beta * de)) {
                flip(site);
                energy += de;
                ++accepted;
            }
            if (visits) ++(*visits)[index];
        }
        return accepted;
    }

    void swap_configuration(Chain& other) {
        spins.swap(other.spins);
        spins_d.swap(other.spins_d);
        std::swap(index, other.index);
        std::swap(energy, other.energy);
    }
};

std::vector<std::uint64_t>* visit_buffer(const ChainConfig& cfg, int n,
                                         std::vector<std::uint64_t>& storage) {
    if (!cfg.track_visits) return nullptr;
    if (n > kMaxDistributionSites) {
        throw std::invalid_argument("state histogram needs n <= " +
                                    std::to_string(kMaxDistributionSites));
    }
    storage.assign(std::size_t{1} << n, 0);
    return &storage;
}

} // namespace

MCEstimate metropolis(const CouplingMatrix& couplings, const ChainConfig& cfg) {
    validate_chain(cfg);
    const auto dense = detail::dense_couplings(couplings);
    Chain chain(couplings, dense, cfg.seed);
    Recorder recorder(measured_sweeps(cfg));
    std::vector<std::uint64_t> visits;
    auto* visit_ptr = visit_buffer(cfg, couplings.n, visits);

    std::int64_t accepted = 0, proposed = 0;
    for (int s = 0; s < cfg.sweeps; ++s) {
        const bool measuring = s >= cfg.burn_in;
        const int acc = chain.sweep(cfg.beta.value, measuring ? visit_ptr : nullptr);
        if (!measuring) continue;
        accepted += acc;
        proposed += couplings.n;
        if ((s - cfg.burn_in) % cfg.measure_every == 0) {
            recorder.add(chain.energy / couplings.n);
            if (recorder.count % recorder.batch_size == 0) chain.anchor();
        }
    }

    MCEstimate est;
    const auto [m, se] = recorder.finish();
    est.mean_energy_density = m;
    est.std_error = se;
    est.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(proposed);
    est.state_visits = std::move(visits);
    return est;
}

std::vector<MCEstimate> parallel_tempering(const CouplingMatrix& couplings,
                                           const ChainConfig& cfg) {
    validate_chain(cfg);
    const auto& ladder = cfg.ladder;
    if (ladder.size() < 2) throw std::invalid_argument("tempering ladder needs >= 2 rungs");
    for (std::size_t i = 0; i < ladder.size(); ++i) {
        if (ladder[i] <= 0.0) throw std::invalid_argument("ladder betas must be positive");
        if (i > 0 && ladder[i] < ladder[i - 1]) {
            throw std::invalid_argument("ladder must be non-decreasing");
        }
    }

    const int rungs = static_cast<int>(ladder.size());
    const auto dense = detail::dense_couplings(couplings);

    std::vector<Chain> chains;
    chains.reserve(static_cast<std::size_t>(rungs));
    for (int r = 0; r < rungs; ++r) chains.emplace_back(couplings, dense, derive_seed(cfg.seed, r));
    UniformStream swap_rng(derive_seed(cfg.seed, rungs));

    const std::size_t n_meas = measured_sweeps(cfg);
    std::vector<Recorder> recorders(static_cast<std::size_t>(rungs), Recorder(n_meas));
    std::vector<std::int64_t> accepted(static_cast<std::size_t>(rungs), 0);
    std::vector<std::int64_t> swap_tries(static_cast<std::size_t>(rungs), 0);
    std::vector<std::int64_t> swap_accepts(static_cast<std::size_t>(rungs), 0);

    for (int s = 0; s < cfg.sweeps; ++s) {
        const bool measuring = s >= cfg.burn_in;
        for (int r = 0; r < rungs; ++r) {
            const int acc = chains[static_cast<std::size_t>(r)].sweep(ladder[static_cast<std::size_t>(r)], nullptr);
            if (measuring) accepted[static_cast<std::size_t>(r)] += acc;
        }
        // Even pairs on even sweeps, odd pairs on odd sweeps. The uniform draw
        // is consumed unconditionally so the stream position is a function of
        // the sweep count alone.
        for (int i = s % 2; i + 1 < rungs; i += 2) {
            const auto lo = static_cast<std::size_t>(i);
            const double gain = (ladder[lo] - ladder[lo + 1]) *
                                (chains[lo].energy - chains[lo + 1].energy);
            const double u = swap_rng.next_unit();
            const bool accept = u < std::exp(std::min(0.0, gain));
            if (measuring) ++swap_tries[lo];
            if (accept) {
                chains[lo].swap_configuration(chains[lo + 1]);
                if (measuring) ++swap_accepts[lo];
            }
        }
        if (measuring && (s - cfg.burn_in) % cfg.measure_every == 0) {
            for (int r = 0; r < rungs; ++r) {
                auto& rec = recorders[static_cast<std::size_t>(r)];
                rec.add(chains[static_cast<std::size_t>(r)].energy / couplings.n);
                if (rec.count % rec.batch_size == 0) chains[static_cast<std::size_t>(r)].anchor();
            }
        }
    }

    std::vector<MCEstimate> out(static_cast<std::size_t>(rungs));
    const double proposals = static_cast<double>(cfg.sweeps - cfg.burn_in) * couplings.n;
    for (int r = 0; r < rungs; ++r) {
        const auto idx = static_cast<std::size_t>(r);
        const auto [m, se] = recorders[idx].finish();
        out[idx].mean_energy_density = m;
        out[idx].std_error = se;
        out[idx].acceptance_rate = static_cast<double>(accepted[idx]) / proposals;
        out[idx].swap_acceptance =
            swap_tries[idx] > 0
                ? static_cast<double>(swap_accepts[idx]) / static_cast<double>(swap_tries[idx])
                : 0.0;
    }
    return out;
}

std::vector<ThermoIntegrationPoint> thermo_integration_free_energy(
    const CouplingMatrix& couplings, const std::vector<double>& beta_grid,
    const ChainConfig& cfg) {
    if (beta_grid.empty()) throw std::invalid_argument("beta grid must be non-empty");
    if (beta_grid.front() >= 0.1) {
        throw std::invalid_argument("beta grid must start below 0.1 to anchor at log 2");
    }
    for (std::size_t i = 0; i < beta_grid.size(); ++i) {
        if (beta_grid[i] <= 0.0) throw std::invalid_argument("grid betas must be positive");
        if (i > 0 && beta_grid[i] <= beta_grid[i - 1]) {
            throw std::invalid_argument("beta grid must be ascending");
        }
    }

    std::vector<MCEstimate> rungs;
    if (beta_grid.size() == 1) {
        ChainConfig single = cfg;
        single.beta = InverseTemperature(beta_grid[0]);
        single.ladder.clear();
        rungs.push_back(metropolis(couplings, single));
    } else {
        ChainConfig ladder_cfg = cfg;
        ladder_cfg.ladder = beta_grid;
        rungs = parallel_tempering(couplings, ladder_cfg);
    }

    // f(beta_k) = log2 - trapezoid of u over [0, beta_k] with u(0) = 0. The
    // variance treats rung estimates as independent.
    const double log2 = std::log(2.0);
    std::vector<ThermoIntegrationPoint> out(beta_grid.size());
    KahanSum integral;
    double prev_beta = 0.0, prev_u = 0.0;
    for (std::size_t k = 0; k < beta_grid.size(); ++k) {
        integral.add(0.5 * (beta_grid[k] - prev_beta) * (prev_u + rungs[k].mean_energy_density));
        prev_beta = beta_grid[k];
        prev_u = rungs[k].mean_energy_density;

        double var = 0.0;
        for (std::size_t j = 0; j <= k; ++j) {
            const double left = j == 0 ? beta_grid[0] : beta_grid[j] - beta_grid[j - 1];
            const double right = j < k ? beta_grid[j + 1] - beta_grid[j] : 0.0;
            const double w = 0.5 * (left + right);
            var += w * w * rungs[j].std_error * rungs[j].std_error;
        }

        out[k].beta = beta_grid[k];
        out[k].f = log2 - integral.value();
        out[k].f_std_error = std::sqrt(var);
        out[k].u = rungs[k].mean_energy_density;
        out[k].u_std_error = rungs[k].std_error;
    }
    return out;
}

Estimate mc_entropy(InverseTemperature beta, Estimate f, Estimate u) {
    Estimate s;
    s.value = f.value + beta.value * u.value;
    s.std_error = std::sqrt(f.std_error * f.std_error +
                            beta.value * beta.value * u.std_error * u.std_error);
    return s;
}

AnnealResult simulated_annealing_ground_state(const CouplingMatrix& couplings,
                                              const AnnealSchedule& schedule, int restarts,
                                              std::uint64_t seed) {
    if (schedule.beta_start <= 0.0 || schedule.beta_end <= schedule.beta_start) {
        throw std::invalid_argument("schedule needs 0 < beta_start < beta_end");
    }
    if (schedule.stages < 2) throw std::invalid_argument("schedule needs >= 2 stages");
    if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");

    const int n = couplings.n;
    const int sweeps_per_stage = schedule.sweeps_per_stage > 0 ? schedule.sweeps_per_stage : n;
    const double ratio = schedule.beta_end / schedule.beta_start;
    const auto dense = detail::dense_couplings(couplings);

    AnnealResult best;
    best.energy = std::numeric_limits<double>::infinity();
    best.restarts = restarts;

    for (int r = 0; r < restarts; ++r) {
        Chain chain(couplings, dense, derive_seed(seed, r));
        double best_tracked = chain.energy;
        std::vector<std::int8_t> best_spins = chain.spins;

        for (int stage = 0; stage < schedule.stages; ++stage) {
            const double beta =
                schedule.beta_start *
                std::pow(ratio, static_cast<double>(stage) / (schedule.stages - 1));
            for (int s = 0; s < sweeps_per_stage; ++s) {
                chain.sweep(beta, nullptr);
                if (chain.energy < best_tracked) {
                    best_tracked = chain.energy;
                    best_spins = chain.spins;
                }
            }
            chain.anchor();
        }

        const double exact = detail::energy_over_spins(couplings, best_spins.data());
        if (exact < best.energy) {
            best.energy = exact;
            best.spins = std::move(best_spins);
        }
    }

    best.energy_density = best.energy / n;
    return best;
}

} // namespace skglass
