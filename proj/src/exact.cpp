#include "skglass/exact.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "skglass/errors.hpp"
#include "skglass/numeric.hpp"
#include "skglass/parallel.hpp"

namespace skglass {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Incremental energies are re-anchored against the direct sum every 2^20
// steps; drift beyond the abort threshold means the inputs are broken.
constexpr std::uint64_t kDriftCheckMask = (std::uint64_t{1} << 20) - 1;
constexpr double kDriftAbort = 1e-6;

// Candidate band for exact ground-state re-evaluation. Must exceed the worst
// accumulated drift between re-anchors so no true minimum slips past.
constexpr double kMinGuard = 1e-5;

// Streaming max-shifted accumulator for one beta: log Z, <H>, <H^2>.
struct BetaAccumulator {
    double beta = 0.0;
    double max_exponent = -kInf;
    double scaled_sum = 0.0;
    double scaled_h = 0.0;
    double scaled_h2 = 0.0;

    void add(double e) {
        const double x = -beta * e;
        if (x <= max_exponent) {
            const double w = std::exp(x - max_exponent);
            scaled_sum += w;
            scaled_h += w * e;
            scaled_h2 += w * e * e;
        } else {
            // exp(-inf) == 0 handles the first configuration.
            const double r = std::exp(max_exponent - x);
            scaled_sum = scaled_sum * r + 1.0;
            scaled_h = scaled_h * r + e;
            scaled_h2 = scaled_h2 * r + e * e;
            max_exponent = x;
        }
    }

    // Associative and commutative up to rounding, so partitions can be
    // merged in any fixed order.
    void merge(const BetaAccumulator& other) {
        if (other.scaled_sum == 0.0) return;
        if (scaled_sum == 0.0) {
            *this = other;
            return;
        }
        if (other.max_exponent <= max_exponent) {
            const double r = std::exp(other.max_exponent - max_exponent);
            scaled_sum += r * other.scaled_sum;
            scaled_h += r * other.scaled_h;
            scaled_h2 += r * other.scaled_h2;
        } else {
            const double r = std::exp(max_exponent - other.max_exponent);
            scaled_sum = scaled_sum * r + other.scaled_sum;
            scaled_h = scaled_h * r + other.scaled_h;
            scaled_h2 = scaled_h2 * r + other.scaled_h2;
            max_exponent = other.max_exponent;
        }
    }

    ThermoPoint finish(int n) const {
        ThermoPoint p;
        p.n = n;
        p.beta = beta;
        p.log_z = max_exponent + std::log(scaled_sum);
        p.mean_h = scaled_h / scaled_sum;
        p.mean_h2 = scaled_h2 / scaled_sum;
        p.entropy = p.log_z + beta * p.mean_h;
        p.free_energy_density = p.log_z / n;
        return p;
    }
};

// Ground-state tracker. Candidates within the guard band are re-evaluated
// with the canonical direct sum, so min_energy and ties are exact: sigma and
// -sigma produce bit-identical sums.
struct MinTracker {
    double min_energy = kInf;
    std::uint64_t argmin_index = 0;
    std::uint64_t degeneracy = 0;

    void consider_exact(double exact, std::uint64_t index) {
        if (exact < min_energy) {
            min_energy = exact;
            argmin_index = index;
            degeneracy = 1;
        } else if (exact == min_energy) {
            ++degeneracy;
            if (index < argmin_index) argmin_index = index;
        }
    }

    void merge(const MinTracker& other) {
        if (other.degeneracy == 0) return;
        if (other.min_energy < min_energy) {
            *this = other;
        } else if (other.min_energy == min_energy) {
            degeneracy += other.degeneracy;
            if (other.argmin_index < argmin_index) argmin_index = other.argmin_index;
        }
    }
};

struct SweepAccumulators {
    std::vector<BetaAccumulator> betas;
    MinTracker minimum;

    explicit SweepAccumulators(const std::vector<InverseTemperature>& bs) {
        betas.reserve(bs.size());
        for (const auto& b : bs) betas.push_back(BetaAccumulator{.beta = b.value});
    }

    void merge(const SweepAccumulators& other) {
        for (std::size_t i = 0; i < betas.size(); ++i) betas[i].merge(other.betas[i]);
        minimum.merge(other.minimum);
    }
};

// Gray-code chain over the low `low_bits` sites with the top sites pinned to
// `top_pattern`. Each step flips exactly one spin (the ruler sequence), so the
// energy update is a single O(n) row scan.
template <typename Visit>
void gray_sweep(const CouplingMatrix& couplings, const std::vector<double>& dense, int low_bits,
                std::uint64_t top_pattern, Visit&& visit) {
    const int n = couplings.n;
    const double inv_sqrt_n = n > 1 ? 1.0 / std::sqrt(static_cast<double>(n)) : 0.0;

    std::vector<std::int8_t> spins(static_cast<std::size_t>(n), -1);
    std::vector<double> spins_d(static_cast<std::size_t>(n), -1.0);
    for (int b = low_bits; b < n; ++b) {
        if ((top_pattern >> (b - low_bits)) & 1) {
            spins[static_cast<std::size_t>(b)] = 1;
            spins_d[static_cast<std::size_t>(b)] = 1.0;
        }
    }
    std::uint64_t index = top_pattern << low_bits;

    double e = detail::energy_over_spins(couplings, spins.data());
    visit(index, e, spins.data());

    const std::uint64_t steps = std::uint64_t{1} << low_bits;
    for (std::uint64_t t = 1; t < steps; ++t) {
        const int site = std::countr_zero(t);
        const double* row = dense.data() + static_cast<std::size_t>(site) * n;
        double field = 0.0;
        for (int j = 0; j < n; ++j) field += row[j] * spins_d[static_cast<std::size_t>(j)];
        e += 2.0 * spins_d[static_cast<std::size_t>(site)] * field * inv_sqrt_n;

        spins[static_cast<std::size_t>(site)] = -spins[static_cast<std::size_t>(site)];
        spins_d[static_cast<std::size_t>(site)] = -spins_d[static_cast<std::size_t>(site)];
        index ^= std::uint64_t{1} << site;

        if ((t & kDriftCheckMask) == 0) {
            const double exact = detail::energy_over_spins(couplings, spins.data());
            if (std::abs(e - exact) > kDriftAbort) {
                throw EnumerationDriftError(
                    "incremental energy drifted by " + std::to_string(std::abs(e - exact)) +
                    " at step " + std::to_string(t) + " (n=" + std::to_string(n) + ")");
            }
            e = exact;
        }
        visit(index, e, spins.data());
    }
}

void check_enumeration_cap(int n, const char* op) {
    if (n > kMaxEnumerationSites) {
        throw ResourceLimitError(std::string(op) + ": n=" + std::to_string(n) + " exceeds the " +
                                 std::to_string(kMaxEnumerationSites) +
                                 "-site cap (2^n configurations to visit)");
    }
}

void check_distribution_cap(int n, const char* op) {
    if (n > kMaxDistributionSites) {
        throw ResourceLimitError(std::string(op) + ": n=" + std::to_string(n) + " exceeds the " +
                                 std::to_string(kMaxDistributionSites) +
                                 "-site cap (materializes 2^n values)");
    }
}

void check_betas(const std::vector<InverseTemperature>& betas) {
    if (betas.empty()) throw std::invalid_argument("at least one inverse temperature is required");
}

EnumerationResult run_partitions(const CouplingMatrix& couplings,
                                 const std::vector<InverseTemperature>& betas, int top_bits,
                                 int workers) {
    const int n = couplings.n;
    const int low_bits = n - top_bits;
    const int partitions = 1 << top_bits;
    const auto dense = detail::dense_couplings(couplings);

    std::vector<SweepAccumulators> slots(static_cast<std::size_t>(partitions),
                                         SweepAccumulators(betas));
    parallel_for(partitions, workers, [&](int p) {
        auto& acc = slots[static_cast<std::size_t>(p)];
        gray_sweep(couplings, dense, low_bits, static_cast<std::uint64_t>(p),
                   [&](std::uint64_t index, double e, const std::int8_t* spins) {
                       for (auto& b : acc.betas) b.add(e);
                       if (e < acc.minimum.min_energy + kMinGuard) {
                           acc.minimum.consider_exact(detail::energy_over_spins(couplings, spins),
                                                      index);
                       }
                   });
    });

    SweepAccumulators merged = slots[0];
    for (int p = 1; p < partitions; ++p) merged.merge(slots[static_cast<std::size_t>(p)]);

    EnumerationResult result;
    result.points.reserve(betas.size());
    for (const auto& acc : merged.betas) result.points.push_back(acc.finish(n));
    result.ground_state.min_energy = merged.minimum.min_energy;
    result.ground_state.argmin_index = merged.minimum.argmin_index;
    result.ground_state.degeneracy = merged.minimum.degeneracy;
    result.ground_state.energy_density = merged.minimum.min_energy / n;
    return result;
}

} // namespace

EnumerationResult enumerate_observables(const CouplingMatrix& couplings,
                                        const std::vector<InverseTemperature>& betas) {
    check_enumeration_cap(couplings.n, "enumerate_observables");
    check_betas(betas);
    return run_partitions(couplings, betas, 0, 1);
}

EnumerationResult enumerate_observables_partitioned(const CouplingMatrix& couplings,
                                                    const std::vector<InverseTemperature>& betas,
                                                    int top_bits, int workers) {
    check_enumeration_cap(couplings.n, "enumerate_observables_partitioned");
    check_betas(betas);
    if (top_bits < 0 || top_bits >= couplings.n) {
        throw std::invalid_argument("top_bits must lie in [0, n)");
    }
    return run_partitions(couplings, betas, top_bits, workers);
}

std::vector<double> enumerate_energies(const CouplingMatrix& couplings) {
    check_distribution_cap(couplings.n, "enumerate_energies");
    const auto dense = detail::dense_couplings(couplings);
    std::vector<double> energies(std::size_t{1} << couplings.n);
    gray_sweep(couplings, dense, couplings.n, 0,
               [&](std::uint64_t index, double e, const std::int8_t*) { energies[index] = e; });
    return energies;
}

GibbsDistribution gibbs_distribution(const CouplingMatrix& couplings, InverseTemperature beta) {
    check_distribution_cap(couplings.n, "gibbs_distribution");
    const auto energies = enumerate_energies(couplings);

    double max_x = -kInf;
    for (double e : energies) max_x = std::max(max_x, -beta.value * e);
    KahanSum z;
    GibbsDistribution dist;
    dist.n = couplings.n;
    dist.beta = beta.value;
    dist.probabilities.resize(energies.size());
    for (std::size_t i = 0; i < energies.size(); ++i) {
        const double w = std::exp(-beta.value * energies[i] - max_x);
        dist.probabilities[i] = w;
        z.add(w);
    }
    const double norm = z.value();
    for (auto& p : dist.probabilities) p /= norm;
    return dist;
}

namespace {

double log_partition(const std::vector<double>& energies, double beta) {
    double max_x = -kInf;
    for (double e : energies) max_x = std::max(max_x, -beta * e);
    KahanSum s;
    for (double e : energies) s.add(std::exp(-beta * e - max_x));
    return max_x + std::log(s.value());
}

} // namespace

double relative_entropy(const CouplingMatrix& couplings, InverseTemperature beta2,
                        InverseTemperature beta1) {
    check_distribution_cap(couplings.n, "relative_entropy");
    const auto energies = enumerate_energies(couplings);
    const double log_z1 = log_partition(energies, beta1.value);
    const double log_z2 = log_partition(energies, beta2.value);

    // sum_sigma mu_2 [log mu_2 - log mu_1], all in log space.
    KahanSum kl;
    for (double e : energies) {
        const double p2 = std::exp(-beta2.value * e - log_z2);
        kl.add(p2 * ((beta1.value - beta2.value) * e + log_z1 - log_z2));
    }
    return kl.value();
}

double relative_entropy_uniform(const CouplingMatrix& couplings, InverseTemperature beta) {
    check_distribution_cap(couplings.n, "relative_entropy_uniform");
    const auto energies = enumerate_energies(couplings);
    const double log_z = log_partition(energies, beta.value);
    const double n_log2 = couplings.n * std::log(2.0);

    KahanSum sum;
    for (double e : energies) {
        const double log_p = -beta.value * e - log_z;
        sum.add(std::exp(log_p) * (log_p + n_log2));
    }
    return sum.value();
}

double functional_equation_residual(const CouplingMatrix& couplings, InverseTemperature beta,
                                    InverseTemperature beta1) {
    check_distribution_cap(couplings.n, "functional_equation_residual");
    const auto energies = enumerate_energies(couplings);
    const double log_zb = log_partition(energies, beta.value);
    const double log_z1 = log_partition(energies, beta1.value);
    const double ratio = beta.value / beta1.value;

    double worst = 0.0;
    for (double e : energies) {
        const double lhs = -beta.value * e - log_zb;
        const double rhs = ratio * (-beta1.value * e - log_z1) + ratio * log_z1 - log_zb;
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

double alpha_n(const CouplingMatrix& couplings, InverseTemperature beta,
               InverseTemperature beta1) {
    check_enumeration_cap(couplings.n, "alpha_n");
    const auto result = enumerate_observables(couplings, {beta1, beta});
    const double n = couplings.n;
    return (beta.value / beta1.value) * result.points[0].log_z / n - result.points[1].log_z / n;
}

double cross_entropy_term(const CouplingMatrix& couplings, InverseTemperature beta_star,
                          InverseTemperature beta1) {
    check_distribution_cap(couplings.n, "cross_entropy_term");
    const auto energies = enumerate_energies(couplings);
    const double log_z1 = log_partition(energies, beta1.value);
    const double log_zs = log_partition(energies, beta_star.value);

    KahanSum sum;
    for (double e : energies) {
        const double p_star = std::exp(-beta_star.value * e - log_zs);
        sum.add(p_star * (-beta1.value * e - log_z1));
    }
    return sum.value() / couplings.n;
}

} // namespace skglass
