#pragma once

#include <cstdint>
#include <vector>

namespace skglass {

/// Dimensionless inverse temperature; strictly positive and finite.
/// beta_1 = 1 fixes the temperature scale throughout.
struct InverseTemperature {
    double value;

    explicit InverseTemperature(double beta);
};

/// Upper-triangular Gaussian couplings J_ij (i < j, row-major) for n sites,
/// together with the seed that generated them. Immutable after construction;
/// regenerating from (n, seed) reproduces the sequence bit-for-bit.
struct CouplingMatrix {
    int n = 0;
    std::vector<double> couplings; // n(n-1)/2 entries, empty for n = 1
    std::uint64_t seed = 0;

    /// Symmetric access J_ij = J_ji for i != j.
    double at(int i, int j) const;

    std::size_t pair_count() const { return couplings.size(); }
};

/// Draw the n(n-1)/2 standard-normal couplings for a given seed.
CouplingMatrix sample_couplings(int n, std::uint64_t seed);

/// n spins in {-1,+1}; `index` is the n-bit integer whose bit i is set
/// iff spin i is +1.
struct SpinConfiguration {
    int n = 0;
    std::vector<std::int8_t> spins;
    std::uint64_t index = 0;

    static SpinConfiguration from_index(int n, std::uint64_t index);
    static SpinConfiguration from_spins(std::vector<std::int8_t> spins);
};

/// H_n(sigma) = -(1/sqrt(n)) sum_{i<j} J_ij sigma_i sigma_j, O(n^2).
double energy(const SpinConfiguration& config, const CouplingMatrix& couplings);

/// Energy change from flipping one spin, O(n):
///   H(flip k) - H = (2 sigma_k / sqrt(n)) sum_{j != k} J_kj sigma_j.
double delta_energy(const SpinConfiguration& config, const CouplingMatrix& couplings, int site);

namespace detail {

// Canonical direct sum over the upper triangle in row-major order. Every
// exact energy in the project goes through this one function so that
// symmetry-related configurations (sigma and -sigma have identical terms)
// tie bit-for-bit.
double energy_over_spins(const CouplingMatrix& couplings, const std::int8_t* spins);

// Dense symmetric copy (zero diagonal) for contiguous O(n) row scans in
// enumeration and Monte Carlo inner loops.
std::vector<double> dense_couplings(const CouplingMatrix& couplings);

} // namespace detail

} // namespace skglass
