#include "skglass/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "skglass/rng.hpp"

namespace skglass {

InverseTemperature::InverseTemperature(double beta) : value(beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw std::invalid_argument("inverse temperature must be finite and > 0, got " +
                                    std::to_string(beta));
    }
}

double CouplingMatrix::at(int i, int j) const {
    if (i == j || i < 0 || j < 0 || i >= n || j >= n) {
        throw std::invalid_argument("coupling index (" + std::to_string(i) + ", " +
                                    std::to_string(j) + ") invalid for n = " + std::to_string(n));
    }
    if (i > j) std::swap(i, j);
    // row-major upper triangle: (i,j) -> i*(2n-i-1)/2 + (j-i-1)
    const std::size_t row_offset =
        static_cast<std::size_t>(i) * (2 * static_cast<std::size_t>(n) - i - 1) / 2;
    return couplings[row_offset + static_cast<std::size_t>(j - i - 1)];
}

CouplingMatrix sample_couplings(int n, std::uint64_t seed) {
    if (n < 1) {
        throw std::invalid_argument("site count must be >= 1, got " + std::to_string(n));
    }
    CouplingMatrix result;
    result.n = n;
    result.seed = seed;
    const std::size_t pairs = static_cast<std::size_t>(n) * (n - 1) / 2;
    result.couplings.reserve(pairs);
    NormalStream normals(seed);
    for (std::size_t k = 0; k < pairs; ++k) {
        result.couplings.push_back(normals.next());
    }
    return result;
}

SpinConfiguration SpinConfiguration::from_index(int n, std::uint64_t index) {
    if (n < 1 || n > 63) {
        throw std::invalid_argument("index representation requires 1 <= n <= 63");
    }
    if (n < 64 && index >> n != 0) {
        throw std::invalid_argument("configuration index out of range for n sites");
    }
    SpinConfiguration config;
    config.n = n;
    config.index = index;
    config.spins.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        config.spins[static_cast<std::size_t>(i)] = (index >> i) & 1 ? 1 : -1;
    }
    return config;
}

SpinConfiguration SpinConfiguration::from_spins(std::vector<std::int8_t> spins) {
    if (spins.empty()) {
        throw std::invalid_argument("spin configuration must have at least one site");
    }
    SpinConfiguration config;
    config.n = static_cast<int>(spins.size());
    config.spins = std::move(spins);
    config.index = 0;
    for (int i = 0; i < config.n; ++i) {
        const auto s = config.spins[static_cast<std::size_t>(i)];
        if (s != 1 && s != -1) {
            throw std::invalid_argument("spins must be +1 or -1");
        }
        if (i < 64 && s == 1) config.index |= std::uint64_t{1} << i;
    }
    return config;
}

namespace detail {

double energy_over_spins(const CouplingMatrix& couplings, const std::int8_t* spins) {
    const int n = couplings.n;
    double sum = 0.0;
    std::size_t k = 0;
    for (int i = 0; i < n; ++i) {
        const double si = spins[i];
        for (int j = i + 1; j < n; ++j, ++k) {
            sum += couplings.couplings[k] * si * spins[j];
        }
    }
    return n > 1 ? -sum / std::sqrt(static_cast<double>(n)) : 0.0;
}

std::vector<double> dense_couplings(const CouplingMatrix& couplings) {
    const std::size_t n = static_cast<std::size_t>(couplings.n);
    std::vector<double> dense(n * n, 0.0);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j, ++k) {
            dense[i * n + j] = couplings.couplings[k];
            dense[j * n + i] = couplings.couplings[k];
        }
    }
    return dense;
}

} // namespace detail

double energy(const SpinConfiguration& config, const CouplingMatrix& couplings) {
    if (config.n != couplings.n) {
        throw std::invalid_argument("configuration has " + std::to_string(config.n) +
                                    " sites but couplings have " + std::to_string(couplings.n));
    }
    return detail::energy_over_spins(couplings, config.spins.data());
}

double delta_energy(const SpinConfiguration& config, const CouplingMatrix& couplings, int site) {
    if (config.n != couplings.n) {
        throw std::invalid_argument("configuration/couplings dimension mismatch");
    }
    const int n = config.n;
    if (site < 0 || site >= n) {
        throw std::invalid_argument("site " + std::to_string(site) + " out of range [0, " +
                                    std::to_string(n) + ")");
    }
    if (n == 1) return 0.0;
    double field = 0.0;
    for (int j = 0; j < n; ++j) {
        if (j == site) continue;
        field += couplings.at(site, j) * config.spins[static_cast<std::size_t>(j)];
    }
    return 2.0 * config.spins[static_cast<std::size_t>(site)] * field /
           std::sqrt(static_cast<double>(n));
}

} // namespace skglass
