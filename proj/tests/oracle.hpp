#pragma once

// Brute-force reference for tiny systems. Everything is evaluated from the
// definitions in long double with no code shared with the library engines:
// entropy comes from -sum p log p, not from the log Z + beta <H> identity.

#include <cmath>
#include <cstdint>
#include <vector>

#include "skglass/model.hpp"

namespace oracle {

inline double spin(std::uint64_t index, int site) {
    return (index >> site) & 1 ? 1.0 : -1.0;
}

inline double energy(const skglass::CouplingMatrix& couplings, std::uint64_t index) {
    long double sum = 0.0L;
    for (int i = 0; i < couplings.n; ++i) {
        for (int j = i + 1; j < couplings.n; ++j) {
            sum += static_cast<long double>(couplings.at(i, j)) * spin(index, i) * spin(index, j);
        }
    }
    return static_cast<double>(-sum / std::sqrt(static_cast<long double>(couplings.n)));
}

struct Thermo {
    double log_z = 0.0;
    double mean_h = 0.0;
    double entropy = 0.0;
    std::vector<double> probabilities;
    double min_energy = 0.0;
    std::uint64_t argmin_index = 0;
    std::uint64_t degeneracy = 0;
};

inline Thermo thermo(const skglass::CouplingMatrix& couplings, double beta) {
    const std::uint64_t states = std::uint64_t{1} << couplings.n;
    std::vector<long double> energies(states);
    long double max_x = -1e300L;
    for (std::uint64_t idx = 0; idx < states; ++idx) {
        energies[idx] = energy(couplings, idx);
        max_x = std::max(max_x, -static_cast<long double>(beta) * energies[idx]);
    }

    long double z = 0.0L;
    for (std::uint64_t idx = 0; idx < states; ++idx) {
        z += std::exp(-static_cast<long double>(beta) * energies[idx] - max_x);
    }
    const long double log_z = max_x + std::log(z);

    Thermo t;
    t.log_z = static_cast<double>(log_z);
    t.probabilities.resize(states);
    long double mean_h = 0.0L, plogp = 0.0L;
    for (std::uint64_t idx = 0; idx < states; ++idx) {
        const long double p = std::exp(-static_cast<long double>(beta) * energies[idx] - log_z);
        t.probabilities[idx] = static_cast<double>(p);
        mean_h += p * energies[idx];
        plogp -= p * std::log(p);
    }
    t.mean_h = static_cast<double>(mean_h);
    t.entropy = static_cast<double>(plogp);

    t.min_energy = static_cast<double>(energies[0]);
    t.degeneracy = 1;
    for (std::uint64_t idx = 1; idx < states; ++idx) {
        const double e = static_cast<double>(energies[idx]);
        if (e < t.min_energy) {
            t.min_energy = e;
            t.argmin_index = idx;
            t.degeneracy = 1;
        } else if (e == t.min_energy) {
            ++t.degeneracy;
        }
    }
    return t;
}

} // namespace oracle
