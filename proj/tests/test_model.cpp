#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "oracle.hpp"
#include "skglass/model.hpp"
#include "skglass/rng.hpp"

using namespace skglass;

TEST_CASE("inverse temperature rejects non-physical values") {
    CHECK_NOTHROW(InverseTemperature(0.3));
    CHECK_THROWS_AS(InverseTemperature(0.0), std::invalid_argument);
    CHECK_THROWS_AS(InverseTemperature(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(InverseTemperature(std::nan("")), std::invalid_argument);
    CHECK_THROWS_AS(InverseTemperature(std::numeric_limits<double>::infinity()),
                    std::invalid_argument);
}

TEST_CASE("coupling matrix indexing is symmetric and row-major") {
    const auto couplings = sample_couplings(5, 11);
    CHECK(couplings.pair_count() == 10);
    CHECK(couplings.at(1, 3) == couplings.at(3, 1));
    // Row-major upper triangle: (0,1) first, (3,4) last.
    CHECK(couplings.at(0, 1) == couplings.couplings.front());
    CHECK(couplings.at(3, 4) == couplings.couplings.back());
    CHECK_THROWS_AS(couplings.at(2, 2), std::invalid_argument);
    CHECK_THROWS_AS(couplings.at(0, 5), std::invalid_argument);
}

TEST_CASE("coupling draws are reproducible and follow the seed schedule") {
    const auto a = sample_couplings(8, 123);
    const auto b = sample_couplings(8, 123);
    CHECK(a.couplings == b.couplings);

    // First coupling equals the first Box-Muller deviate of the stream.
    NormalStream stream(123);
    CHECK(a.couplings[0] == stream.next());

    CHECK_THROWS_AS(sample_couplings(0, 1), std::invalid_argument);
}

TEST_CASE("coupling draws have standard-normal moments") {
    const auto couplings = sample_couplings(300, 7); // 44850 draws
    double sum = 0.0, sum2 = 0.0;
    for (double j : couplings.couplings) {
        sum += j;
        sum2 += j * j;
    }
    const double m = sum / couplings.pair_count();
    const double var = sum2 / couplings.pair_count() - m * m;
    CHECK(std::abs(m) < 0.02);
    CHECK(std::abs(var - 1.0) < 0.03);
}

TEST_CASE("spin configurations round-trip through index form") {
    const auto config = SpinConfiguration::from_index(4, 0b1010);
    CHECK(config.spins == std::vector<std::int8_t>{-1, 1, -1, 1});
    const auto back = SpinConfiguration::from_spins(config.spins);
    CHECK(back.index == 0b1010);
    CHECK(back.n == 4);

    CHECK_THROWS_AS(SpinConfiguration::from_index(3, 8), std::invalid_argument);
    CHECK_THROWS_AS(SpinConfiguration::from_index(0, 0), std::invalid_argument);
    CHECK_THROWS_AS(SpinConfiguration::from_spins({1, 0, -1}), std::invalid_argument);
}

TEST_CASE("energy matches the brute-force definition on small systems") {
    for (int n : {1, 2, 3, 4}) {
        const auto couplings = sample_couplings(n, 50 + n);
        for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << n); ++idx) {
            const auto config = SpinConfiguration::from_index(n, idx);
            CHECK(energy(config, couplings) ==
                  doctest::Approx(oracle::energy(couplings, idx)).epsilon(1e-12));
        }
    }
}

TEST_CASE("single site has zero energy") {
    const auto couplings = sample_couplings(1, 3);
    CHECK(energy(SpinConfiguration::from_index(1, 0), couplings) == 0.0);
    CHECK(energy(SpinConfiguration::from_index(1, 1), couplings) == 0.0);
}

TEST_CASE("flip delta agrees with recomputing the energy") {
    const int n = 9;
    const auto couplings = sample_couplings(n, 77);
    const auto config = SpinConfiguration::from_index(n, 0b101100111);
    for (int site = 0; site < n; ++site) {
        auto flipped = config;
        flipped.spins[static_cast<std::size_t>(site)] *= -1;
        flipped.index ^= std::uint64_t{1} << site;
        const double direct = energy(flipped, couplings) - energy(config, couplings);
        CHECK(delta_energy(config, couplings, site) == doctest::Approx(direct).epsilon(1e-11));
    }
    CHECK_THROWS_AS(delta_energy(config, couplings, n), std::invalid_argument);
    CHECK_THROWS_AS(delta_energy(config, couplings, -1), std::invalid_argument);
}

TEST_CASE("global spin flip leaves the energy bitwise unchanged") {
    const int n = 12;
    const auto couplings = sample_couplings(n, 99);
    for (std::uint64_t idx : {std::uint64_t{0}, std::uint64_t{0xabc}, std::uint64_t{0xfff}}) {
        const auto config = SpinConfiguration::from_index(n, idx);
        const auto flipped = SpinConfiguration::from_index(n, ~idx & 0xfff);
        CHECK(energy(config, couplings) == energy(flipped, couplings));
    }
}

TEST_CASE("dense coupling copy mirrors the triangle") {
    const int n = 6;
    const auto couplings = sample_couplings(n, 13);
    const auto dense = detail::dense_couplings(couplings);
    for (int i = 0; i < n; ++i) {
        CHECK(dense[static_cast<std::size_t>(i) * n + i] == 0.0);
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            CHECK(dense[static_cast<std::size_t>(i) * n + j] == couplings.at(i, j));
        }
    }
}
