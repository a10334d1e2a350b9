#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "skglass/ensemble.hpp"
#include "skglass/model.hpp"

using namespace skglass;

namespace {

EnsembleConfig basic_config(int n, std::vector<double> betas, int samples,
                            std::uint64_t seed = 1) {
    EnsembleConfig cfg;
    cfg.n = n;
    for (double b : betas) cfg.betas.emplace_back(b);
    cfg.sample_count = samples;
    cfg.master_seed = seed;
    cfg.worker_count = 4;
    return cfg;
}

} // namespace

TEST_CASE("single site is exactly log 2 with zero error") {
    const auto stats = quenched_free_energy(basic_config(1, {0.7, 2.0}, 16));
    for (const auto& st : stats) {
        CHECK(st.mean == doctest::Approx(std::log(2.0)).epsilon(1e-15));
        CHECK(st.std_error == 0.0);
        CHECK(st.sample_count == 16);
    }
}

TEST_CASE("results are bit-identical across worker counts") {
    auto cfg = basic_config(8, {0.5, 1.0, 2.8}, 64);
    cfg.worker_count = 1;
    const auto serial = ensemble_observables(cfg);
    cfg.worker_count = 7;
    const auto threaded = ensemble_observables(cfg);
    for (std::size_t b = 0; b < cfg.betas.size(); ++b) {
        CHECK(serial.f[b].mean == threaded.f[b].mean);
        CHECK(serial.f[b].std_error == threaded.f[b].std_error);
        CHECK(serial.s[b].mean == threaded.s[b].mean);
        CHECK(serial.u[b].mean == threaded.u[b].mean);
    }
    CHECK(serial.ground_state_density.mean == threaded.ground_state_density.mean);
    CHECK(serial.samples.f == threaded.samples.f);
}

TEST_CASE("quenched stays below annealed (Jensen)") {
    const auto cfg = basic_config(8, {0.5}, 300);
    const auto quenched = quenched_free_energy(cfg);
    const double annealed = annealed_free_energy_exact(8, InverseTemperature(0.5));
    CHECK(quenched[0].mean <= annealed + 3.0 * quenched[0].std_error);

    const auto empirical = annealed_free_energy_empirical(cfg);
    const double combined =
        3.0 * std::hypot(quenched[0].std_error, empirical[0].std_error);
    CHECK(quenched[0].mean <= empirical[0].value + combined);
}

TEST_CASE("annealed closed form") {
    CHECK(annealed_free_energy_exact(1, InverseTemperature(3.0)) == std::log(2.0));
    CHECK(annealed_free_energy_exact(5, InverseTemperature(1.0)) ==
          doctest::Approx(std::log(2.0) + 0.2).epsilon(1e-15));
    CHECK(annealed_free_energy_exact(100000, InverseTemperature(1.0)) ==
          doctest::Approx(std::log(2.0) + 0.25).epsilon(1e-4));
    CHECK_THROWS_AS(annealed_free_energy_exact(0, InverseTemperature(1.0)),
                    std::invalid_argument);
}

TEST_CASE("empirical annealed estimate brackets the formula at high temperature") {
    const auto cfg = basic_config(8, {0.5}, 20000);
    const auto stats = annealed_free_energy_empirical(cfg);
    const double exact = annealed_free_energy_exact(8, InverseTemperature(0.5));
    CHECK(exact == doctest::Approx(0.747834680559945309).epsilon(1e-15));
    CHECK(std::abs(stats[0].value - exact) <= 3.0 * stats[0].std_error);
    CHECK_FALSE(stats[0].heavy_tail);
}

TEST_CASE("single-sample annealed estimate degenerates cleanly") {
    const auto stats = annealed_free_energy_empirical(basic_config(4, {0.5}, 1));
    CHECK(stats[0].std_error == 0.0);
    CHECK(stats[0].top_weight == 1.0);
    CHECK(stats[0].heavy_tail);
}

TEST_CASE("low-temperature annealed averages are flagged heavy-tailed") {
    // Measured top-sample weights at n=8 with 10^3 samples: ~0.09 at beta=2,
    // ~0.30 at beta=3, ~0.67 at beta=6. Dominance sets in well above beta=2.
    const auto moderate = annealed_free_energy_empirical(basic_config(8, {2.0}, 1000));
    CHECK_FALSE(moderate[0].heavy_tail);
    CHECK(moderate[0].top_weight < 0.2);

    const auto frozen = annealed_free_energy_empirical(basic_config(8, {6.0}, 1000));
    CHECK(frozen[0].heavy_tail);
    CHECK(frozen[0].top_weight > 0.5);
}

TEST_CASE("quenched entropy starts at log 2") {
    const auto stats = quenched_entropy(basic_config(6, {1e-12}, 32));
    CHECK(stats[0].mean == doctest::Approx(std::log(2.0)).epsilon(1e-8));
    CHECK(stats[0].std_error <= 1e-8);
}

TEST_CASE("ensemble entropy means are non-increasing in beta") {
    const auto result =
        ensemble_observables(basic_config(12, {0.5, 1.0, 1.5, 2.0, 3.0, 4.0}, 40));
    for (std::size_t b = 1; b < result.s.size(); ++b) {
        // Shared disorder samples make per-sample monotonicity carry over to
        // the means exactly.
        CHECK(result.s[b].mean <= result.s[b - 1].mean + 1e-12);
    }
}

TEST_CASE("ground-state density at n=16 sits in the expected bracket") {
    const auto result = ensemble_observables(basic_config(16, {1.0}, 100));
    CHECK(result.ground_state_density.mean > -0.90);
    CHECK(result.ground_state_density.mean < -0.60);
}

TEST_CASE("variance of the free energy shrinks with n") {
    const auto report =
        self_averaging_diagnostic({4, 8, 16}, InverseTemperature(0.5), 2000, 3, 4);
    REQUIRE(report.rows.size() == 3);
    CHECK(report.rows[0].variance > report.rows[1].variance);
    CHECK(report.rows[1].variance > report.rows[2].variance);
    CHECK(report.power_law_exponent < 0.0);
    for (const auto& row : report.rows) {
        CHECK(row.variance > 0.0);
        CHECK(row.variance_std_error > 0.0);
    }
}

TEST_CASE("single site has zero free-energy variance") {
    const auto report = self_averaging_diagnostic({1}, InverseTemperature(1.0), 50, 1, 1);
    CHECK(report.rows[0].variance == 0.0);
}

TEST_CASE("sample retention policy") {
    auto cfg = basic_config(4, {1.0}, 10);
    CHECK(ensemble_observables(cfg).samples_retained);

    cfg.retain_samples = false;
    const auto result = ensemble_observables(cfg);
    CHECK_FALSE(result.samples_retained);
    CHECK(result.samples.f.empty());
}

TEST_CASE("config validation") {
    CHECK_THROWS_AS(quenched_free_energy(basic_config(4, {1.0}, 0)), std::invalid_argument);
    CHECK_THROWS_AS(quenched_free_energy(basic_config(4, {}, 10)), std::invalid_argument);
    CHECK_THROWS_AS(quenched_free_energy(basic_config(0, {1.0}, 10)), std::invalid_argument);
    CHECK_THROWS_AS(self_averaging_diagnostic({}, InverseTemperature(1.0), 10, 1, 1),
                    std::invalid_argument);
}
