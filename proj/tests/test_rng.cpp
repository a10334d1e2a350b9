#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "skglass/rng.hpp"

using namespace skglass;

namespace {

// Independent restatement of the pinned mix function.
std::uint64_t reference_splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace

TEST_CASE("splitmix64 stream matches the reference recurrence") {
    std::uint64_t state = 0xdeadbeefULL;
    SplitMix64 gen(0xdeadbeefULL);
    for (int i = 0; i < 100; ++i) {
        CHECK(gen.next() == reference_splitmix64(state));
    }
}

TEST_CASE("derive_seed is one splitmix64 step of master + index") {
    std::uint64_t state = 42 + 7;
    CHECK(derive_seed(42, 7) == reference_splitmix64(state));
    CHECK(derive_seed(42, 7) == derive_seed(42, 7));
    CHECK(derive_seed(42, 7) != derive_seed(42, 8));
    CHECK(derive_seed(42, 7) != derive_seed(43, 7));
}

TEST_CASE("normal stream is pinned to Box-Muller over splitmix64 bits") {
    const std::uint64_t seed = 991;
    SplitMix64 raw(seed);
    NormalStream normals(seed);

    for (int pair = 0; pair < 8; ++pair) {
        const double u1 = (static_cast<double>(raw.next() >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = static_cast<double>(raw.next() >> 11) * 0x1.0p-53;
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        CHECK(normals.next() == radius * std::cos(angle));
        CHECK(normals.next() == radius * std::sin(angle));
    }
}

TEST_CASE("normal stream moments are sane") {
    NormalStream normals(5);
    const int count = 200000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < count; ++i) {
        const double x = normals.next();
        CHECK(std::isfinite(x));
        sum += x;
        sum2 += x * x;
    }
    const double mean = sum / count;
    const double var = sum2 / count - mean * mean;
    CHECK(std::abs(mean) < 0.02);
    CHECK(std::abs(var - 1.0) < 0.03);
}

TEST_CASE("uniform stream ranges") {
    UniformStream u(17);
    for (int i = 0; i < 10000; ++i) {
        const double x = u.next_unit();
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
        const std::uint64_t k = u.next_index(13);
        CHECK(k < 13);
    }
}

TEST_CASE("unit interval conversion hits the endpoints correctly") {
    CHECK(to_unit_interval(0) == 0.0);
    CHECK(to_unit_interval(~std::uint64_t{0}) < 1.0);
}
