#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "lfss/errors.hpp"
#include "lfss/philox.hpp"
#include "lfss/stable_rng.hpp"
#include "lfss/stats.hpp"

using namespace lfss;

namespace {

std::vector<double> draws(const StableParams& p, std::uint64_t stream, std::size_t n) {
    std::vector<double> x(n);
    sample_stable_block(p, stream, 0, x);
    return x;
}

}  // namespace

TEST_SUITE("stable_rng") {
    TEST_CASE("philox4x32-10 known answers") {
        using C = Philox4x32::Counter;
        CHECK(Philox4x32::apply(C{0, 0, 0, 0}, {0, 0}) == C{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
        CHECK(Philox4x32::apply(C{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}) ==
              C{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
        CHECK(Philox4x32::apply(C{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
              C{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
    }

    TEST_CASE("derived streams differ and are stable") {
        CHECK(derive_stream(1, 0) != derive_stream(1, 1));
        CHECK(derive_stream(1, 0) != derive_stream(2, 0));
        CHECK(derive_stream(7, 3) == derive_stream(7, 3));
    }

    TEST_CASE("uniform pairs stay inside the open unit interval") {
        for (std::uint64_t c = 0; c < 100000; ++c) {
            const auto u = uniform_pair({11, c, 0});
            REQUIRE(u.u1 > 0.0);
            REQUIRE(u.u1 < 1.0);
            REQUIRE(u.u2 > 0.0);
            REQUIRE(u.u2 < 1.0);
        }
    }

    TEST_CASE("draws are pure in parameters and key") {
        const StableParams p{1.5, 1.0, 0.3};
        const SeedKey k{42, 17, 0};
        CHECK(sample_stable(p, k) == sample_stable(p, k));
        CHECK(sample_stable(p, k) != sample_stable(p, SeedKey{42, 18, 0}));
        std::vector<double> block(8);
        sample_stable_block(p, 42, 10, block);
        CHECK(block[7] == sample_stable(p, SeedKey{42, 17, 0}));
    }

    TEST_CASE("zero scale is the point mass at zero") {
        for (std::uint64_t c = 0; c < 100; ++c) CHECK(sample_stable({1.5, 0.0, 0.0}, {3, c, 0}) == 0.0);
    }

    TEST_CASE("parameter domain") {
        CHECK_THROWS_AS(StableParams({0.0, 1.0, 0.0}).validate(), Error);
        CHECK_THROWS_AS(StableParams({2.1, 1.0, 0.0}).validate(), Error);
        CHECK_THROWS_AS(StableParams({1.5, -1.0, 0.0}).validate(), Error);
        CHECK_THROWS_AS(StableParams({1.5, 1.0, 1.5}).validate(), Error);
        CHECK_THROWS_AS(StableParams({1.0, 1.0, 0.5}).validate(), Error);
        CHECK_NOTHROW(StableParams({1.0, 1.0, 0.0}).validate());
    }

    TEST_CASE("gaussian corner has variance two") {
        const auto x = draws({2.0, 1.0, 0.0}, 5, 1000000);
        CHECK(variance(x) == doctest::Approx(2.0).epsilon(0.02));
    }

    TEST_CASE("tail slope at scale two") {
        const auto x = draws({1.5, 2.0, 0.0}, 6, 1000000);
        CHECK(tail_slope(x, 20.0, 200.0) == doctest::Approx(-1.5).epsilon(0.1 / 1.5));
    }

    TEST_CASE("tail index estimate") {
        const auto heavy = draws({1.2, 1.0, 0.0}, 7, 1000000);
        CHECK(estimate_tail_index(heavy, 0.95) == doctest::Approx(1.2).epsilon(0.1 / 1.2));
        const auto gauss = draws({2.0, 1.0, 0.0}, 8, 100000);
        CHECK(estimate_tail_index(gauss, 0.95) >= 1.9);
        const std::vector<double> constant(100000, 1.0);
        CHECK_THROWS_AS(estimate_tail_index(constant, 0.95), Error);
    }

    TEST_CASE("scale estimate") {
        CHECK(estimate_scale(draws({1.5, 3.0, 0.0}, 9, 100000), 1.5) == doctest::Approx(3.0).epsilon(0.05));
        CHECK(estimate_scale(draws({2.0, 1.0, 0.0}, 10, 100000), 2.0) == doctest::Approx(1.0).epsilon(0.05));
        CHECK(estimate_scale(std::vector<double>(1000, 0.0), 1.5) == 0.0);
        CHECK_THROWS_AS(estimate_scale(std::vector<double>(1000, 0.0), 2.5), Error);
        CHECK_THROWS_AS(estimate_scale(std::vector<double>(10, 0.0), 1.5), Error);
    }

    TEST_CASE("symmetric law quartiles") {
        // Gaussian with variance 2: quartile sqrt(2) * 0.6744897501960817
        CHECK(symmetric_stable_quartile(2.0) == doctest::Approx(std::sqrt(2.0) * 0.6744897501960817).epsilon(1e-8));
        // Cauchy: quartile 1
        CHECK(symmetric_stable_quartile(1.0) == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(symmetric_stable_cdf(0.0, 1.5) == doctest::Approx(0.5));
        CHECK(symmetric_stable_cdf(symmetric_stable_quartile(1.5), 1.5) == doctest::Approx(0.75).epsilon(1e-8));
    }
}
