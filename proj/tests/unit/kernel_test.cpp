#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "lfss/errors.hpp"
#include "lfss/kernel.hpp"

using namespace lfss;

namespace {

// Smallest of the graph-dimension candidates over k, and the rho-dimension of the cube.
double graph_min_form(const std::vector<double>& H, int d) {
    double best = 0.0;
    for (double h : H) best += 1.0 / h;
    const std::size_t N = H.size();
    for (std::size_t k = 1; k <= N; ++k) {
        double s = 0.0;
        for (std::size_t l = 0; l < k; ++l) s += H[k - 1] / H[l];
        best = std::min(best, s + static_cast<double>(N - k) + (1.0 - H[k - 1]) * d);
    }
    return best;
}

}  // namespace

TEST_SUITE("kernel") {
    TEST_CASE("slice mass against high-precision quadrature") {
        // mpmath at 30 digits, tail beyond 1e12 added in leading order
        CHECK(slice_mass(0.8 - 1.0 / 1.5, 1.5) == doctest::Approx(1.05370272651823716).epsilon(1e-8));
        CHECK(slice_mass(0.9 - 1.0 / 1.5, 1.5) == doctest::Approx(1.60939493759248490).epsilon(1e-8));
        CHECK(slice_mass(0.2, 2.0) == doctest::Approx(0.838892971871843632).epsilon(1e-8));
        CHECK(slice_mass(0.6 - 1.0 / 1.8, 1.8) == doctest::Approx(0.937403637531263781).epsilon(1e-8));
        CHECK(slice_mass(0.8 - 1.0 / 1.8, 1.8) == doctest::Approx(1.00920440225661590).epsilon(1e-8));
    }

    TEST_CASE("normalizing constant") {
        CHECK(normalize_kappa({2.0, {0.5}}) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(normalize_kappa({1.5, {1.0 / 1.5}}) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(normalize_kappa({1.5, {1.0 / 1.5, 1.0 / 1.5}}) == doctest::Approx(1.0).epsilon(1e-12));
        const double k = normalize_kappa({1.5, {0.8, 0.9}});
        CHECK(k == doctest::Approx(std::pow(1.05370272651823716 * 1.60939493759248490, -1.0 / 1.5)).epsilon(1e-8));
    }

    TEST_CASE("kernel evaluation") {
        const auto spec = make_kernel_spec({1.5, {0.8, 0.9}});
        const std::vector<double> s{-0.3, 0.2};
        CHECK(kernel_h(std::vector<double>{0.0, 0.7}, s, spec) == 0.0);
        CHECK(kernel_h(std::vector<double>{0.5, 0.1}, s, spec) == 0.0);
        CHECK(kernel_h(std::vector<double>{0.5, 0.7}, s, spec) != 0.0);

        // boundary H = 1/alpha: evaluated as a formula outside the continuity regime
        KernelSpec bm;
        bm.hurst = {2.0, {0.5}};
        bm.kappa = normalize_kappa(bm.hurst);
        CHECK(bm.kappa == doctest::Approx(1.0));
        CHECK_THROWS_AS(make_kernel_spec(bm.hurst), Error);
        const std::vector<double> one{1.0};
        CHECK(kernel_h(one, std::vector<double>{0.3}, bm) == doctest::Approx(1.0));
        CHECK(kernel_h(one, std::vector<double>{0.0}, bm) == doctest::Approx(1.0));
        CHECK(kernel_h(one, std::vector<double>{1.0}, bm) == 0.0);
        CHECK(kernel_h(one, std::vector<double>{-0.3}, bm) == 0.0);
    }

    TEST_CASE("kernel factor far from the origin") {
        const double q = 0.8 - 1.0 / 1.5;
        const double s = -1e8;
        const double naive = q * std::pow(-s, q - 1.0);
        CHECK(kernel_factor(1.0, s, q) == doctest::Approx(naive).epsilon(1e-6));
    }

    TEST_CASE("cell average converges to the point value") {
        const double q = 0.13;
        CHECK(kernel_factor_cell_average(0.7, -0.5 - 1e-7, -0.5 + 1e-7, q) ==
              doctest::Approx(kernel_factor(0.7, -0.5, q)).epsilon(1e-6));
        // exact average of an affine piece
        CHECK(kernel_factor_cell_average(1.0, 0.0, 1.0, 0.0) == doctest::Approx(1.0));
    }

    TEST_CASE("slice norm scaling") {
        const double q = 0.8 - 1.0 / 1.5;
        const double I = slice_mass(q, 1.5);
        CHECK(slice_norm(1.0, q, 1.5) == doctest::Approx(std::pow(I, 1.0 / 1.5)));
        CHECK(slice_norm(2.0, q, 1.5) == doctest::Approx(std::pow(2.0, 0.8) * std::pow(I, 1.0 / 1.5)));
    }

    TEST_CASE("tail radius is monotone in the tolerance and the point") {
        const double q = 0.8 - 1.0 / 1.5;
        CHECK(required_tail_radius(1.0, q, 1.5, 1e-5) > required_tail_radius(1.0, q, 1.5, 1e-4));
        CHECK(required_tail_radius(2.0, q, 1.5, 1e-4) > required_tail_radius(1.0, q, 1.5, 1e-4));
    }

    TEST_CASE("increment scale") {
        const auto unit = make_kernel_spec({1.5, {0.8, 0.9}});
        CHECK(increment_scale({{0.0, 0.0}, {1.0, 1.0}}, unit) == doctest::Approx(1.0));
        const auto half = make_kernel_spec({1.9, {0.55, 0.55}});
        CHECK(increment_scale({{0.0, 0.0}, {0.25, 0.04}}, half) ==
              doctest::Approx(std::pow(0.25, 0.55) * std::pow(0.04, 0.55)));
        HurstVector h{1.5, {0.5, 0.5}};
        KernelSpec raw;
        raw.hurst = h;
        CHECK(increment_scale({{0.0, 0.0}, {0.25, 0.04}}, raw) == doctest::Approx(0.1));
        CHECK_THROWS_AS(increment_scale({{0.0, 0.3}, {1.0, 0.3}}, unit), Error);
    }

    TEST_CASE("rectangular increment") {
        CHECK(rectangular_increment({{3u, 5.0}, {2u, 2.0}, {1u, 1.0}, {0u, 0.0}}, 2) == 2.0);
        CHECK(rectangular_increment({{3u, 4.0}, {2u, 4.0}, {1u, 4.0}, {0u, 4.0}}, 2) == 0.0);
        CHECK(rectangular_increment({{1u, 3.5}, {0u, 1.25}}, 1) == 2.25);
        CHECK_THROWS_AS(rectangular_increment({{1u, 3.5}}, 1), Error);
    }

    TEST_CASE("rho metric") {
        const HurstVector h{1.5, {0.5, 0.5}};
        const std::vector<double> z{0.0, 0.0};
        CHECK(rho_metric(z, z, h) == 0.0);
        CHECK(rho_metric(z, std::vector<double>{1.0, 1.0}, h) == doctest::Approx(2.0));
        std::mt19937_64 gen(5);
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        for (int i = 0; i < 100; ++i) {
            const std::vector<double> s{u(gen), u(gen)};
            const std::vector<double> t{u(gen), u(gen)};
            CHECK(rho_metric(s, t, h) == rho_metric(t, s, h));
        }
    }

    TEST_CASE("hausdorff dimensions of worked cases") {
        const HurstVector h{1.5, {0.6, 0.8}};
        const auto d1 = hausdorff_dims(h, 1);
        CHECK(d1.range == 1.0);
        CHECK(d1.graph == doctest::Approx(2.4).epsilon(1e-15));
        const auto d3 = hausdorff_dims(h, 3);
        CHECK(d3.range == doctest::Approx(35.0 / 12.0).epsilon(1e-15));
        CHECK(d3.graph == doctest::Approx(35.0 / 12.0).epsilon(1e-15));
        CHECK(d3.rho_cube == doctest::Approx(35.0 / 12.0).epsilon(1e-15));
        const auto one = hausdorff_dims({2.0, {0.7}}, 1);
        CHECK(one.graph == doctest::Approx(1.3).epsilon(1e-15));
        CHECK(one.range == 1.0);
        CHECK_THROWS_AS(hausdorff_dims({1.5, {0.8, 0.6}}, 1), Error);
    }

    TEST_CASE("graph dimension is continuous across branches") {
        // sum_{l <= 1} 1 / H_l = d at H_1 = 0.5, d = 2
        for (double eps : {1e-6, 1e-9, 1e-11}) {
            const auto lo = hausdorff_dims({1.9, {0.5 - eps, 0.8}}, 2);
            const auto hi = hausdorff_dims({1.9, {0.5 + eps, 0.8}}, 2);
            CHECK(std::abs(lo.graph - hi.graph) < 1e-8 + 10.0 * eps);
        }
    }

    TEST_CASE("piecewise graph dimension equals the minimum form") {
        std::mt19937_64 gen(11);
        std::uniform_real_distribution<double> u(0.05, 0.99);
        for (int i = 0; i < 500; ++i) {
            const std::size_t N = 1 + static_cast<std::size_t>(i % 4);
            std::vector<double> H(N);
            for (auto& x : H) x = u(gen);
            std::sort(H.begin(), H.end());
            const int d = 1 + i % 5;
            CHECK(hausdorff_dims({2.0, H}, d).graph == doctest::Approx(graph_min_form(H, d)).epsilon(1e-12));
        }
    }
}
