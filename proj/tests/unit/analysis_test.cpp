#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "lfss/analysis.hpp"
#include "lfss/errors.hpp"
#include "lfss/stable_rng.hpp"

using namespace lfss;

namespace {

std::vector<double> sampled(std::size_t n, double (*f)(double)) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = f(static_cast<double>(i) / static_cast<double>(n - 1));
    return v;
}

// Weierstrass function with box dimension 2 - 0.5.
double weierstrass(double t) {
    double s = 0.0;
    for (int k = 0; k < 30; ++k) s += std::pow(2.0, -0.5 * k) * std::cos(std::pow(2.0, k) * 2.0 * std::numbers::pi * t);
    return s;
}

void cantor(std::vector<double>& out, double lo, double width, int depth) {
    if (depth == 0) {
        out.push_back(lo);
        return;
    }
    cantor(out, lo, width / 3.0, depth - 1);
    cantor(out, lo + 2.0 * width / 3.0, width / 3.0, depth - 1);
}

}  // namespace

TEST_SUITE("analysis") {
    TEST_CASE("check lines") {
        const auto ok = make_check("a", 1.05, 1.0, 0.1);
        CHECK(ok.pass);
        CHECK_FALSE(make_check("b", 1.2, 1.0, 0.1).pass);
        CHECK_FALSE(make_check("c", std::nan(""), 1.0, 0.1).pass);
    }

    TEST_CASE("exponent of a smooth path is one") {
        const auto v = sampled(1 << 14, [](double t) { return std::sin(3.0 * t); });
        const auto lags = default_lags();
        const auto r = empirical_axis_exponent(v, 1.0 / ((1 << 14) - 1), lags, 0, {1.5, {0.8}});
        CHECK(r.estimated_exponent == doctest::Approx(1.0).epsilon(0.02));
        CHECK(r.theory == doctest::Approx(0.8 - 1.0 / 1.5));
        CHECK_FALSE(r.degenerate);
    }

    TEST_CASE("exponent of a cusp") {
        const auto v = sampled(1 << 14, [](double t) { return std::pow(std::abs(t - 0.4), 0.3); });
        const auto lags = default_lags();
        const auto r = empirical_axis_exponent(v, 1.0 / ((1 << 14) - 1), lags, 0, {1.5, {0.8}});
        CHECK(r.estimated_exponent == doctest::Approx(0.3).epsilon(0.1));
    }

    TEST_CASE("constant transect is flagged") {
        const std::vector<double> v(1 << 13, 2.5);
        const auto lags = default_lags();
        const auto r = empirical_axis_exponent(v, 1e-3, lags, 0, {1.5, {0.8}});
        CHECK(r.degenerate);
        CHECK(std::isnan(r.estimated_exponent));
    }

    TEST_CASE("exponent preconditions") {
        const std::vector<double> shorter(1000, 0.0);
        const auto lags = default_lags();
        try {
            empirical_axis_exponent(shorter, 1e-3, lags, 0, {1.5, {0.8}});
            FAIL("short transect accepted");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Resolution);
        }
        const std::vector<double> v(1 << 13, 0.0);
        const std::vector<std::size_t> narrow{1, 2, 4};
        CHECK_THROWS_AS(empirical_axis_exponent(v, 1e-3, narrow, 0, {1.5, {0.8}}), Error);
    }

    TEST_CASE("box counting on a segment") {
        std::vector<std::vector<double>> pts;
        for (int i = 0; i < 100000; ++i) pts.push_back({i / 99999.0, 0.0});
        const auto r = box_counting_dimension(pts, dyadic_scales(2, 10));
        CHECK(r.estimate == doctest::Approx(1.0).epsilon(0.05));
        CHECK(r.counts.size() == 9u);
    }

    TEST_CASE("box counting on a filled square") {
        std::vector<std::vector<double>> pts;
        for (int i = 0; i < 512; ++i)
            for (int j = 0; j < 512; ++j) pts.push_back({i / 512.0, j / 512.0});
        CHECK(box_counting_dimension(pts, dyadic_scales(1, 6)).estimate == doctest::Approx(2.0).epsilon(0.05));
    }

    TEST_CASE("box counting on cantor dust") {
        // integer coordinates at depth 9 and scales 3^m keep every box index exact
        std::vector<double> c;
        cantor(c, 0.0, 19683.0, 9);
        std::vector<std::vector<double>> pts;
        for (double x : c)
            for (double y : c) pts.push_back({x, y});
        std::vector<double> scales;
        for (int m = 8; m >= 2; --m) scales.push_back(std::pow(3.0, m));
        const auto r = box_counting_dimension(pts, scales);
        CHECK(r.counts.front() == 4.0);
        CHECK(r.estimate == doctest::Approx(2.0 * std::log(2.0) / std::log(3.0)).epsilon(1e-9));
    }

    TEST_CASE("box counting preconditions") {
        std::vector<std::vector<double>> few(100, {0.0, 0.0});
        CHECK_THROWS_AS(box_counting_dimension(few, dyadic_scales(1, 6)), Error);
        std::vector<std::vector<double>> pts;
        for (int i = 0; i < 70000; ++i) pts.push_back({i / 69999.0});
        const std::vector<double> narrow{0.5, 0.4, 0.35, 0.3, 0.25};
        CHECK_THROWS_AS(box_counting_dimension(pts, narrow), Error);
    }

    TEST_CASE("graph dimension of a line and of a weierstrass function") {
        const auto line = sampled(1 << 16, [](double t) { return 3.0 * t; });
        CHECK(graph_box_dimension(line, dyadic_scales(2, 10)).estimate == doctest::Approx(1.0).epsilon(0.02));
        const auto w = sampled(1 << 16, weierstrass);
        CHECK(graph_box_dimension(w, dyadic_scales(2, 10)).estimate == doctest::Approx(1.5).epsilon(0.1));
    }

    TEST_CASE("growth envelope of the zero field") {
        std::vector<std::vector<double>> pts;
        for (int k = -9; k <= 9; ++k) pts.push_back({std::ldexp(1.0, k)});
        const std::vector<double> zero(pts.size(), 0.0);
        const auto r = check_growth_envelope(pts, zero, {1.5, {0.7}}, 0.1, 8.0);
        CHECK(r.sup_inner == 0.0);
        CHECK(r.sup_outer == 0.0);
        CHECK(r.pass);
    }

    TEST_CASE("increment ratios of an exactly scaled family") {
        const HurstVector h{1.5, {0.7}};
        std::vector<std::pair<std::vector<double>, std::vector<double>>> pairs{
            {{0.1}, {0.9}}, {{0.3}, {0.35}}, {{0.5}, {0.6}}};
        std::vector<std::vector<double>> inc;
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            const double scale = std::pow(std::abs(pairs[p].first[0] - pairs[p].second[0]), 0.7);
            std::vector<double> x(4000);
            sample_stable_block({1.5, scale, 0.0}, 31 + p, 0, x);
            inc.push_back(std::move(x));
        }
        const auto r = check_increment_bounds(inc, pairs, h);
        for (double x : r.ratios) CHECK(x == doctest::Approx(1.0).epsilon(0.1));
        std::vector<std::vector<double>> few{std::vector<double>(10, 1.0)};
        CHECK_THROWS_AS(check_increment_bounds(few, {pairs[0]}, h), Error);
    }

    TEST_CASE("sup moment of an exactly scaled family") {
        const HurstVector h{1.5, {0.7}};
        const std::vector<Rectangle> rects{{{0.1}, {0.9}}, {{0.1}, {0.3}}, {{0.1}, {0.15}}};
        std::vector<std::vector<double>> sups;
        for (const auto& r : rects) sups.emplace_back(300, std::pow(r.upper[0] - r.lower[0], 0.7));
        const auto rep = check_sup_moment(sups, rects, h);
        CHECK(rep.max_growth == doctest::Approx(1.0));
        CHECK(rep.pass);
    }
}
