#include <doctest.h>

#include <cmath>
#include <limits>
#include <memory>
#include <vector>

#include "lfss/errors.hpp"
#include "lfss/parallel.hpp"
#include "lfss/philox.hpp"
#include "lfss/stable_rng.hpp"
#include "lfss/stats.hpp"
#include "lfss/synthesis.hpp"

using namespace lfss;

namespace {

const HurstVector kPlane{1.5, {0.8, 0.9}};

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    REQUIRE(a.size() == b.size());
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double max_abs(const std::vector<double>& a) {
    double m = 0.0;
    for (double x : a) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

TEST_SUITE("synthesis") {
    TEST_CASE("method names") {
        CHECK(method_from_string("direct") == Method::Direct);
        CHECK(method_from_string("wavelet-exact") == Method::WaveletExact);
        CHECK(method_from_string("wavelet-iid") == Method::WaveletIid);
        CHECK(std::string(to_string(Method::WaveletIid)) == "wavelet-iid");
        CHECK_THROWS_AS(method_from_string("spectral"), Error);
    }

    TEST_CASE("truncation index set") {
        const TruncationSpec t{2, 1.0};
        CHECK(t.k_max() == 8);
        CHECK(axis_indices(t).size() == 5u * 17u);
        CHECK_THROWS_AS(TruncationSpec({-1, 1.0}).validate(), Error);
    }

    TEST_CASE("noise coarsening keeps sums and the law") {
        const auto axis = Partition1D::uniform(0.0, 1.0, 1.0 / 64.0);
        const auto fine = NoiseGrid::generate({axis, axis}, 1.5, 0.0, 3);
        const auto coarse = fine.coarsen();
        CHECK(coarse.coarsened());
        CHECK(coarse.axis(0).cells() == 32u);
        const std::size_t cell[2] = {3, 5};
        double sum = 0.0;
        for (std::size_t a = 6; a < 8; ++a)
            for (std::size_t b = 10; b < 12; ++b) {
                const std::size_t c[2] = {a, b};
                sum += fine.increment(c);
            }
        CHECK(coarse.increment(cell) == doctest::Approx(sum).epsilon(1e-14));

        // law: scale of a merged cell is (4 h^2)^(1/alpha)
        std::vector<double> merged;
        std::vector<double> direct;
        const auto coarse_axis = Partition1D::uniform(0.0, 1.0, 1.0 / 32.0);
        for (std::uint64_t s = 0; s < 4; ++s) {
            const auto c = NoiseGrid::generate({axis, axis}, 1.5, 0.0, 100 + s).coarsen();
            const auto d = NoiseGrid::generate({coarse_axis, coarse_axis}, 1.5, 0.0, 200 + s);
            merged.insert(merged.end(), c.increments().begin(), c.increments().end());
            direct.insert(direct.end(), d.increments().begin(), d.increments().end());
        }
        const double target = std::pow(1.0 / (32.0 * 32.0), 1.0 / 1.5);
        CHECK(estimate_scale(merged, 1.5) == doctest::Approx(target).epsilon(0.05));
        CHECK(estimate_scale(direct, 1.5) == doctest::Approx(target).epsilon(0.05));
    }

    TEST_CASE("axis points vanish exactly") {
        const auto spec = make_kernel_spec(kPlane);
        SynthesisConfig cfg;
        cfg.noise.spacing = 1.0 / 32.0;
        const std::vector<std::vector<double>> pts{{0.0, 0.5}, {0.7, 0.0}, {0.0, 0.0}, {0.5, 0.5}};
        const auto direct = synthesize_vector(pts, 1, spec, cfg, 4);
        CHECK(direct.values[0][0] == 0.0);
        CHECK(direct.values[0][1] == 0.0);
        CHECK(direct.values[0][2] == 0.0);
        CHECK(direct.values[0][3] != 0.0);

        cfg.method = Method::WaveletIid;
        cfg.truncation = {2, 1.0};
        const auto iid = synthesize_vector(pts, 1, spec, cfg, 4);
        CHECK(iid.values[0][0] == 0.0);
        CHECK(iid.values[0][1] == 0.0);
        CHECK(iid.values[0][3] != 0.0);
    }

    TEST_CASE("transect convolution matches the general path") {
        const auto spec = make_kernel_spec(kPlane);
        NoiseOptions opt;
        opt.spacing = 1.0 / 256.0;
        const double dt = 2.0 / 256.0;
        const std::size_t count = 100;
        const auto noise = NoiseGrid::generate(noise_partitions({{0.0, dt * 99}, {0.75, 0.75}}, spec, opt),
                                               spec.hurst.alpha, 0.0, 9);
        const std::vector<double> fixed{0.0, 0.75};
        const auto fast = direct_transect(0, fixed, 0.0, dt, count, noise, spec);
        std::vector<std::vector<double>> pts;
        for (std::size_t i = 0; i < count; ++i) pts.push_back({static_cast<double>(i) * dt, 0.75});
        const auto slow = direct_synthesis(pts, noise, spec).values[0];
        CHECK(max_abs_diff(fast, slow) < 1e-9 * max_abs(slow));
        CHECK(fast[0] == 0.0);
    }

    TEST_CASE("grid and pointwise direct synthesis agree") {
        const auto spec = make_kernel_spec(kPlane);
        NoiseOptions opt;
        opt.spacing = 1.0 / 32.0;
        const auto grid = TensorGrid::regular(2, 0.0, 1.0, 5);
        const auto noise =
            NoiseGrid::generate(noise_partitions({{0.0, 1.0}, {0.0, 1.0}}, spec, opt), spec.hurst.alpha, 0.0, 12);
        const auto on_grid = direct_grid(grid, noise, spec);
        std::vector<double> pointwise;
        for (const auto& p : grid.points()) pointwise.push_back(direct_synthesis({p}, noise, spec).values[0][0]);
        CHECK(max_abs_diff(on_grid, pointwise) < 1e-12 * max_abs(on_grid));
    }

    TEST_CASE("tail errors name the needed domain") {
        const auto spec = make_kernel_spec(kPlane);
        const auto axis = Partition1D::uniform(-1.0, 1.0, 1.0 / 16.0);
        const auto noise = NoiseGrid::generate({axis, axis}, 1.5, 0.0, 1);
        try {
            direct_synthesis({{0.5, 0.5}}, noise, spec, 1e-4);
            FAIL("truncated domain accepted");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Tail);
        }
        CHECK_NOTHROW(direct_synthesis({{0.5, 0.5}}, noise, spec, std::numeric_limits<double>::infinity()));
    }

    TEST_CASE("exact coefficients then series equals the fused grid evaluation") {
        const auto spec = make_kernel_spec(kPlane);
        const TruncationSpec trunc{2, 1.0};
        const auto axis = Partition1D::uniform(-2.0, 1.0, 1.0 / 32.0);
        const auto noise = NoiseGrid::generate({axis, axis}, 1.5, 0.0, 21);
        const auto psi = std::make_shared<const MotherWavelet>(build_daubechies(6, 10));
        const auto prim = make_primitives(psi, spec, default_window(*psi));
        const auto coeffs =
            compute_coefficients(noise, {axis_indices(trunc), axis_indices(trunc)}, *psi);
        const auto grid = TensorGrid::regular(2, -1.0, 1.0, 5);
        const auto series = wavelet_synthesis(grid.points(), coeffs, trunc, prim, spec).values[0];
        const auto fused = wavelet_exact_grid(grid, noise, trunc, *psi, prim, spec);
        CHECK(max_abs_diff(series, fused) < 1e-10 * max_abs(fused));
    }

    TEST_CASE("coefficient outside the noise domain is zero") {
        const auto axis = Partition1D::uniform(-1.0, 1.0, 1.0 / 32.0);
        const auto noise = NoiseGrid::generate({axis}, 1.5, 0.0, 2);
        const auto psi = build_daubechies(6, 10);
        const auto c = compute_coefficients(noise, {{WaveletIndex{0, 40}, WaveletIndex{0, 0}}}, psi);
        CHECK(c.values[0] == 0.0);
        CHECK(c.values[1] != 0.0);
    }

    TEST_CASE("wavelet-exact rejects coarse noise") {
        const auto spec = make_kernel_spec(kPlane);
        SynthesisConfig cfg;
        cfg.method = Method::WaveletExact;
        cfg.truncation = {3, 1.0};
        cfg.noise.spacing = 1.0 / 32.0;
        try {
            synthesize_vector({{0.5, 0.5}}, 1, spec, cfg, 1);
            FAIL("coarse noise accepted");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Resolution);
            CHECK(std::string(e.what()).find("0.015625") != std::string::npos);
        }
        cfg.method = Method::WaveletIid;
        try {
            synthesize_vector({{1.5, 0.5}}, 1, spec, cfg, 1);
            FAIL("point outside [-M, M] accepted");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::TruncationDomain);
        }
    }

    TEST_CASE("iid coefficients") {
        const TruncationSpec trunc{2, 2.0};
        const auto psi = build_daubechies(6, 10);
        const double norm = psi.lp_norm(1.5);
        const auto a = sample_coefficients_iid(trunc, 2, 1.5, 0.0, norm, 5);
        const auto b = sample_coefficients_iid(trunc, 2, 1.5, 0.0, norm, 5);
        const auto c = sample_coefficients_iid(trunc, 2, 1.5, 0.0, norm, 6);
        CHECK(a.values == b.values);
        CHECK(a.values != c.values);
        CHECK(estimate_scale(a.values, 1.5) == doctest::Approx(norm * norm).epsilon(0.05));
        // enlarging the truncation keeps the shared coefficients
        const auto big = sample_coefficients_iid({3, 2.0}, 1, 1.5, 0.0, norm, 5);
        const auto small = sample_coefficients_iid({2, 2.0}, 1, 1.5, 0.0, norm, 5);
        for (std::size_t i = 0; i < small.axes[0].size(); ++i) {
            const auto& idx = small.axes[0][i];
            for (std::size_t k = 0; k < big.axes[0].size(); ++k)
                if (big.axes[0][k] == idx) CHECK(big.values[k] == small.values[i]);
        }
    }

    TEST_CASE("gaussian corner is brownian motion") {
        // boundary H = 1/alpha, built by hand: the kernel is the indicator of [0, t)
        KernelSpec spec;
        spec.hurst = {2.0, {0.5}};
        spec.kappa = normalize_kappa(spec.hurst);
        const auto axis = Partition1D::uniform(-1.0, 1.0, 1.0 / 16.0);
        std::vector<double> x;
        for (std::uint64_t s = 0; s < 10000; ++s) {
            const auto noise = NoiseGrid::generate({axis}, 2.0, 0.0, derive_stream(s, 0));
            x.push_back(direct_synthesis({{1.0}}, noise, spec, std::numeric_limits<double>::infinity()).values[0][0]);
        }
        CHECK(variance(x) == doctest::Approx(2.0).epsilon(0.05));
    }

    TEST_CASE("vector coordinates use disjoint streams") {
        const auto spec = make_kernel_spec({1.5, {0.8}});
        SynthesisConfig cfg;
        cfg.noise.spacing = 1.0 / 64.0;
        std::vector<std::vector<double>> pts;
        for (int i = 1; i <= 64; ++i) pts.push_back({i / 64.0});
        const auto one = synthesize_vector(pts, 1, spec, cfg, 8);
        const auto three = synthesize_vector(pts, 3, spec, cfg, 8);
        CHECK(one.values[0] == three.values[0]);
        CHECK(three.values[1] != three.values[0]);
        CHECK(three.provenance.streams.size() == 3u);
        CHECK(three.provenance.streams[1] == derive_stream(8, 1));

        std::vector<double> a;
        std::vector<double> b;
        for (std::uint64_t s = 0; s < 2000; ++s) {
            const auto f = synthesize_vector({{1.0}}, 2, spec, cfg, s);
            a.push_back(std::tanh(f.values[0][0]));
            b.push_back(std::tanh(f.values[1][0]));
        }
        const double ma = mean(a);
        const double mb = mean(b);
        double cov = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) cov += (a[i] - ma) * (b[i] - mb);
        cov /= static_cast<double>(a.size() - 1);
        CHECK(std::abs(cov / std::sqrt(variance(a) * variance(b))) < 0.1);
    }

    TEST_CASE("results do not depend on the worker count") {
        const auto spec = make_kernel_spec(kPlane);
        SynthesisConfig cfg;
        cfg.noise.spacing = 1.0 / 64.0;
        const auto pts = TensorGrid::regular(2, 0.0, 1.0, 33).points();
        const unsigned saved = worker_count();
        set_worker_count(1);
        const auto serial = synthesize_vector(pts, 2, spec, cfg, 77);
        set_worker_count(4);
        const auto threaded = synthesize_vector(pts, 2, spec, cfg, 77);
        cfg.method = Method::WaveletIid;
        cfg.truncation = {3, 1.0};
        const auto iid4 = synthesize_vector(pts, 1, spec, cfg, 77);
        set_worker_count(1);
        const auto iid1 = synthesize_vector(pts, 1, spec, cfg, 77);
        set_worker_count(saved);
        CHECK(serial.values == threaded.values);
        CHECK(iid1.values == iid4.values);
    }

    TEST_CASE("G transform of the zero path") {
        const auto psi = std::make_shared<const MotherWavelet>(build_daubechies(6, 10));
        const auto deriv = fractionalize(psi, 0.8, 1.5, Direction::Derivative, default_window(*psi));
        const auto [lo, hi] = G_window(1, 0, deriv);
        const double ds = 1.0 / 64.0;
        const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / ds)) + 1;
        const std::vector<double> zero(n, 0.0);
        CHECK(wavelet_transform_G(zero, lo, ds, 1, 0, deriv) == 0.0);
        CHECK_THROWS_AS(wavelet_transform_G(zero, lo, 1.0 / 8.0, 1, 0, deriv), Error);
    }
}
