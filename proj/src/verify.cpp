#include "lfss/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <sstream>

#include "lfss/errors.hpp"
#include "lfss/kernel.hpp"
#include "lfss/philox.hpp"
#include "lfss/stable_rng.hpp"
#include "lfss/stats.hpp"
#include "lfss/synthesis.hpp"
#include "lfss/wavelet.hpp"

namespace lfss {

namespace {

// Stream tags keep the suites statistically independent of each other.
enum Tag : std::uint64_t {
    kTagRng = 1,
    kTagScale,
    kTagRectangles,
    kTagExponent,
    kTagGraph,
    kTagRange,
    kTagOracle,
    kTagG,
    kTagCoefficients,
    kTagPermutation,
};

std::string fmt(double v, int digits = 4) {
    std::ostringstream os;
    os.precision(digits);
    os << v;
    return os.str();
}

// Pass when at most `rate` of the per-seed estimates miss theory by more than tol.
Check per_seed_check(std::string name, const std::vector<double>& estimates, double theory, double tol,
                     double rate) {
    std::size_t ok = 0;
    for (double e : estimates)
        if (std::isfinite(e) && std::abs(e - theory) <= tol) ++ok;
    std::vector<double> finite;
    for (double e : estimates)
        if (std::isfinite(e)) finite.push_back(e);
    Check c = make_check(std::move(name), finite.empty() ? std::numeric_limits<double>::quiet_NaN() : median(finite),
                         theory, tol);
    const auto n = estimates.size();
    c.pass = n > 0 && static_cast<double>(n - ok) <= rate * static_cast<double>(n) + 1e-12;
    c.detail = std::to_string(ok) + "/" + std::to_string(n) + " seeds within tolerance";
    return c;
}

HurstVector scale_hurst() { return {1.5, {0.8, 0.9}}; }

// Five rectangles in [0.1, 1]^2 with sides >= 0.05, drawn from a fixed stream.
std::vector<Rectangle> random_rectangles(std::uint64_t stream, std::size_t count) {
    std::vector<Rectangle> out;
    std::uint64_t counter = 0;
    while (out.size() < count) {
        Rectangle r;
        bool ok = true;
        for (int l = 0; l < 2; ++l) {
            const auto u = uniform_pair(SeedKey{stream, counter++, 0});
            const double a = 0.1 + 0.9 * std::min(u.u1, u.u2);
            const double b = 0.1 + 0.9 * std::max(u.u1, u.u2);
            ok = ok && b - a >= 0.05;
            r.lower.push_back(a);
            r.upper.push_back(b);
        }
        if (ok) out.push_back(std::move(r));
    }
    return out;
}

std::vector<double> vertex(const Rectangle& r, unsigned mask) {
    std::vector<double> v(r.lower.size());
    for (std::size_t l = 0; l < v.size(); ++l) v[l] = (mask >> l) & 1u ? r.upper[l] : r.lower[l];
    return v;
}

std::vector<Check> scale_identity_checks(const VerifyOptions& options) {
    const auto hurst = scale_hurst();
    const auto spec = make_kernel_spec(hurst);
    const auto rects = random_rectangles(derive_stream(options.seed, kTagRectangles), 5);

    std::vector<std::vector<double>> points{{1.0, 1.0}, {0.3, 0.4}, {0.6, 0.8}};
    for (const auto& r : rects)
        for (unsigned m = 0; m < 4; ++m) points.push_back(vertex(r, m));

    NoiseOptions noise;
    const auto parts = noise_partitions({{0.1, 1.0}, {0.1, 1.0}}, spec, noise);
    const std::uint64_t base = derive_stream(options.seed, kTagScale);
    std::vector<std::vector<double>> samples(3 + rects.size());
    for (std::size_t r = 0; r < options.replicates; ++r) {
        const auto grid = NoiseGrid::generate(parts, hurst.alpha, 0.0, derive_stream(base, r));
        const auto v = direct_synthesis(points, grid, spec, noise.tail_tol).values.front();
        for (std::size_t i = 0; i < 3; ++i) samples[i].push_back(v[i]);
        for (std::size_t q = 0; q < rects.size(); ++q) {
            std::map<unsigned, double> at;
            for (unsigned m = 0; m < 4; ++m) at[m] = v[3 + 4 * q + m];
            samples[3 + q].push_back(rectangular_increment(at, 2));
        }
    }
    const double se = scale_estimate_rel_stderr(hurst.alpha, options.replicates);
    std::vector<Check> out;
    {
        auto c = make_check("scale of X(1,1)", iqr_scale(samples[0], hurst.alpha), 1.0, 0.10);
        c.detail = "relative stderr " + fmt(se, 3);
        out.push_back(std::move(c));
    }
    for (std::size_t q = 0; q < rects.size(); ++q) {
        const auto& r = rects[q];
        const double theory = increment_scale(r, spec);
        std::ostringstream name;
        name << "rectangular increment scale [" << fmt(r.lower[0], 3) << "," << fmt(r.upper[0], 3) << "]x["
             << fmt(r.lower[1], 3) << "," << fmt(r.upper[1], 3) << "] / theory";
        auto c = make_check(name.str(), iqr_scale(samples[3 + q], hurst.alpha) / theory, 1.0, 0.10);
        c.detail = "theory " + fmt(theory, 6);
        out.push_back(std::move(c));
    }
    {
        const double s1 = iqr_scale(samples[1], hurst.alpha);
        const double s2 = iqr_scale(samples[2], hurst.alpha);
        const double factor = std::pow(2.0, hurst.H[0] + hurst.H[1]);
        auto c = make_check("scale of X(2t) / (2^(H1+H2) scale of X(t)), t = (0.3, 0.4)", s2 / (factor * s1), 1.0,
                            0.10);
        c.detail = "scale X(t) " + fmt(s1, 5) + ", scale X(2t) " + fmt(s2, 5);
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<Check> g_checks(const VerifyOptions& options) {
    const auto rep = g_transform_scales(derive_stream(options.seed, kTagG), options.replicates);
    std::vector<Check> out;
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t i = 0; i < rep.pairs.size(); ++i) {
        const auto [j, k] = rep.pairs[i];
        auto c = make_check("G transform scale (j=" + std::to_string(j) + ", k=" + std::to_string(k) + ") / target",
                            rep.scales[i] / rep.target, 1.0, 0.10);
        c.detail = "target " + fmt(rep.target, 6);
        out.push_back(std::move(c));
        lo = std::min(lo, rep.scales[i]);
        hi = std::max(hi, rep.scales[i]);
    }
    // Two-sided spread of independent estimates: 3 standard errors of a ratio.
    const double spread_tol = 3.0 * std::sqrt(2.0) * rep.rel_stderr;
    auto c = make_check("G transform scale spread over (j, k): max/min - 1", hi / lo - 1.0, 0.0, spread_tol);
    c.detail = "tolerance is 3 standard errors of a scale ratio";
    out.push_back(std::move(c));
    return out;
}

struct ExponentCase {
    HurstVector hurst;
    std::size_t axis;
};

std::vector<double> transect_exponents(const ExponentCase& ec, const VerifyOptions& options, std::uint64_t stream,
                                       std::vector<double>* median_slopes) {
    const auto spec = make_kernel_spec(ec.hurst);
    const std::size_t N = ec.hurst.dim();
    const std::size_t count = std::size_t{1} << 14;
    const double dt = 1.0 / static_cast<double>(count);
    NoiseOptions noise;
    noise.spacing = dt;
    noise.axis_spacing.assign(N, 1.0 / 64.0);
    noise.axis_spacing[ec.axis] = dt;
    std::vector<std::pair<double, double>> bounds(N, {1.0, 1.0});
    bounds[ec.axis] = {0.0, 1.0};
    const auto parts = noise_partitions(bounds, spec, noise);
    std::vector<double> fixed(N, 1.0);
    const auto lags = default_lags();
    std::vector<double> out;
    for (int s = 0; s < options.seeds; ++s) {
        const auto grid =
            NoiseGrid::generate(parts, ec.hurst.alpha, 0.0, derive_stream(stream, static_cast<std::uint64_t>(s)));
        const auto path = direct_transect(ec.axis, fixed, dt, dt, count, grid, spec, noise.tail_tol);
        const auto r = empirical_axis_exponent(path, dt, lags, ec.axis, ec.hurst);
        out.push_back(r.degenerate ? std::numeric_limits<double>::quiet_NaN() : r.estimated_exponent);
        if (median_slopes) median_slopes->push_back(r.median_slope);
    }
    return out;
}

std::vector<double> graph_dimensions(const VerifyOptions& options) {
    const HurstVector hurst{1.5, {0.8}};
    const auto spec = make_kernel_spec(hurst);
    const std::size_t count = std::size_t{1} << 16;
    const double dt = 1.0 / static_cast<double>(count);
    NoiseOptions noise;
    noise.spacing = dt;
    const auto parts = noise_partitions({{0.0, 1.0}}, spec, noise);
    const auto scales = dyadic_scales(2, 10);
    const std::uint64_t stream = derive_stream(options.seed, kTagGraph);
    std::vector<double> out;
    const std::vector<double> fixed{0.0};
    for (int s = 0; s < options.seeds; ++s) {
        const auto grid =
            NoiseGrid::generate(parts, hurst.alpha, 0.0, derive_stream(stream, static_cast<std::uint64_t>(s)));
        const auto path = direct_transect(0, fixed, dt, dt, count, grid, spec, noise.tail_tol);
        out.push_back(graph_box_dimension(path, scales).estimate);
    }
    return out;
}

std::vector<double> range_dimensions(const VerifyOptions& options) {
    const HurstVector hurst{1.8, {0.6, 0.8}};
    const auto spec = make_kernel_spec(hurst);
    const std::size_t n = 256;
    const int d = 3;
    std::vector<double> axis;
    for (std::size_t i = 1; i <= n; ++i) axis.push_back(static_cast<double>(i) / static_cast<double>(n));
    const TensorGrid grid{{axis, axis}};
    NoiseOptions noise;
    noise.spacing = 1.0 / static_cast<double>(n);
    const auto parts = noise_partitions({{0.0, 1.0}, {0.0, 1.0}}, spec, noise);
    const std::uint64_t stream = derive_stream(options.seed, kTagRange);
    std::vector<double> out;
    for (int s = 0; s < options.seeds; ++s) {
        const std::uint64_t path_stream = derive_stream(stream, static_cast<std::uint64_t>(s));
        std::vector<std::vector<double>> points(grid.size(), std::vector<double>(d));
        for (int c = 0; c < d; ++c) {
            const auto z = NoiseGrid::generate(parts, hurst.alpha, 0.0,
                                               derive_stream(path_stream, static_cast<std::uint64_t>(c)));
            const auto v = direct_grid(grid, z, spec, noise.tail_tol);
            for (std::size_t i = 0; i < v.size(); ++i) points[i][static_cast<std::size_t>(c)] = v[i];
        }
        // Scales relative to the largest coordinate extent of the range.
        double extent = 0.0;
        for (int c = 0; c < d; ++c) {
            double lo = std::numeric_limits<double>::infinity();
            double hi = -lo;
            for (const auto& p : points) {
                lo = std::min(lo, p[static_cast<std::size_t>(c)]);
                hi = std::max(hi, p[static_cast<std::size_t>(c)]);
            }
            extent = std::max(extent, hi - lo);
        }
        std::vector<double> scales;
        for (int k = 1; k <= 6; ++k) scales.push_back(extent * std::ldexp(1.0, -k));
        out.push_back(box_counting_dimension(points, scales).estimate);
    }
    return out;
}

// Graph dimension as a minimum over branches, the alternative closed form.
double graph_min_form(const HurstVector& hurst, int d) {
    const auto dd = static_cast<double>(d);
    const std::size_t N = hurst.dim();
    double best = 0.0;
    for (double h : hurst.H) best += 1.0 / h;
    for (std::size_t k = 1; k <= N; ++k) {
        const double Hk = hurst.H[k - 1];
        double g = static_cast<double>(N - k) + (1.0 - Hk) * dd;
        for (std::size_t l = 0; l < k; ++l) g += Hk / hurst.H[l];
        best = std::min(best, g);
    }
    return best;
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"rng", "wavelet", "scale", "exponent", "dims", "all"};
    return names;
}

std::vector<Check> run_suite(const std::string& name, const VerifyOptions& options) {
    if (name == "rng") return verify_rng(options);
    if (name == "wavelet") return verify_wavelet(options);
    if (name == "scale") return verify_scale(options);
    if (name == "exponent") return verify_exponent(options);
    if (name == "dims") return verify_dims(options);
    if (name == "all") {
        std::vector<Check> out;
        for (const auto& s : suite_names()) {
            if (s == "all") continue;
            auto part = run_suite(s, options);
            out.insert(out.end(), part.begin(), part.end());
        }
        return out;
    }
    throw Error(ErrorKind::Configuration, "unknown suite '" + name + "'; expected rng, wavelet, scale, exponent, "
                                          "dims or all");
}

std::vector<Check> verify_rng(const VerifyOptions& options) {
    std::vector<Check> out;
    struct Kat {
        Philox4x32::Counter ctr;
        Philox4x32::Key key;
        Philox4x32::Counter expect;
    };
    const Kat kats[] = {
        {{0, 0, 0, 0}, {0, 0}, {0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}},
        {{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
         {0xffffffffu, 0xffffffffu},
         {0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}},
        {{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
         {0xa4093822u, 0x299f31d0u},
         {0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}},
    };
    int mismatches = 0;
    for (const auto& k : kats)
        if (Philox4x32::apply(k.ctr, k.key) != k.expect) ++mismatches;
    out.push_back(make_check("philox4x32-10 known-answer mismatches", mismatches, 0.0, 0.0));

    const std::uint64_t stream = derive_stream(options.seed, kTagRng);
    std::vector<double> x(options.draws);
    for (double alpha : {1.2, 1.5, 1.8}) {
        sample_stable_block({alpha, 1.0, 0.0}, derive_stream(stream, static_cast<std::uint64_t>(alpha * 10)), 0, x);
        std::vector<double> mag(x.size());
        std::transform(x.begin(), x.end(), mag.begin(), [](double v) { return std::abs(v); });
        const double lo = quantile(mag, 0.995);
        const double hi = quantile(mag, 0.9999);
        auto c = make_check("log-log tail slope, alpha = " + fmt(alpha, 2), tail_slope(x, lo, hi, 16), -alpha, 0.1);
        c.detail = "levels " + fmt(lo) + " .. " + fmt(hi);
        out.push_back(std::move(c));
    }
    sample_stable_block({2.0, 1.0, 0.0}, derive_stream(stream, 20), 0, x);
    out.push_back(make_check("Gaussian corner variance, alpha = 2, scale 1", variance(x), 2.0, 0.04));
    return out;
}

std::vector<Check> verify_wavelet(const VerifyOptions&) {
    const double H = 0.8;
    const double alpha = 1.5;
    const auto psi = std::make_shared<const MotherWavelet>(build_daubechies(6, 10));
    const double window = default_window(*psi);
    const auto prim = fractionalize(psi, H, alpha, Direction::Primitive, window);
    const auto deriv = fractionalize(psi, H, alpha, Direction::Derivative, window);
    std::vector<Check> out;
    out.push_back(make_check("integral of mother wavelet squared", psi->lp_norm(2.0) * psi->lp_norm(2.0), 1.0, 1e-6));
    double moment = 0.0;
    for (int k = 0; k < psi->vanishing_moments; ++k) moment = std::max(moment, std::abs(psi->moment(k)));
    out.push_back(make_check("largest vanishing moment of mother wavelet", moment, 0.0, 1e-6));
    out.push_back(make_check("integral of fractional primitive", prim.integral(), 0.0, 1e-6));
    out.push_back(make_check("integral of fractional derivative", deriv.integral(), 0.0, 1e-6));

    double worst = 0.0;
    for (int J = -2; J <= 2; ++J)
        for (int K = -4; K <= 4; ++K)
            for (int J2 = -2; J2 <= 2; ++J2)
                for (int K2 = -4; K2 <= 4; ++K2) {
                    const double v = biorth_inner(prim, deriv, J, K, J2, K2);
                    const double target = (J == J2 && K == K2) ? std::ldexp(1.0, -J) : 0.0;
                    const double norm = std::sqrt(std::ldexp(1.0, -(J + J2)));
                    worst = std::max(worst, std::abs(v - target) / norm);
                }
    auto bi = make_check("biorthogonality, |J| <= 2, |K| <= 4: largest relative error", worst, 0.0, 1e-3);
    bi.detail = "errors scaled by 2^(-(J + J')/2)";
    out.push_back(std::move(bi));

    for (auto dir : {Direction::Primitive, Direction::Derivative}) {
        const auto st = localization_stability(psi, H, alpha, dir, window);
        auto c = make_check(std::string("localization change under window doubling, ") +
                                (dir == Direction::Primitive ? "primitive" : "derivative"),
                            st.relative_change, 0.0, 0.05);
        c.detail = "functional " + fmt(st.at_window, 6) + " -> " + fmt(st.at_double_window, 6);
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<Check> verify_scale(const VerifyOptions& options) {
    auto out = scale_identity_checks(options);
    auto g = g_checks(options);
    out.insert(out.end(), g.begin(), g.end());
    return out;
}

std::vector<Check> verify_exponent(const VerifyOptions& options) {
    const std::uint64_t stream = derive_stream(options.seed, kTagExponent);
    const ExponentCase cases[] = {{{2.0, {0.7}}, 0}, {{1.5, {0.8, 0.9}}, 0}};
    std::vector<Check> out;
    for (std::size_t i = 0; i < std::size(cases); ++i) {
        const auto& ec = cases[i];
        std::vector<double> med;
        const auto est = transect_exponents(ec, options, derive_stream(stream, i), &med);
        std::ostringstream name;
        name << "Hölder exponent, N = " << ec.hurst.dim() << ", alpha = " << ec.hurst.alpha
             << ", H = " << ec.hurst.H[ec.axis] << ", axis " << ec.axis + 1;
        auto c = per_seed_check(name.str(), est, ec.hurst.exponent(ec.axis), 0.07, options.seed_failure_rate);
        c.detail += "; median-increment slope " + fmt(median(med), 3);
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<Check> verify_dims(const VerifyOptions& options) {
    std::vector<Check> out;
    const HurstVector h68{1.5, {0.6, 0.8}};
    const auto d1 = hausdorff_dims(h68, 1);
    const auto d3 = hausdorff_dims(h68, 3);
    const auto fbm = hausdorff_dims(HurstVector{2.0, {0.7}}, 1);
    out.push_back(make_check("range dimension, H = (0.6, 0.8), d = 1", d1.range, 1.0, 1e-12));
    out.push_back(make_check("graph dimension, H = (0.6, 0.8), d = 1", d1.graph, 2.4, 1e-12));
    out.push_back(make_check("range dimension, H = (0.6, 0.8), d = 3", d3.range, 35.0 / 12.0, 1e-12));
    out.push_back(make_check("graph dimension, H = (0.6, 0.8), d = 3", d3.graph, 35.0 / 12.0, 1e-12));
    out.push_back(make_check("graph dimension, H = 0.7, d = 1", fbm.graph, 1.3, 1e-12));

    // Branch boundary: 1/H_1 = d = 2 at H_1 = 0.5.
    const double eps = 1e-9;
    const auto below = hausdorff_dims(HurstVector{2.0, {0.5 * (1.0 + eps), 0.8}}, 2);
    const auto above = hausdorff_dims(HurstVector{2.0, {0.5 * (1.0 - eps), 0.8}}, 2);
    out.push_back(make_check("graph dimension continuity across 1/H_1 = d", std::abs(below.graph - above.graph), 0.0,
                             1e-8));
    double worst = 0.0;
    for (double a : {0.3, 0.5, 0.7, 0.9})
        for (double b : {0.5, 0.7, 0.95})
            for (int d = 1; d <= 4; ++d) {
                if (b < a) continue;
                const HurstVector hv{2.0, {a, b}};
                worst = std::max(worst, std::abs(hausdorff_dims(hv, d).graph - graph_min_form(hv, d)));
            }
    out.push_back(make_check("graph dimension: piecewise form against minimum form", worst, 0.0, 1e-12));

    const auto graph = graph_dimensions(options);
    auto g = per_seed_check("box-counting graph dimension, N = 1, alpha = 1.5, H = 0.8, 2^16 points", graph,
                            hausdorff_dims(HurstVector{1.5, {0.8}}, 1).graph, 0.15, options.seed_failure_rate);
    out.push_back(std::move(g));
    const auto range = range_dimensions(options);
    auto r = per_seed_check("box-counting range dimension, N = 2, alpha = 1.8, H = (0.6, 0.8), d = 3, 256^2 grid",
                            range, d3.range, 0.3, options.seed_failure_rate);
    out.push_back(std::move(r));
    return out;
}

bool OracleReport::strictly_decreasing() const {
    for (std::size_t i = 1; i < discrepancy.size(); ++i)
        if (!(discrepancy[i] < discrepancy[i - 1])) return false;
    return !discrepancy.empty();
}

OracleReport oracle_discrepancy(std::uint64_t stream, int n_lo, int n_hi) {
    const HurstVector hurst{1.5, {0.8, 0.9}};
    const auto spec = make_kernel_spec(hurst);
    const double h = std::ldexp(1.0, -(n_hi + 3));
    // Bounded noise domain shared by both representations.
    const auto axis = Partition1D::uniform(-2.0, 1.0, h);
    const auto noise = NoiseGrid::generate({axis, axis}, hurst.alpha, 0.0, stream);
    const auto grid = TensorGrid::regular(2, -1.0, 1.0, 17);
    const auto direct = direct_grid(grid, noise, spec, std::numeric_limits<double>::infinity());
    const auto psi = std::make_shared<const MotherWavelet>(build_daubechies(6, 10));
    const auto primitives = make_primitives(psi, spec, default_window(*psi));
    OracleReport rep;
    for (int n = n_lo; n <= n_hi; ++n) {
        const auto series = wavelet_exact_grid(grid, noise, TruncationSpec{n, 1.0}, *psi, primitives, spec);
        double worst = 0.0;
        for (std::size_t i = 0; i < series.size(); ++i) worst = std::max(worst, std::abs(series[i] - direct[i]));
        rep.levels.push_back(n);
        rep.discrepancy.push_back(worst);
    }
    return rep;
}

GScaleReport g_transform_scales(std::uint64_t seed, std::size_t replicates) {
    const HurstVector hurst{1.5, {0.8, 0.9}};
    const auto spec = make_kernel_spec(hurst);
    const auto psi = std::make_shared<const MotherWavelet>(build_daubechies(6, 10));
    const auto deriv = fractionalize(psi, hurst.H[0], hurst.alpha, Direction::Derivative, default_window(*psi));

    GScaleReport rep;
    rep.pairs = {{1, 0}, {1, 1}, {2, 1}, {2, 2}};
    const double ds = std::ldexp(1.0, -6);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& [j, k] : rep.pairs) {
        const auto [a, b] = G_window(j, k, deriv);
        lo = std::min(lo, a);
        hi = std::max(hi, b);
    }
    const double s0 = std::floor(lo / ds) * ds;
    const auto count = static_cast<std::size_t>(std::ceil((hi - s0) / ds)) + 1;
    const double s_end = s0 + static_cast<double>(count - 1) * ds;

    NoiseOptions noise;
    noise.axis_spacing = {ds, 1.0 / 32.0};
    const auto parts = noise_partitions({{s0, s_end}, {1.0, 1.0}}, spec, noise);
    const std::vector<double> fixed{0.0, 1.0};
    std::vector<std::vector<double>> samples(rep.pairs.size());
    for (std::size_t r = 0; r < replicates; ++r) {
        const auto grid = NoiseGrid::generate(parts, hurst.alpha, 0.0, derive_stream(seed, r));
        const auto path = direct_transect(0, fixed, s0, ds, count, grid, spec, noise.tail_tol);
        for (std::size_t p = 0; p < rep.pairs.size(); ++p)
            samples[p].push_back(
                wavelet_transform_G(path, s0, ds, rep.pairs[p].first, rep.pairs[p].second, deriv));
    }
    for (const auto& s : samples) rep.scales.push_back(iqr_scale(s, hurst.alpha));
    rep.target = spec.kappa * psi->lp_norm(hurst.alpha) *
                 slice_norm(1.0, hurst.exponent(1), hurst.alpha, spec.quadrature);
    rep.rel_stderr = scale_estimate_rel_stderr(hurst.alpha, replicates);
    return rep;
}

CoefficientLawReport coefficient_laws(std::uint64_t seed, int paths) {
    const double alpha = 1.5;
    const auto psi = std::make_shared<const MotherWavelet>(build_daubechies(6, 10));
    CoefficientLawReport rep;
    rep.support_length = 2.0 * psi->support_halfwidth;
    rep.separation = static_cast<int>(rep.support_length) + 1;
    const int per_axis = 6;
    std::vector<WaveletIndex> idx;
    for (int i = 0; i < per_axis; ++i) idx.push_back({0, static_cast<std::int64_t>(i) * rep.separation});
    const double L = psi->support_halfwidth;
    // Cell averaging lowers the discrete norm by 0.7% at this spacing (3.5% at 1/8).
    const double h = 1.0 / 16.0;
    const auto axis = Partition1D::uniform(-L, (per_axis - 1) * rep.separation + L, h);
    std::vector<double> all;
    std::vector<double> left;
    std::vector<double> right;
    for (int p = 0; p < paths; ++p) {
        const auto noise = NoiseGrid::generate({axis, axis}, alpha, 0.0, derive_stream(seed, static_cast<std::uint64_t>(p)));
        const auto c = compute_coefficients(noise, {idx, idx}, *psi);
        all.insert(all.end(), c.values.begin(), c.values.end());
        // Disjoint neighbouring pairs along axis 2.
        for (int a = 0; a < per_axis; ++a)
            for (int b = 0; b + 1 < per_axis; b += 2) {
                left.push_back(c.values[static_cast<std::size_t>(a * per_axis + b)]);
                right.push_back(c.values[static_cast<std::size_t>(a * per_axis + b + 1)]);
            }
    }
    rep.samples = all.size();
    rep.scale = iqr_scale(all, alpha);
    rep.target = std::pow(psi->lp_norm(alpha), 2.0);
    const std::size_t n = std::min<std::size_t>(left.size(), 1000);
    rep.pairs = n;
    rep.independence_pvalue = distance_correlation_pvalue(std::span(left).first(n), std::span(right).first(n), 200,
                                                          derive_stream(seed, kTagPermutation));
    return rep;
}

}  // namespace lfss
