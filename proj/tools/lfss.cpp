// lfss: synthesize, analyze and verify linear fractional stable sheets.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "lfss/analysis.hpp"
#include "lfss/errors.hpp"
#include "lfss/io.hpp"
#include "lfss/kernel.hpp"
#include "lfss/parallel.hpp"
#include "lfss/philox.hpp"
#include "lfss/stable_rng.hpp"
#include "lfss/stats.hpp"
#include "lfss/synthesis.hpp"
#include "lfss/verify.hpp"
#include "lfss/wavelet.hpp"

namespace fs = std::filesystem;
using namespace lfss;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitTolerance = 3;
constexpr int kExitIo = 4;

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Io: return kExitIo;
        case ErrorKind::Tolerance: return kExitTolerance;
        default: return kExitConfig;
    }
}

struct FieldArgs {
    double alpha = 0.0;
    std::string H;
    int d = 1;
    std::string method = "direct";
    int n = 4;
    double M = 1.0;
    double spacing = 0.0;
    double tail_tol = 1e-4;
    double skewness = 0.0;
    int order = 6;
    int level = 10;
    std::string grid = "64";
    std::string lo = "0";
    std::string hi = "1";
    std::uint64_t seed = 0;
    std::string out;
};

void add_model_options(CLI::App* app, FieldArgs& a) {
    app->add_option("--alpha", a.alpha, "stability index in (0, 2]")->required();
    app->add_option("--H", a.H, "Hurst indices, comma-separated, nondecreasing")->required();
    app->add_option("--skewness", a.skewness, "constant skewness intensity in [-1, 1]");
}

KernelSpec kernel_from(const FieldArgs& a) {
    HurstVector hv{a.alpha, parse_real_list(a.H)};
    return make_kernel_spec(hv);
}

std::vector<double> per_axis(const std::string& text, std::size_t N, const char* what) {
    auto v = parse_real_list(text);
    if (v.size() == 1) v.assign(N, v.front());
    require(v.size() == N, ErrorKind::Configuration,
            std::string(what) + " needs 1 or " + std::to_string(N) + " values");
    return v;
}

TensorGrid grid_from(const FieldArgs& a, std::size_t N) {
    auto shape = parse_shape(a.grid);
    if (shape.size() == 1) shape.assign(N, shape.front());
    require(shape.size() == N, ErrorKind::Configuration, "--grid needs 1 or " + std::to_string(N) + " sizes");
    const auto lo = per_axis(a.lo, N, "--lo");
    const auto hi = per_axis(a.hi, N, "--hi");
    TensorGrid g;
    for (std::size_t l = 0; l < N; ++l) {
        require(hi[l] >= lo[l], ErrorKind::Configuration, "--hi must not be below --lo");
        std::vector<double> axis(shape[l]);
        for (std::size_t i = 0; i < shape[l]; ++i)
            axis[i] = shape[l] == 1 ? lo[l]
                                    : lo[l] + (hi[l] - lo[l]) * static_cast<double>(i) / static_cast<double>(shape[l] - 1);
        g.axes.push_back(std::move(axis));
    }
    return g;
}

// Unset spacing: the finest grid step, or the coarsest width wavelet-exact accepts.
double noise_spacing(const FieldArgs& a, Method method, const TensorGrid* grid) {
    if (a.spacing > 0.0) return a.spacing;
    const double exact = std::ldexp(1.0, -(a.n + 3));
    if (method == Method::WaveletExact) return exact;
    double step = std::numeric_limits<double>::infinity();
    if (grid)
        for (const auto& ax : grid->axes)
            if (ax.size() > 1) step = std::min(step, (ax.back() - ax.front()) / static_cast<double>(ax.size() - 1));
    return std::isfinite(step) && step > 0.0 ? step : exact;
}

SynthesisConfig synthesis_from(const FieldArgs& a, const TensorGrid* grid = nullptr) {
    SynthesisConfig c;
    c.method = method_from_string(a.method);
    c.noise.spacing = noise_spacing(a, c.method, grid);
    c.noise.tail_tol = a.tail_tol;
    c.noise.skewness = a.skewness;
    c.truncation = {a.n, a.M};
    c.vanishing_moments = a.order;
    c.refinement_level = a.level;
    return c;
}

nlohmann::json grid_json(const TensorGrid& g) {
    nlohmann::json shape = nlohmann::json::array();
    nlohmann::json lo = nlohmann::json::array();
    nlohmann::json hi = nlohmann::json::array();
    for (const auto& a : g.axes) {
        shape.push_back(a.size());
        lo.push_back(a.front());
        hi.push_back(a.back());
    }
    return {{"shape", shape}, {"lower", lo}, {"upper", hi}};
}

int cmd_simulate(const FieldArgs& a) {
    const auto spec = kernel_from(a);
    require(a.d >= 1, ErrorKind::Configuration, "--d must be a positive integer");
    const auto grid = grid_from(a, spec.dim());
    const auto config = synthesis_from(a, &grid);
    const auto field = synthesize_vector(grid.points(), a.d, spec, config, a.seed);
    const fs::path dir(a.out);
    write_field_csv(dir / "field.csv", field);
    nlohmann::json extra{{"command", "simulate"}, {"d", a.d}, {"grid", grid_json(grid)},
                         {"columns", "t_1..t_N, x_1..x_d"}};
    write_json(dir / "field.json", sidecar_json(field.provenance, extra));
    std::cout << (dir / "field.csv").string() << '\n';
    return kExitOk;
}

int cmd_coeffs(const FieldArgs& a) {
    const auto spec = kernel_from(a);
    auto config = synthesis_from(a);
    require(config.method != Method::Direct, ErrorKind::Configuration, "coeffs needs wavelet-exact or wavelet-iid");
    config.truncation.validate();
    const auto psi = build_daubechies(a.order, a.level);
    const std::size_t N = spec.dim();
    CoefficientArray coeffs;
    Provenance prov;
    prov.method = config.method;
    prov.seed = a.seed;
    prov.alpha = spec.hurst.alpha;
    prov.H = spec.hurst.H;
    prov.kappa = spec.kappa;
    prov.skewness = a.skewness;
    prov.truncation = config.truncation;
    prov.vanishing_moments = a.order;
    prov.refinement_level = a.level;
    const std::uint64_t stream = derive_stream(a.seed, 0);
    prov.streams = {stream};
    if (config.method == Method::WaveletIid) {
        coeffs = sample_coefficients_iid(config.truncation, N, spec.hurst.alpha, a.skewness, psi.lp_norm(spec.hurst.alpha),
                                         stream);
    } else {
        const double need = std::ldexp(1.0, -(config.truncation.n + 3));
        require(config.noise.spacing <= need * (1.0 + 1e-12), ErrorKind::Resolution,
                "wavelet-exact with n = " + std::to_string(config.truncation.n) + " needs noise spacing <= " +
                    std::to_string(need));
        const std::vector<std::pair<double, double>> bounds(N, {-a.M, a.M});
        const auto noise =
            NoiseGrid::generate(noise_partitions(bounds, spec, config.noise), spec.hurst.alpha, a.skewness, stream);
        coeffs = compute_coefficients(noise, std::vector<std::vector<WaveletIndex>>(N, axis_indices(config.truncation)),
                                      psi);
        for (const auto& ax : noise.axes()) {
            prov.noise_lower.push_back(ax.lower());
            prov.noise_upper.push_back(ax.upper());
        }
        prov.noise_spacing = config.noise.spacing;
        prov.noise_cells = noise.cells();
        prov.tail_tol = a.tail_tol;
    }
    const fs::path dir(a.out);
    write_coefficients_csv(dir / "coefficients.csv", coeffs);
    nlohmann::json extra{{"command", "coeffs"}, {"count", coeffs.values.size()},
                         {"columns", "j_1,k_1..j_N,k_N,value"}};
    write_json(dir / "coefficients.json", sidecar_json(prov, extra));
    std::cout << (dir / "coefficients.csv").string() << '\n';
    return kExitOk;
}

struct AnalyzeArgs {
    std::string input;
    double alpha = 0.0;
    std::string H;
    int axis = 1;
    std::string out;
};

// Regular line along `axis` at the largest value of every other coordinate.
std::vector<std::pair<double, double>> line_along(const FieldSample& f, std::size_t axis, std::size_t coordinate) {
    const std::size_t N = f.dim();
    std::vector<double> top(N, -std::numeric_limits<double>::infinity());
    for (const auto& p : f.points)
        for (std::size_t l = 0; l < N; ++l) top[l] = std::max(top[l], p[l]);
    std::vector<std::pair<double, double>> line;
    for (std::size_t i = 0; i < f.points.size(); ++i) {
        bool on = true;
        for (std::size_t l = 0; l < N; ++l)
            if (l != axis && f.points[i][l] != top[l]) on = false;
        if (on) line.emplace_back(f.points[i][axis], f.values[coordinate][i]);
    }
    std::sort(line.begin(), line.end());
    return line;
}

int cmd_analyze(const AnalyzeArgs& a) {
    const fs::path input(a.input);
    const auto field = read_field_csv(input);
    double alpha = a.alpha;
    std::vector<double> H = a.H.empty() ? std::vector<double>{} : parse_real_list(a.H);
    if (alpha == 0.0 || H.empty()) {
        auto side = input;
        side.replace_extension(".json");
        require(fs::exists(side), ErrorKind::Configuration, "give --alpha and --H or provide " + side.string());
        const auto j = read_json(side);
        if (alpha == 0.0) alpha = j.at("provenance").at("alpha").get<double>();
        if (H.empty()) H = j.at("provenance").at("H").get<std::vector<double>>();
    }
    const HurstVector hurst{alpha, H};
    hurst.validate_ordering();
    require(hurst.dim() == field.dim(), ErrorKind::Configuration, "H does not match the field dimension");
    require(a.axis >= 1 && static_cast<std::size_t>(a.axis) <= hurst.dim(), ErrorKind::Configuration,
            "--axis out of range");
    const auto axis = static_cast<std::size_t>(a.axis - 1);

    std::vector<Check> checks;
    for (std::size_t c = 0; c < field.coordinates(); ++c) {
        const auto line = line_along(field, axis, c);
        require(line.size() >= 2, ErrorKind::Input, "no regular line along the requested axis");
        std::vector<double> v;
        for (const auto& [t, x] : line) v.push_back(x);
        const double dt = (line.back().first - line.front().first) / static_cast<double>(line.size() - 1);
        const auto lags = default_lags();
        const auto r = empirical_axis_exponent(v, dt, lags, axis, hurst);
        auto chk = make_check("Hölder exponent, coordinate " + std::to_string(c + 1) + ", axis " +
                                  std::to_string(a.axis),
                              r.estimated_exponent, r.theory, 0.07);
        chk.detail = r.degenerate ? "degenerate: constant increments"
                                  : "median-increment slope " + std::to_string(r.median_slope);
        checks.push_back(std::move(chk));
        if (field.dim() == 1 && field.coordinates() == 1 && v.size() >= kMinBoxCountingPoints) {
            const auto g = graph_box_dimension(v, dyadic_scales(2, 10));
            checks.push_back(make_check("box-counting graph dimension", g.estimate,
                                        hausdorff_dims(hurst, 1).graph, 0.15));
        }
    }
    if (field.points.size() >= kMinBoxCountingPoints && field.coordinates() >= 2) {
        std::vector<std::vector<double>> pts(field.points.size(), std::vector<double>(field.coordinates()));
        double extent = 0.0;
        for (std::size_t c = 0; c < field.coordinates(); ++c) {
            const auto [mn, mx] = std::minmax_element(field.values[c].begin(), field.values[c].end());
            extent = std::max(extent, *mx - *mn);
            for (std::size_t i = 0; i < pts.size(); ++i) pts[i][c] = field.values[c][i];
        }
        std::vector<double> scales;
        for (int k = 1; k <= 6; ++k) scales.push_back(extent * std::ldexp(1.0, -k));
        const auto r = box_counting_dimension(pts, scales);
        checks.push_back(make_check("box-counting range dimension", r.estimate,
                                    hausdorff_dims(hurst, static_cast<int>(field.coordinates())).range, 0.3));
    }
    const auto report = checks_json(checks);
    if (a.out.empty())
        std::cout << report.dump(2) << '\n';
    else
        write_json(a.out, report);
    return kExitOk;
}

struct VerifyArgs {
    std::string suite;
    VerifyOptions options;
    std::string out;
};

int cmd_verify(const VerifyArgs& a) {
    const auto checks = run_suite(a.suite, a.options);
    auto report = checks_json(checks);
    report["suite"] = a.suite;
    report["options"] = {{"seed", a.options.seed},
                         {"replicates", a.options.replicates},
                         {"seeds", a.options.seeds},
                         {"draws", a.options.draws}};
    if (a.out.empty()) {
        std::cout << report.dump(2) << '\n';
    } else {
        write_json(a.out, report);
        for (const auto& c : checks) std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << '\n';
    }
    return report["pass"].get<bool>() ? kExitOk : kExitTolerance;
}

struct DimsArgs {
    double alpha = 0.0;
    std::string H;
    int d = 1;
};

int cmd_dims(const DimsArgs& a) {
    const HurstVector hurst{a.alpha, parse_real_list(a.H)};
    const auto dims = hausdorff_dims(hurst, a.d);
    nlohmann::json j{{"range", dims.range}, {"graph", dims.graph}, {"rho_cube", dims.rho_cube}};
    std::cout << j.dump(2) << '\n';
    return kExitOk;
}

struct RngArgs {
    double alpha = 1.5;
    double skewness = 0.0;
    double scale = 1.0;
    std::size_t count = 1000000;
    std::uint64_t seed = 0;
    std::string samples;
};

int cmd_rng_check(const RngArgs& a) {
    const StableParams params{a.alpha, a.scale, a.skewness};
    params.validate();
    std::vector<double> x(a.count);
    sample_stable_block(params, derive_stream(a.seed, 0), 0, x);
    nlohmann::json j{{"alpha", a.alpha}, {"scale", a.scale}, {"skewness", a.skewness}, {"count", a.count},
                     {"seed", a.seed}};
    if (a.skewness == 0.0 && a.count >= 1000) j["scale_estimate"] = estimate_scale(x, a.alpha) / 1.0;
    if (a.count >= 10000) {
        std::vector<double> mag(x.size());
        std::transform(x.begin(), x.end(), mag.begin(), [](double v) { return std::abs(v); });
        const double lo = quantile(mag, 0.995);
        const double hi = quantile(mag, 0.9999);
        if (a.alpha < 2.0) j["tail_slope"] = tail_slope(x, lo, hi, 16);
    }
    if (a.alpha == 2.0 && a.count >= 2) j["variance"] = variance(x);
    if (!a.samples.empty()) {
        std::vector<double> idx(x.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<double>(i);
        write_xy_csv(a.samples, idx, x, "counter", "x");
    }
    std::cout << j.dump(2) << '\n';
    return kExitOk;
}

struct WaveletArgs {
    int order = 6;
    int level = 10;
    std::string kind = "mother";
    double H = 0.8;
    double alpha = 1.5;
    double window = 0.0;
    std::string out;
};

int cmd_wavelet_dump(const WaveletArgs& a) {
    const auto psi = std::make_shared<const MotherWavelet>(build_daubechies(a.order, a.level));
    std::vector<double> x;
    std::vector<double> y;
    if (a.kind == "mother") {
        for (std::size_t i = 0; i < psi->values.size(); ++i) {
            x.push_back(-psi->support_halfwidth + static_cast<double>(i) * psi->grid_spacing);
            y.push_back(psi->values[i]);
        }
    } else {
        const auto dir = a.kind == "primitive" ? Direction::Primitive : Direction::Derivative;
        const double window = a.window > 0.0 ? a.window : default_window(*psi);
        const auto phi = fractionalize(psi, a.H, a.alpha, dir, window);
        for (std::size_t i = 0; i < phi.values.size(); ++i) {
            x.push_back(phi.x_at(i));
            y.push_back(phi.values[i]);
        }
    }
    write_xy_csv(a.out, x, y);
    std::cout << a.out << '\n';
    return kExitOk;
}

// Splice `key = value` lines of --config files in front of the subcommand's own
// flags, so that flags given on the command line win.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    std::vector<std::string> rest;
    std::vector<std::string> from_file;
    for (std::size_t i = 0; i < args.size(); ++i) {
        std::string path;
        if (args[i] == "--config") {
            require(i + 1 < args.size(), ErrorKind::Configuration, "--config needs a file");
            path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
            continue;
        }
        for (const auto& [k, v] : read_config(path)) from_file.push_back("--" + k + "=" + v);
    }
    if (from_file.empty()) return rest;
    // Insert after the (sub)command path: the first non-option words.
    std::size_t at = 0;
    while (at < rest.size() && rest[at].rfind("-", 0) != 0 && at < 2) {
        ++at;
        if (at == 1 && rest[0] != "wavelet") break;
    }
    rest.insert(rest.begin() + static_cast<std::ptrdiff_t>(at), from_file.begin(), from_file.end());
    return rest;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Linear fractional stable sheets: synthesis, analysis, verification"};
    app.require_subcommand(1);
    app.fallthrough();
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    int workers = 0;
    app.add_option("--workers", workers, "worker threads (0: hardware concurrency)")->check(CLI::NonNegativeNumber);

    FieldArgs sim;
    auto* simulate = app.add_subcommand("simulate", "synthesize a field on a regular grid; writes CSV + JSON sidecar");
    add_model_options(simulate, sim);
    simulate->add_option("--d", sim.d, "number of independent coordinates");
    simulate->add_option("--method", sim.method, "direct | wavelet-exact | wavelet-iid");
    simulate->add_option("--n", sim.n, "scale cutoff of the wavelet series");
    simulate->add_option("--M", sim.M, "spatial cutoff of the wavelet series");
    simulate->add_option("--spacing", sim.spacing, "noise cell width (default: finest grid step)");
    simulate->add_option("--tail-tol", sim.tail_tol, "omitted kernel alpha-mass per evaluation point");
    simulate->add_option("--order", sim.order, "vanishing moments of the Daubechies wavelet");
    simulate->add_option("--level", sim.level, "dyadic refinement level of the wavelet grid");
    simulate->add_option("--grid", sim.grid, "points per axis, e.g. 64x64");
    simulate->add_option("--lo", sim.lo, "lower grid corner, one value or one per axis");
    simulate->add_option("--hi", sim.hi, "upper grid corner, one value or one per axis");
    simulate->add_option("--seed", sim.seed, "root seed");
    simulate->add_option("--out", sim.out, "output directory (default: current)");

    FieldArgs co;
    co.method = "wavelet-exact";
    auto* coeffs = app.add_subcommand("coeffs", "wavelet coefficients of the truncated series");
    add_model_options(coeffs, co);
    coeffs->add_option("--method", co.method, "wavelet-exact | wavelet-iid");
    coeffs->add_option("--n", co.n, "scale cutoff");
    coeffs->add_option("--M", co.M, "spatial cutoff");
    coeffs->add_option("--spacing", co.spacing, "noise cell width (default: 2^-(n+3))");
    coeffs->add_option("--tail-tol", co.tail_tol, "omitted kernel alpha-mass");
    coeffs->add_option("--order", co.order, "vanishing moments");
    coeffs->add_option("--level", co.level, "refinement level");
    coeffs->add_option("--seed", co.seed, "root seed");
    coeffs->add_option("--out", co.out, "output directory (default: current)");

    AnalyzeArgs an;
    auto* analyze = app.add_subcommand("analyze", "exponent and dimension estimates for a simulated field");
    analyze->add_option("--input", an.input, "field CSV")->required();
    analyze->add_option("--alpha", an.alpha, "stability index (default: from the sidecar)");
    analyze->add_option("--H", an.H, "Hurst indices (default: from the sidecar)");
    analyze->add_option("--axis", an.axis, "axis of the exponent transect, 1-based");
    analyze->add_option("--out", an.out, "report JSON (default: stdout)");

    VerifyArgs ve;
    ve.options.replicates = 2000;
    auto* verify = app.add_subcommand("verify", "run a verification suite; exit 0 iff all checks pass");
    verify->add_option("--suite", ve.suite, "rng | wavelet | scale | exponent | dims | all")->required();
    verify->add_option("--replicates", ve.options.replicates, "Monte Carlo replicates for scale checks");
    verify->add_option("--seeds", ve.options.seeds, "independent paths for per-seed checks");
    verify->add_option("--draws", ve.options.draws, "draws per law in the rng suite");
    verify->add_option("--seed", ve.options.seed, "root seed");
    verify->add_option("--out", ve.out, "report JSON (default: stdout)");

    DimsArgs di;
    auto* dims = app.add_subcommand("dims", "closed-form Hausdorff dimensions of range and graph");
    dims->add_option("--alpha", di.alpha, "stability index")->required();
    dims->add_option("--H", di.H, "Hurst indices, nondecreasing")->required();
    dims->add_option("--d", di.d, "number of coordinates");

    RngArgs rn;
    auto* rng = app.add_subcommand("rng-check", "draw stable variates and report tail and scale statistics");
    rng->add_option("--alpha", rn.alpha, "stability index");
    rng->add_option("--skewness", rn.skewness, "skewness");
    rng->add_option("--scale", rn.scale, "scale");
    rng->add_option("--count", rn.count, "number of draws");
    rng->add_option("--seed", rn.seed, "root seed");
    rng->add_option("--samples", rn.samples, "write the draws to this CSV");

    WaveletArgs wa;
    auto* wavelet = app.add_subcommand("wavelet", "wavelet utilities");
    wavelet->require_subcommand(1);
    auto* dump = wavelet->add_subcommand("dump", "sample a wavelet to CSV (x,value)");
    dump->add_option("--order", wa.order, "vanishing moments");
    dump->add_option("--level", wa.level, "refinement level");
    dump->add_option("--kind", wa.kind, "mother | primitive | derivative")
        ->check(CLI::IsMember({"mother", "primitive", "derivative"}));
    dump->add_option("--H", wa.H, "Hurst index of the fractional wavelet");
    dump->add_option("--alpha", wa.alpha, "stability index of the fractional wavelet");
    dump->add_option("--window", wa.window, "half-width of the sampling window (0: default)");
    dump->add_option("--out", wa.out, "output CSV")->required();

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        args = expand_config(args);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    } catch (const Error& e) {
        std::cerr << "lfss: " << e.what() << '\n';
        return exit_code(e.kind());
    }

    try {
        if (workers > 0) set_worker_count(static_cast<std::size_t>(workers));
        if (*simulate) return cmd_simulate(sim);
        if (*coeffs) return cmd_coeffs(co);
        if (*analyze) return cmd_analyze(an);
        if (*verify) {
            const auto& names = suite_names();
            if (std::find(names.begin(), names.end(), ve.suite) == names.end()) {
                std::cerr << "lfss verify: unknown suite '" << ve.suite
                          << "'; expected rng, wavelet, scale, exponent, dims or all\n";
                return kExitConfig;
            }
            return cmd_verify(ve);
        }
        if (*dims) return cmd_dims(di);
        if (*rng) return cmd_rng_check(rn);
        if (*dump) return cmd_wavelet_dump(wa);
    } catch (const Error& e) {
        std::cerr << "lfss: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "lfss: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitConfig;
}
