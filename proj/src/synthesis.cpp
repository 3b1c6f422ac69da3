#include "lfss/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include <Eigen/Dense>

#include "fft.hpp"
#include "lfss/errors.hpp"
#include "lfss/philox.hpp"
#include "lfss/stable_rng.hpp"

namespace lfss {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Contract a row-major tensor with one matrix per axis (m_l x n_l); a null
// entry keeps the axis. Returns the row-major result with dims (m_0, ..., m_{N-1}).
std::vector<double> contract(std::span<const double> input, std::vector<std::size_t> dims,
                             const std::vector<const RowMatrix*>& mats) {
    const std::size_t N = dims.size();
    std::vector<double> tensor;
    for (std::size_t step = 0; step < N; ++step) {
        const std::size_t l = N - 1 - step;
        const std::size_t n = dims.back();
        const double* data = step == 0 ? input.data() : tensor.data();
        const std::size_t P = (step == 0 ? input.size() : tensor.size()) / n;
        Eigen::Map<const RowMatrix> T(data, static_cast<Eigen::Index>(P), static_cast<Eigen::Index>(n));
        RowMatrix out;
        std::size_t m = n;
        if (mats[l] != nullptr) {
            require(static_cast<std::size_t>(mats[l]->cols()) == n, ErrorKind::Input, "contraction size mismatch");
            m = static_cast<std::size_t>(mats[l]->rows());
            out.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(P));
            out.noalias() = *mats[l] * T.transpose();
        } else {
            out = T.transpose();
        }
        tensor.assign(out.data(), out.data() + out.size());
        dims.pop_back();
        dims.insert(dims.begin(), m);
    }
    return tensor;
}

std::vector<std::size_t> noise_dims(const NoiseGrid& noise) {
    std::vector<std::size_t> dims;
    for (const auto& a : noise.axes()) dims.push_back(a.cells());
    return dims;
}

RowMatrix kernel_rows(std::span<const double> t, const Partition1D& part, double q) {
    RowMatrix A(static_cast<Eigen::Index>(t.size()), static_cast<Eigen::Index>(part.cells()));
    for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t c = 0; c < part.cells(); ++c)
            A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
                kernel_factor_cell_average(t[i], part.edges[c], part.edges[c + 1], q);
    return A;
}

void check_noise_covers(std::size_t axis, std::span<const double> coords, const NoiseGrid& noise,
                        const KernelSpec& spec, double tail_tol) {
    const auto& part = noise.axis(axis);
    const double q = spec.hurst.exponent(axis);
    const double share = tail_tol / static_cast<double>(spec.dim());
    double need_lo = 0.0;
    double need_hi = 0.0;
    double reach = 0.0;
    for (double u : coords) {
        need_hi = std::max(need_hi, u);
        if (std::abs(u) > std::abs(reach)) reach = u;
    }
    // the tail radius grows with |u|
    if (reach != 0.0 && !std::isinf(tail_tol))
        need_lo = -required_tail_radius(reach, q, spec.hurst.alpha, share, spec.quadrature);
    if (part.upper() < need_hi - 1e-9 * std::max(1.0, need_hi) || part.lower() > need_lo * (1.0 - 1e-9)) {
        std::ostringstream os;
        os << "noise domain [" << part.lower() << ", " << part.upper() << "] on axis " << axis + 1
           << " is too small; the kernel tail tolerance needs [" << need_lo << ", " << need_hi << "]";
        throw Error(ErrorKind::Tail, os.str());
    }
}

void check_spec_matches(const NoiseGrid& noise, const KernelSpec& spec) {
    require(noise.dim() == spec.dim(), ErrorKind::Configuration, "noise and kernel dimensions differ");
    require(noise.alpha() == spec.hurst.alpha, ErrorKind::Configuration, "noise and kernel alpha differ");
}

Provenance base_provenance(Method m, const KernelSpec& spec) {
    Provenance p;
    p.method = m;
    p.alpha = spec.hurst.alpha;
    p.H = spec.hurst.H;
    p.kappa = spec.kappa;
    return p;
}

void describe_noise(Provenance& p, const NoiseGrid& noise) {
    p.streams.push_back(noise.stream());
    p.skewness = noise.skewness();
    p.noise_lower.clear();
    p.noise_upper.clear();
    double h = 0.0;
    for (const auto& a : noise.axes()) {
        p.noise_lower.push_back(a.lower());
        p.noise_upper.push_back(a.upper());
        h = std::max(h, a.min_width());
    }
    p.noise_spacing = h;
    p.noise_cells = noise.cells();
}

// psi^H(2^j t - k) - psi^H(-k), weighted by 2^(-j H)
double wavelet_weight(const FractionalWavelet& prim, double H, const WaveletIndex& idx, double t) {
    if (t == 0.0) return 0.0;
    const auto k = static_cast<double>(idx.k);
    return std::pow(2.0, -idx.j * H) *
           (prim.value(std::ldexp(t, idx.j) - k) - prim.value(-k));
}

RowMatrix wavelet_rows(std::span<const double> t, const std::vector<WaveletIndex>& idx,
                       const FractionalWavelet& prim, double H) {
    RowMatrix W(static_cast<Eigen::Index>(t.size()), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t p = 0; p < idx.size(); ++p)
            W(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(p)) = wavelet_weight(prim, H, idx[p], t[i]);
    return W;
}

// Rows 2^(j/alpha) * (cell average of psi(2^j . - k)) over the noise cells.
RowMatrix coefficient_rows(const std::vector<WaveletIndex>& idx, const Partition1D& part, const MotherWavelet& psi,
                           double alpha) {
    RowMatrix B = RowMatrix::Zero(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(part.cells()));
    const auto& e = part.edges;
    for (std::size_t p = 0; p < idx.size(); ++p) {
        const int j = idx[p].j;
        const auto k = static_cast<double>(idx[p].k);
        const double lo = std::ldexp(k - psi.support_halfwidth, -j);
        const double hi = std::ldexp(k + psi.support_halfwidth, -j);
        if (hi <= e.front() || lo >= e.back()) continue;
        auto c0 = static_cast<std::size_t>(std::upper_bound(e.begin(), e.end(), lo) - e.begin());
        c0 = c0 > 0 ? c0 - 1 : 0;
        const double amp = std::pow(2.0, j / alpha);
        for (std::size_t c = c0; c < part.cells() && e[c] < hi; ++c) {
            const double a = std::ldexp(e[c], j) - k;
            const double b = std::ldexp(e[c + 1], j) - k;
            B(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(c)) =
                amp * (psi.integral_to(b) - psi.integral_to(a)) / (b - a);
        }
    }
    return B;
}

void check_in_truncation(const std::vector<std::vector<double>>& points, const TruncationSpec& trunc) {
    for (const auto& pt : points)
        for (double x : pt)
            if (std::abs(x) > trunc.M) {
                std::ostringstream os;
                os << "point coordinate " << x << " lies outside [-M, M] with M = " << trunc.M;
                throw Error(ErrorKind::TruncationDomain, os.str());
            }
}

void check_resolution(const NoiseGrid& noise, int max_j) {
    const double need = std::ldexp(1.0, -(max_j + 3));
    for (std::size_t l = 0; l < noise.dim(); ++l) {
        if (noise.axis(l).min_width() > need * (1.0 + 1e-12)) {
            std::ostringstream os;
            os << "noise spacing " << noise.axis(l).min_width() << " on axis " << l + 1
               << " cannot resolve wavelets of scale j = " << max_j << "; need spacing <= " << need;
            throw Error(ErrorKind::Resolution, os.str());
        }
    }
}

// The longest run of equal-width cells: (first cell, count, width).
struct UniformRun {
    std::size_t first = 0;
    std::size_t count = 0;
    double h = 0.0;
};

UniformRun longest_uniform_run(const Partition1D& part) {
    UniformRun best;
    std::size_t i = 0;
    while (i < part.cells()) {
        const double h = part.width(i);
        std::size_t j = i + 1;
        while (j < part.cells() && std::abs(part.width(j) - h) <= 1e-9 * h) ++j;
        if (j - i > best.count) best = {i, j - i, h};
        i = j;
    }
    return best;
}

std::optional<TensorGrid> as_tensor_grid(const std::vector<std::vector<double>>& points) {
    if (points.empty()) return std::nullopt;
    const std::size_t N = points.front().size();
    TensorGrid g;
    g.axes.resize(N);
    for (std::size_t l = 0; l < N; ++l) {
        std::vector<double> u;
        for (const auto& p : points) u.push_back(p[l]);
        std::sort(u.begin(), u.end());
        u.erase(std::unique(u.begin(), u.end()), u.end());
        g.axes[l] = std::move(u);
    }
    if (g.size() != points.size()) return std::nullopt;
    const auto expanded = g.points();
    if (expanded != points) return std::nullopt;
    return g;
}

// The single axis of a grid that varies, when it is long and evenly spaced.
std::optional<std::size_t> regular_line(const TensorGrid& grid) {
    std::optional<std::size_t> line;
    for (std::size_t l = 0; l < grid.dim(); ++l) {
        if (grid.axes[l].size() == 1) continue;
        if (line) return std::nullopt;
        line = l;
    }
    if (!line) return std::nullopt;
    const auto& a = grid.axes[*line];
    if (a.size() < 1024) return std::nullopt;
    const double dt = (a.back() - a.front()) / static_cast<double>(a.size() - 1);
    if (!(dt > 0.0)) return std::nullopt;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - (a.front() + static_cast<double>(i) * dt)) > 1e-12 * std::max(1.0, std::abs(a[i])))
            return std::nullopt;
    return line;
}

std::vector<std::pair<double, double>> bounds_of(const std::vector<std::vector<double>>& points) {
    require(!points.empty(), ErrorKind::Input, "no evaluation points");
    const std::size_t N = points.front().size();
    std::vector<std::pair<double, double>> b(N, {points.front()[0], points.front()[0]});
    for (std::size_t l = 0; l < N; ++l) b[l] = {points.front()[l], points.front()[l]};
    for (const auto& p : points) {
        require(p.size() == N, ErrorKind::Input, "evaluation points differ in dimension");
        for (std::size_t l = 0; l < N; ++l) {
            b[l].first = std::min(b[l].first, p[l]);
            b[l].second = std::max(b[l].second, p[l]);
        }
    }
    return b;
}

}  // namespace

const char* to_string(Method m) noexcept {
    switch (m) {
        case Method::Direct: return "direct";
        case Method::WaveletExact: return "wavelet-exact";
        case Method::WaveletIid: return "wavelet-iid";
    }
    return "unknown";
}

Method method_from_string(const std::string& name) {
    if (name == "direct") return Method::Direct;
    if (name == "wavelet-exact") return Method::WaveletExact;
    if (name == "wavelet-iid") return Method::WaveletIid;
    throw Error(ErrorKind::Configuration, "unknown method '" + name + "' (direct, wavelet-exact, wavelet-iid)");
}

std::int64_t TruncationSpec::k_max() const {
    return static_cast<std::int64_t>(std::floor(M * std::ldexp(1.0, n + 1)));
}

void TruncationSpec::validate() const {
    require(n >= 0 && n <= 20, ErrorKind::ParameterDomain, "truncation n must lie in [0, 20]");
    require(std::isfinite(M) && M > 0.0, ErrorKind::ParameterDomain, "truncation M must be positive");
}

std::vector<WaveletIndex> axis_indices(const TruncationSpec& trunc) {
    trunc.validate();
    std::vector<WaveletIndex> out;
    const auto K = trunc.k_max();
    for (int j = -trunc.n; j <= trunc.n; ++j)
        for (std::int64_t k = -K; k <= K; ++k) out.push_back({j, k});
    return out;
}

std::size_t TensorGrid::size() const noexcept {
    if (axes.empty()) return 0;
    std::size_t n = 1;
    for (const auto& a : axes) n *= a.size();
    return n;
}

std::vector<std::vector<double>> TensorGrid::points() const {
    std::vector<std::vector<double>> out;
    const std::size_t total = size();
    out.reserve(total);
    std::vector<std::size_t> idx(dim(), 0);
    for (std::size_t c = 0; c < total; ++c) {
        std::vector<double> p(dim());
        for (std::size_t l = 0; l < dim(); ++l) p[l] = axes[l][idx[l]];
        out.push_back(std::move(p));
        for (std::size_t l = dim(); l-- > 0;) {
            if (++idx[l] < axes[l].size()) break;
            idx[l] = 0;
        }
    }
    return out;
}

TensorGrid TensorGrid::regular(std::size_t N, double lo, double hi, std::size_t n) {
    require(n >= 2 && hi > lo, ErrorKind::ParameterDomain, "regular grid needs n >= 2 and hi > lo");
    std::vector<double> a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return TensorGrid{std::vector<std::vector<double>>(N, a)};
}

std::vector<Partition1D> noise_partitions(const std::vector<std::pair<double, double>>& bounds,
                                          const KernelSpec& spec, const NoiseOptions& options) {
    require(bounds.size() == spec.dim(), ErrorKind::Configuration, "bounds and kernel dimensions differ");
    require(options.spacing > 0.0 && options.buffer >= 0.0, ErrorKind::ParameterDomain,
            "noise spacing must be positive and buffer nonnegative");
    require(options.axis_spacing.empty() || options.axis_spacing.size() == spec.dim(), ErrorKind::Configuration,
            "per-axis noise spacing must list one value per axis");
    std::vector<Partition1D> axes;
    const double share = options.tail_tol / static_cast<double>(spec.dim());
    for (std::size_t l = 0; l < spec.dim(); ++l) {
        const auto [lo, hi] = bounds[l];
        const double h = options.spacing_of(l);
        require(h > 0.0, ErrorKind::ParameterDomain, "noise spacing must be positive");
        const double top = std::max(h, std::ceil(std::max(hi, 0.0) / h) * h);
        const double bottom = std::floor((std::min(lo, 0.0) - options.buffer) / h) * h;
        const double reach = std::max(std::abs(lo), std::abs(hi));
        const double far = reach > 0.0 ? required_tail_radius(reach, spec.hurst.exponent(l), spec.hurst.alpha, share,
                                                              spec.quadrature)
                                       : 0.0;
        axes.push_back(Partition1D::graded(bottom, top, h, far, options.ratio));
    }
    return axes;
}

FieldSample direct_synthesis(const std::vector<std::vector<double>>& points, const NoiseGrid& noise,
                             const KernelSpec& spec, double tail_tol) {
    check_spec_matches(noise, spec);
    FieldSample out;
    out.points = points;
    out.provenance = base_provenance(Method::Direct, spec);
    out.provenance.tail_tol = tail_tol;
    describe_noise(out.provenance, noise);
    if (points.empty()) {
        out.values.assign(1, {});
        return out;
    }
    if (auto grid = as_tensor_grid(points)) {
        if (auto line = regular_line(*grid)) {
            std::vector<double> fixed;
            for (const auto& a : grid->axes) fixed.push_back(a.front());
            const auto& ax = grid->axes[*line];
            const double dt = (ax.back() - ax.front()) / static_cast<double>(ax.size() - 1);
            out.values.push_back(direct_transect(*line, fixed, ax.front(), dt, ax.size(), noise, spec, tail_tol));
            return out;
        }
        out.values.push_back(direct_grid(*grid, noise, spec, tail_tol));
        return out;
    }
    const std::size_t N = spec.dim();
    for (std::size_t l = 0; l < N; ++l) {
        std::vector<double> coords;
        for (const auto& p : points) coords.push_back(p[l]);
        check_noise_covers(l, coords, noise, spec, tail_tol);
    }
    const auto dims = noise_dims(noise);
    const auto Z = noise.increments();
    std::vector<double> values(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        std::vector<RowMatrix> rows(N);
        std::vector<const RowMatrix*> mats(N);
        for (std::size_t l = 0; l < N; ++l) {
            rows[l] = kernel_rows(std::span<const double>(&points[i][l], 1), noise.axis(l), spec.hurst.exponent(l));
            mats[l] = &rows[l];
        }
        values[i] = spec.kappa * contract(Z, dims, mats)[0];
    }
    out.values.push_back(std::move(values));
    return out;
}

std::vector<double> direct_grid(const TensorGrid& grid, const NoiseGrid& noise, const KernelSpec& spec,
                                double tail_tol) {
    check_spec_matches(noise, spec);
    require(grid.dim() == spec.dim(), ErrorKind::Input, "grid and kernel dimensions differ");
    const std::size_t N = spec.dim();
    std::vector<RowMatrix> rows(N);
    std::vector<const RowMatrix*> mats(N);
    for (std::size_t l = 0; l < N; ++l) {
        check_noise_covers(l, grid.axes[l], noise, spec, tail_tol);
        rows[l] = kernel_rows(grid.axes[l], noise.axis(l), spec.hurst.exponent(l));
        mats[l] = &rows[l];
    }
    auto v = contract(noise.increments(), noise_dims(noise), mats);
    for (double& x : v) x *= spec.kappa;
    return v;
}

std::vector<double> direct_transect(std::size_t axis, std::span<const double> fixed, double t0, double dt,
                                    std::size_t count, const NoiseGrid& noise, const KernelSpec& spec,
                                    double tail_tol) {
    check_spec_matches(noise, spec);
    const std::size_t N = spec.dim();
    require(axis < N && fixed.size() == N, ErrorKind::Input, "transect axis or fixed point has the wrong dimension");
    require(count >= 1 && dt > 0.0, ErrorKind::ParameterDomain, "transect needs count >= 1 and dt > 0");

    std::vector<double> t(count);
    for (std::size_t i = 0; i < count; ++i) t[i] = t0 + static_cast<double>(i) * dt;
    check_noise_covers(axis, t, noise, spec, tail_tol);

    // Collapse every other axis onto its fixed coordinate.
    std::vector<RowMatrix> rows(N);
    std::vector<const RowMatrix*> mats(N, nullptr);
    for (std::size_t l = 0; l < N; ++l) {
        if (l == axis) continue;
        check_noise_covers(l, fixed.subspan(l, 1), noise, spec, tail_tol);
        rows[l] = kernel_rows(fixed.subspan(l, 1), noise.axis(l), spec.hurst.exponent(l));
        mats[l] = &rows[l];
    }
    const std::vector<double> z = contract(noise.increments(), noise_dims(noise), mats);

    const auto& part = noise.axis(axis);
    const double q = spec.hurst.exponent(axis);
    const double p = q + 1.0;
    UniformRun run = longest_uniform_run(part);
    if (run.count > 0)
        run.h = (part.edges[run.first + run.count] - part.edges[run.first]) / static_cast<double>(run.count);
    const double step_ratio = dt / run.h;
    const double offset = (t0 - part.edges[run.first]) / run.h;
    const bool aligned = run.count >= 16 && std::abs(step_ratio - std::round(step_ratio)) < 1e-9 &&
                         std::round(step_ratio) >= 1.0 &&
                         std::abs(offset - std::round(offset)) < 1e-9 * std::max(1.0, std::abs(offset));

    std::vector<double> out(count, 0.0);
    if (!aligned) {
        const RowMatrix A = kernel_rows(t, part, q);
        Eigen::Map<const Eigen::VectorXd> zv(z.data(), static_cast<Eigen::Index>(z.size()));
        Eigen::Map<Eigen::VectorXd> ov(out.data(), static_cast<Eigen::Index>(count));
        ov.noalias() = A * zv;
    } else {
        const auto m = static_cast<std::int64_t>(std::llround(step_ratio));
        const auto r = static_cast<std::int64_t>(std::llround(offset));
        const auto nc = static_cast<std::int64_t>(run.count);
        // (t_i - s)_+^q averaged over core cell c depends on d = i m - c only.
        const std::int64_t dmin = -(nc - 1);
        const std::int64_t dmax = static_cast<std::int64_t>(count - 1) * m;
        std::vector<double> K(static_cast<std::size_t>(dmax - dmin + 1));
        auto P = [&](std::int64_t steps) {
            return steps > 0 ? std::pow(static_cast<double>(steps) * run.h, p) : 0.0;
        };
        for (std::int64_t d = dmin; d <= dmax; ++d)
            K[static_cast<std::size_t>(d - dmin)] = (P(r + d) - P(r + d - 1)) / (p * run.h);
        const std::span<const double> zc(z.data() + run.first, run.count);
        const auto conv = detail::convolve(zc, K);
        // the (-s)_+^q part does not depend on t
        double constant = 0.0;
        for (std::size_t c = 0; c < run.count; ++c) {
            const double a = part.edges[run.first + c];
            const double b = part.edges[run.first + c + 1];
            const double avg = (positive_power(-a, p) - positive_power(-b, p)) / (p * (b - a));
            constant += avg * zc[c];
        }
        for (std::size_t i = 0; i < count; ++i) {
            const std::int64_t idx = static_cast<std::int64_t>(i) * m - dmin;
            out[i] = conv[static_cast<std::size_t>(idx)] - constant;
        }
        // graded cells outside the uniform run
        for (std::size_t c = 0; c < part.cells(); ++c) {
            if (c >= run.first && c < run.first + run.count) continue;
            const double a = part.edges[c];
            const double b = part.edges[c + 1];
            for (std::size_t i = 0; i < count; ++i) out[i] += kernel_factor_cell_average(t[i], a, b, q) * z[c];
        }
        for (std::size_t i = 0; i < count; ++i)
            if (t[i] == 0.0) out[i] = 0.0;
    }
    for (double& x : out) x *= spec.kappa;
    return out;
}

double CoefficientArray::at(std::span<const std::size_t> idx) const {
    require(idx.size() == dim(), ErrorKind::Input, "coefficient index dimension mismatch");
    std::size_t c = 0;
    for (std::size_t l = 0; l < dim(); ++l) {
        require(idx[l] < axes[l].size(), ErrorKind::Input, "coefficient index out of range");
        c = c * axes[l].size() + idx[l];
    }
    return values[c];
}

CoefficientArray compute_coefficients(const NoiseGrid& noise, const std::vector<std::vector<WaveletIndex>>& axes,
                                      const MotherWavelet& psi) {
    require(axes.size() == noise.dim(), ErrorKind::Configuration, "index lattice and noise dimensions differ");
    int max_j = std::numeric_limits<int>::min();
    for (const auto& a : axes) {
        require(!a.empty(), ErrorKind::Input, "empty coefficient index list");
        for (const auto& w : a) max_j = std::max(max_j, w.j);
    }
    check_resolution(noise, max_j);
    const std::size_t N = noise.dim();
    std::vector<RowMatrix> rows(N);
    std::vector<const RowMatrix*> mats(N);
    for (std::size_t l = 0; l < N; ++l) {
        rows[l] = coefficient_rows(axes[l], noise.axis(l), psi, noise.alpha());
        mats[l] = &rows[l];
    }
    CoefficientArray out;
    out.axes = axes;
    out.method = Method::WaveletExact;
    out.values = contract(noise.increments(), noise_dims(noise), mats);
    return out;
}

CoefficientArray sample_coefficients_iid(const TruncationSpec& trunc, std::size_t N, double alpha, double skewness,
                                         double psi_norm, std::uint64_t stream) {
    require(N >= 1 && N <= 4, ErrorKind::Configuration, "iid coefficients support 1 <= N <= 4");
    require(psi_norm >= 0.0, ErrorKind::ParameterDomain, "psi norm must be nonnegative");
    const StableParams params{alpha, std::pow(psi_norm, static_cast<double>(N)), skewness};
    params.validate();
    CoefficientArray out;
    out.method = Method::WaveletIid;
    out.axes.assign(N, axis_indices(trunc));
    std::size_t total = 1;
    for (const auto& a : out.axes) total *= a.size();
    out.values.resize(total);
    std::vector<std::size_t> idx(N, 0);
    for (std::size_t c = 0; c < total; ++c) {
        // 32 bits per axis: j in the top byte, k in the low 24 bits (offset binary)
        std::uint64_t words[2] = {0, 0};
        for (std::size_t l = 0; l < N; ++l) {
            const auto& w = out.axes[l][idx[l]];
            const std::uint64_t packed = (static_cast<std::uint64_t>(w.j + 128) << 24) |
                                         (static_cast<std::uint64_t>(w.k + (1 << 23)) & 0xFFFFFFu);
            words[l / 2] |= packed << (32 * (l % 2));
        }
        out.values[c] = sample_stable(params, SeedKey{stream, words[0], words[1]});
        for (std::size_t l = N; l-- > 0;) {
            if (++idx[l] < out.axes[l].size()) break;
            idx[l] = 0;
        }
    }
    return out;
}

FieldSample wavelet_synthesis(const std::vector<std::vector<double>>& points, const CoefficientArray& coeffs,
                              const TruncationSpec& trunc, const std::vector<FractionalWavelet>& primitives,
                              const KernelSpec& spec) {
    const std::size_t N = spec.dim();
    require(coeffs.dim() == N && primitives.size() == N, ErrorKind::Configuration,
            "coefficients, primitives and kernel dimensions differ");
    for (std::size_t l = 0; l < N; ++l)
        require(primitives[l].direction == Direction::Primitive && primitives[l].exponent == spec.hurst.H[l] &&
                    primitives[l].alpha == spec.hurst.alpha,
                ErrorKind::Configuration, "fractional wavelet does not match axis " + std::to_string(l + 1));
    check_in_truncation(points, trunc);

    FieldSample out;
    out.points = points;
    out.provenance = base_provenance(coeffs.method, spec);
    out.provenance.truncation = trunc;
    out.provenance.vanishing_moments = primitives.front().base->vanishing_moments;
    out.provenance.refinement_level = primitives.front().base->refinement_level;
    out.provenance.wavelet_window = primitives.front().window;

    std::vector<std::size_t> dims;
    for (const auto& a : coeffs.axes) dims.push_back(a.size());
    if (auto grid = as_tensor_grid(points)) {
        std::vector<RowMatrix> rows(N);
        std::vector<const RowMatrix*> mats(N);
        for (std::size_t l = 0; l < N; ++l) {
            rows[l] = wavelet_rows(grid->axes[l], coeffs.axes[l], primitives[l], spec.hurst.H[l]);
            mats[l] = &rows[l];
        }
        auto v = contract(coeffs.values, dims, mats);
        for (double& x : v) x *= spec.kappa;
        out.values.push_back(std::move(v));
        return out;
    }
    std::vector<double> values(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        std::vector<RowMatrix> rows(N);
        std::vector<const RowMatrix*> mats(N);
        for (std::size_t l = 0; l < N; ++l) {
            rows[l] = wavelet_rows(std::span<const double>(&points[i][l], 1), coeffs.axes[l], primitives[l],
                                   spec.hurst.H[l]);
            mats[l] = &rows[l];
        }
        values[i] = spec.kappa * contract(coeffs.values, dims, mats)[0];
    }
    out.values.push_back(std::move(values));
    return out;
}

std::vector<double> wavelet_exact_grid(const TensorGrid& grid, const NoiseGrid& noise, const TruncationSpec& trunc,
                                       const MotherWavelet& psi, const std::vector<FractionalWavelet>& primitives,
                                       const KernelSpec& spec) {
    check_spec_matches(noise, spec);
    const std::size_t N = spec.dim();
    require(grid.dim() == N && primitives.size() == N, ErrorKind::Configuration,
            "grid, primitives and kernel dimensions differ");
    check_in_truncation(grid.points(), trunc);
    check_resolution(noise, trunc.n);
    const auto idx = axis_indices(trunc);
    std::vector<RowMatrix> rows(N);
    std::vector<const RowMatrix*> mats(N);
    for (std::size_t l = 0; l < N; ++l) {
        const RowMatrix W = wavelet_rows(grid.axes[l], idx, primitives[l], spec.hurst.H[l]);
        const RowMatrix B = coefficient_rows(idx, noise.axis(l), psi, noise.alpha());
        rows[l] = W * B;
        mats[l] = &rows[l];
    }
    auto v = contract(noise.increments(), noise_dims(noise), mats);
    for (double& x : v) x *= spec.kappa;
    return v;
}

std::vector<FractionalWavelet> make_primitives(std::shared_ptr<const MotherWavelet> psi, const KernelSpec& spec,
                                               double window) {
    std::vector<FractionalWavelet> out;
    for (std::size_t l = 0; l < spec.dim(); ++l) {
        bool reused = false;
        for (std::size_t m = 0; m < l; ++m)
            if (spec.hurst.H[m] == spec.hurst.H[l]) {
                out.push_back(out[m]);
                reused = true;
                break;
            }
        if (!reused)
            out.push_back(fractionalize(psi, spec.hurst.H[l], spec.hurst.alpha, Direction::Primitive, window));
    }
    return out;
}

FieldSample synthesize_vector(const std::vector<std::vector<double>>& points, int d, const KernelSpec& spec,
                              const SynthesisConfig& config, std::uint64_t seed) {
    require(d >= 1, ErrorKind::ParameterDomain, "d must be a positive integer");
    const auto bounds = bounds_of(points);
    require(bounds.size() == spec.dim(), ErrorKind::Configuration, "points and kernel dimensions differ");

    std::shared_ptr<const MotherWavelet> psi;
    std::vector<FractionalWavelet> primitives;
    if (config.method != Method::Direct) {
        config.truncation.validate();
        psi = std::make_shared<MotherWavelet>(build_daubechies(config.vanishing_moments, config.refinement_level));
        const double window = config.window > 0.0 ? config.window : default_window(*psi);
        primitives = make_primitives(psi, spec, window);
    }
    if (config.method == Method::WaveletExact) {
        const double need = std::ldexp(1.0, -(config.truncation.n + 3));
        for (std::size_t l = 0; l < spec.dim(); ++l) {
            const double h = config.noise.spacing_of(l);
            if (h > need * (1.0 + 1e-12)) {
                std::ostringstream os;
                os << "wavelet-exact with n = " << config.truncation.n << " needs noise spacing <= " << need
                   << ", got " << h;
                throw Error(ErrorKind::Resolution, os.str());
            }
        }
    }

    FieldSample out;
    out.points = points;
    for (int i = 0; i < d; ++i) {
        const std::uint64_t stream = derive_stream(seed, static_cast<std::uint64_t>(i));
        FieldSample one;
        if (config.method == Method::WaveletIid) {
            const double norm = psi->lp_norm(spec.hurst.alpha);
            const auto coeffs = sample_coefficients_iid(config.truncation, spec.dim(), spec.hurst.alpha,
                                                        config.noise.skewness, norm, stream);
            one = wavelet_synthesis(points, coeffs, config.truncation, primitives, spec);
            one.provenance.streams.push_back(stream);
            one.provenance.skewness = config.noise.skewness;
        } else {
            auto noise = NoiseGrid::generate(noise_partitions(bounds, spec, config.noise), spec.hurst.alpha,
                                             config.noise.skewness, stream);
            if (config.method == Method::Direct) {
                one = direct_synthesis(points, noise, spec, config.noise.tail_tol);
            } else {
                check_in_truncation(points, config.truncation);
                const auto grid = as_tensor_grid(points);
                one.points = points;
                one.provenance = base_provenance(Method::WaveletExact, spec);
                describe_noise(one.provenance, noise);
                one.provenance.truncation = config.truncation;
                one.provenance.vanishing_moments = config.vanishing_moments;
                one.provenance.refinement_level = config.refinement_level;
                one.provenance.wavelet_window = primitives.front().window;
                if (grid) {
                    one.values.push_back(
                        wavelet_exact_grid(*grid, noise, config.truncation, *psi, primitives, spec));
                } else {
                    std::vector<double> v;
                    for (const auto& p : points) {
                        TensorGrid single;
                        for (double x : p) single.axes.push_back({x});
                        v.push_back(wavelet_exact_grid(single, noise, config.truncation, *psi, primitives, spec)[0]);
                    }
                    one.values.push_back(std::move(v));
                }
            }
        }
        if (i == 0) {
            out.provenance = one.provenance;
            out.provenance.streams.clear();
        }
        out.provenance.streams.push_back(stream);
        out.values.push_back(std::move(one.values.front()));
    }
    out.provenance.seed = seed;
    out.provenance.tail_tol = config.method == Method::WaveletIid ? 0.0 : config.noise.tail_tol;
    return out;
}

std::pair<double, double> G_window(int j, std::int64_t k, const FractionalWavelet& derivative) {
    const auto kk = static_cast<double>(k);
    return {std::ldexp(derivative.support_lo + kk, -j), std::ldexp(derivative.support_hi + kk, -j)};
}

double wavelet_transform_G(std::span<const double> path, double s0, double ds, int j, std::int64_t k,
                           const FractionalWavelet& derivative) {
    require(derivative.direction == Direction::Derivative, ErrorKind::Configuration,
            "G transform needs the fractional derivative psi^{-H}");
    require(!path.empty(), ErrorKind::Input, "empty path");
    const double need = std::ldexp(1.0, -(j + 4));
    if (ds > need * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "path spacing " << ds << " is too coarse for j = " << j << "; need <= " << need;
        throw Error(ErrorKind::Resolution, os.str());
    }
    const auto [lo, hi] = G_window(j, k, derivative);
    const double s_end = s0 + static_cast<double>(path.size() - 1) * ds;
    if (s0 > lo || s_end < hi) {
        std::ostringstream os;
        os << "path covers [" << s0 << ", " << s_end << "] but G needs [" << lo << ", " << hi << "]";
        throw Error(ErrorKind::Window, os.str());
    }
    double acc = 0.0;
    const auto kk = static_cast<double>(k);
    for (std::size_t i = 0; i < path.size(); ++i) {
        const double s = s0 + static_cast<double>(i) * ds;
        if (s < lo || s > hi) continue;
        acc += path[i] * derivative.value(std::ldexp(s, j) - kk);
    }
    return std::pow(2.0, j * (1.0 + derivative.exponent)) * acc * ds;
}

}  // namespace lfss
