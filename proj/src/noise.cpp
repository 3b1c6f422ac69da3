#include "lfss/noise.hpp"

#include <algorithm>
#include <cmath>

#include "lfss/errors.hpp"
#include "lfss/parallel.hpp"
#include "lfss/stable_rng.hpp"

namespace lfss {

namespace {

// Prepend cells below edges.front() with widths first_width * ratio^k until -far is passed.
void extend_below(std::vector<double>& edges, double first_width, double far, double ratio) {
    std::vector<double> below;
    double edge = edges.front();
    double w = first_width;
    while (edge > -far) {
        w *= ratio;
        edge -= w;
        below.push_back(edge);
    }
    edges.insert(edges.begin(), below.rbegin(), below.rend());
}

void check_partition(const std::vector<double>& edges) {
    require(edges.size() >= 2, ErrorKind::Input, "partition needs at least one cell");
    for (std::size_t i = 1; i < edges.size(); ++i)
        require(edges[i] > edges[i - 1], ErrorKind::Input, "partition edges must increase");
}

}  // namespace

double Partition1D::min_width() const noexcept {
    double w = edges.back() - edges.front();
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) w = std::min(w, edges[i + 1] - edges[i]);
    return w;
}

Partition1D Partition1D::uniform(double lo, double hi, double h) {
    require(h > 0.0 && hi > lo, ErrorKind::ParameterDomain, "uniform partition needs h > 0 and hi > lo");
    const auto n = static_cast<std::size_t>(std::llround((hi - lo) / h));
    require(n >= 1, ErrorKind::ParameterDomain, "uniform partition has no cells");
    Partition1D p;
    p.edges.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) p.edges[i] = lo + static_cast<double>(i) * h;
    return p;
}

Partition1D Partition1D::graded(double core_lo, double core_hi, double h, double far, double ratio) {
    require(ratio >= 1.0, ErrorKind::ParameterDomain, "grading ratio must be >= 1");
    Partition1D p = uniform(core_lo, core_hi, h);
    if (ratio > 1.0) extend_below(p.edges, h, far, ratio);
    check_partition(p.edges);
    return p;
}

Partition1D Partition1D::log_graded(double inner, double outer, double rel, double far, double ratio) {
    require(inner > 0.0 && outer > inner && rel > 0.0, ErrorKind::ParameterDomain,
            "log-graded partition needs 0 < inner < outer and rel > 0");
    std::vector<double> pos{0.0, inner};
    while (pos.back() < outer) pos.push_back(std::min(outer, pos.back() * (1.0 + rel)));
    Partition1D p;
    for (auto it = pos.rbegin(); it != pos.rend(); ++it) p.edges.push_back(-*it);
    p.edges.insert(p.edges.end(), pos.begin() + 1, pos.end());
    const double last = p.edges[1] - p.edges[0];
    if (ratio > 1.0) extend_below(p.edges, last, far, ratio);
    check_partition(p.edges);
    return p;
}

NoiseGrid NoiseGrid::generate(std::vector<Partition1D> axes, double alpha, double skewness, std::uint64_t stream) {
    StableParams{alpha, 1.0, skewness}.validate();
    require(!axes.empty(), ErrorKind::Input, "noise grid needs at least one axis");
    for (const auto& a : axes) check_partition(a.edges);

    NoiseGrid g;
    g.axes_ = std::move(axes);
    g.alpha_ = alpha;
    g.skewness_ = alpha == 2.0 ? 0.0 : skewness;
    g.stream_ = stream;

    const std::size_t N = g.axes_.size();
    std::vector<std::vector<double>> root_width(N);
    std::size_t total = 1;
    for (std::size_t l = 0; l < N; ++l) {
        const auto& a = g.axes_[l];
        root_width[l].resize(a.cells());
        for (std::size_t i = 0; i < a.cells(); ++i) root_width[l][i] = std::pow(a.width(i), 1.0 / alpha);
        total *= a.cells();
    }
    g.increments_.resize(total);
    const double skew = g.skewness_;
    parallel_for(total, [&](std::size_t begin, std::size_t end) {
        std::vector<std::size_t> idx(N);
        std::size_t rem = begin;
        for (std::size_t l = N; l-- > 0;) {
            idx[l] = rem % g.axes_[l].cells();
            rem /= g.axes_[l].cells();
        }
        for (std::size_t c = begin; c < end; ++c) {
            double scale = 1.0;
            for (std::size_t l = 0; l < N; ++l) scale *= root_width[l][idx[l]];
            g.increments_[c] = scale * sample_stable_unit(alpha, skew, SeedKey{stream, c, 0});
            for (std::size_t l = N; l-- > 0;) {
                if (++idx[l] < g.axes_[l].cells()) break;
                idx[l] = 0;
            }
        }
    }, 4096);
    return g;
}

std::size_t NoiseGrid::linear_index(std::span<const std::size_t> cell) const {
    require(cell.size() == dim(), ErrorKind::Input, "cell index dimension mismatch");
    std::size_t c = 0;
    for (std::size_t l = 0; l < dim(); ++l) {
        require(cell[l] < axes_[l].cells(), ErrorKind::Input, "cell index out of range");
        c = c * axes_[l].cells() + cell[l];
    }
    return c;
}

double NoiseGrid::increment(std::span<const std::size_t> cell) const { return increments_[linear_index(cell)]; }

NoiseGrid NoiseGrid::coarsen() const {
    NoiseGrid g;
    g.alpha_ = alpha_;
    g.skewness_ = skewness_;
    g.stream_ = stream_;
    g.coarsened_ = true;
    const std::size_t N = dim();
    std::vector<std::size_t> fine_n(N);
    std::vector<std::size_t> coarse_n(N);
    std::size_t total = 1;
    for (std::size_t l = 0; l < N; ++l) {
        const auto& e = axes_[l].edges;
        Partition1D p;
        for (std::size_t i = 0; i < e.size(); i += 2) p.edges.push_back(e[i]);
        if (p.edges.back() != e.back()) p.edges.push_back(e.back());
        fine_n[l] = axes_[l].cells();
        coarse_n[l] = p.cells();
        total *= coarse_n[l];
        g.axes_.push_back(std::move(p));
    }
    g.increments_.assign(total, 0.0);
    std::vector<std::size_t> idx(N, 0);
    for (std::size_t f = 0; f < increments_.size(); ++f) {
        std::size_t c = 0;
        for (std::size_t l = 0; l < N; ++l) c = c * coarse_n[l] + idx[l] / 2;
        g.increments_[c] += increments_[f];
        for (std::size_t l = N; l-- > 0;) {
            if (++idx[l] < fine_n[l]) break;
            idx[l] = 0;
        }
    }
    return g;
}

}  // namespace lfss
