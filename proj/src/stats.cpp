#include "lfss/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lfss/errors.hpp"
#include "lfss/philox.hpp"
#include "lfss/stable_rng.hpp"

namespace lfss {

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    require(x.size() == y.size() && x.size() >= 2, ErrorKind::InsufficientData,
            "line fit needs at least two paired points");
    const auto n = static_cast<double>(x.size());
    const double mx = mean(x);
    const double my = mean(y);
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    require(sxx > 0.0, ErrorKind::InsufficientData, "line fit is degenerate: x has no spread");
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    const double sse = std::max(0.0, syy - fit.slope * sxy);
    fit.slope_stderr = x.size() > 2 ? std::sqrt(sse / (n - 2.0) / sxx) : 0.0;
    fit.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
    return fit;
}

double quantile_inplace(std::vector<double>& v, double p) {
    require(!v.empty(), ErrorKind::InsufficientData, "quantile of an empty sample");
    const double pos = p * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const double frac = pos - static_cast<double>(lo);
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(lo), v.end());
    const double a = v[lo];
    if (frac == 0.0 || lo + 1 >= v.size()) return a;
    const double b = *std::min_element(v.begin() + static_cast<std::ptrdiff_t>(lo) + 1, v.end());
    return a + frac * (b - a);
}

double quantile(std::span<const double> v, double p) {
    std::vector<double> copy(v.begin(), v.end());
    return quantile_inplace(copy, p);
}

double median(std::span<const double> v) { return quantile(v, 0.5); }

double mean(std::span<const double> v) {
    require(!v.empty(), ErrorKind::InsufficientData, "mean of an empty sample");
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double variance(std::span<const double> v) {
    require(v.size() >= 2, ErrorKind::InsufficientData, "variance needs two samples");
    const double m = mean(v);
    double acc = 0.0;
    for (double x : v) acc += (x - m) * (x - m);
    return acc / static_cast<double>(v.size() - 1);
}

namespace {

// Doubly centered distance matrix, row-major n x n.
std::vector<double> centered_distances(std::span<const double> x) {
    const std::size_t n = x.size();
    std::vector<double> d(n * n);
    std::vector<double> row(n, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double v = std::abs(x[i] - x[j]);
            d[i * n + j] = v;
            row[i] += v;
        }
        total += row[i];
    }
    const auto nn = static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            d[i * n + j] += -row[i] / nn - row[j] / nn + total / (nn * nn);
    return d;
}

double dcor_from(const std::vector<double>& a, const std::vector<double>& b,
                 std::span<const std::size_t> perm, std::size_t n, double va, double vb) {
    double cov = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) cov += a[i * n + j] * b[perm[i] * n + perm[j]];
    if (va <= 0.0 || vb <= 0.0) return 0.0;
    return std::sqrt(std::max(0.0, cov) / std::sqrt(va * vb));
}

double self_cov(const std::vector<double>& a) {
    double v = 0.0;
    for (double x : a) v += x * x;
    return v;
}

}  // namespace

double distance_correlation(std::span<const double> x, std::span<const double> y) {
    require(x.size() == y.size() && x.size() >= 4, ErrorKind::InsufficientData,
            "distance correlation needs at least four pairs");
    const auto a = centered_distances(x);
    const auto b = centered_distances(y);
    std::vector<std::size_t> id(x.size());
    std::iota(id.begin(), id.end(), 0);
    return dcor_from(a, b, id, x.size(), self_cov(a), self_cov(b));
}

double distance_correlation_pvalue(std::span<const double> x, std::span<const double> y,
                                   int permutations, std::uint64_t seed) {
    require(x.size() == y.size() && x.size() >= 4, ErrorKind::InsufficientData,
            "distance correlation needs at least four pairs");
    const std::size_t n = x.size();
    const auto a = centered_distances(x);
    const auto b = centered_distances(y);
    const double va = self_cov(a);
    const double vb = self_cov(b);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    const double observed = dcor_from(a, b, perm, n, va, vb);
    int exceed = 0;
    std::uint64_t counter = 0;
    for (int p = 0; p < permutations; ++p) {
        for (std::size_t i = n - 1; i > 0; --i) {
            const double u = uniform_pair(SeedKey{seed, counter++, 0}).u1;
            const auto j = static_cast<std::size_t>(u * static_cast<double>(i + 1));
            std::swap(perm[i], perm[std::min(j, i)]);
        }
        if (dcor_from(a, b, perm, n, va, vb) >= observed) ++exceed;
    }
    return (1.0 + exceed) / (1.0 + permutations);
}

}  // namespace lfss
