#include "lfss/stable_rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "lfss/errors.hpp"
#include "lfss/philox.hpp"
#include "lfss/stats.hpp"

namespace lfss {

namespace {

constexpr double kPi = std::numbers::pi;

double to_open_unit(std::uint64_t bits) noexcept {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

void require_alpha(double alpha) {
    require(std::isfinite(alpha) && alpha > 0.0 && alpha <= 2.0, ErrorKind::ParameterDomain,
            "alpha must lie in (0, 2], got " + std::to_string(alpha));
}

}  // namespace

void StableParams::validate() const {
    require_alpha(alpha);
    require(std::isfinite(scale) && scale >= 0.0, ErrorKind::ParameterDomain,
            "scale must be >= 0, got " + std::to_string(scale));
    require(std::isfinite(skewness) && skewness >= -1.0 && skewness <= 1.0,
            ErrorKind::ParameterDomain, "skewness must lie in [-1, 1], got " + std::to_string(skewness));
    require(!(alpha == 1.0 && skewness != 0.0), ErrorKind::ParameterDomain,
            "alpha = 1 with nonzero skewness is not supported");
}

UniformPair uniform_pair(const SeedKey& key) noexcept {
    const Philox4x32::Counter ctr{static_cast<std::uint32_t>(key.counter_lo),
                                  static_cast<std::uint32_t>(key.counter_lo >> 32),
                                  static_cast<std::uint32_t>(key.counter_hi),
                                  static_cast<std::uint32_t>(key.counter_hi >> 32)};
    const Philox4x32::Key k{static_cast<std::uint32_t>(key.stream),
                            static_cast<std::uint32_t>(key.stream >> 32)};
    const auto out = Philox4x32::apply(ctr, k);
    const std::uint64_t a = (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
    const std::uint64_t b = (static_cast<std::uint64_t>(out[2]) << 32) | out[3];
    return {to_open_unit(a), to_open_unit(b)};
}

double sample_stable_unit(double alpha, double skewness, const SeedKey& key) noexcept {
    const auto [u1, u2] = uniform_pair(key);
    const double v = kPi * (u1 - 0.5);
    const double w = -std::log(u2);
    if (alpha == 1.0) return std::tan(v);
    if (alpha == 2.0) return 2.0 * std::sin(v) * std::sqrt(w);
    double b = 0.0;
    double s = 1.0;
    if (skewness != 0.0) {
        const double t = skewness * std::tan(kPi * alpha / 2.0);
        b = std::atan(t) / alpha;
        s = std::pow(1.0 + t * t, 1.0 / (2.0 * alpha));
    }
    const double ab = alpha * (v + b);
    const double cv = std::cos(v);
    return s * std::sin(ab) / std::pow(cv, 1.0 / alpha) *
           std::pow(std::cos(v - ab) / w, (1.0 - alpha) / alpha);
}

double sample_stable(const StableParams& params, const SeedKey& key) {
    params.validate();
    if (params.scale == 0.0) return 0.0;
    const double skew = params.alpha == 2.0 ? 0.0 : params.skewness;
    return params.scale * sample_stable_unit(params.alpha, skew, key);
}

void sample_stable_block(const StableParams& params, std::uint64_t stream,
                         std::uint64_t first_counter, std::span<double> out) {
    params.validate();
    const double skew = params.alpha == 2.0 ? 0.0 : params.skewness;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const SeedKey key{stream, first_counter + i, 0};
        out[i] = params.scale == 0.0 ? 0.0 : params.scale * sample_stable_unit(params.alpha, skew, key);
    }
}

double estimate_tail_index(std::span<const double> samples, double t_min_quantile) {
    require(samples.size() >= 10000, ErrorKind::InsufficientData,
            "tail index needs at least 1e4 samples, got " + std::to_string(samples.size()));
    require(t_min_quantile >= 0.9 && t_min_quantile < 1.0, ErrorKind::ParameterDomain,
            "t_min_quantile must lie in [0.9, 1)");
    std::vector<double> mag(samples.size());
    std::transform(samples.begin(), samples.end(), mag.begin(), [](double x) { return std::abs(x); });
    std::sort(mag.begin(), mag.end());
    const std::size_t n = mag.size();
    const double threshold = mag[static_cast<std::size_t>(t_min_quantile * static_cast<double>(n))];
    const auto first = std::upper_bound(mag.begin(), mag.end(), threshold);
    const auto exceed = static_cast<std::size_t>(mag.end() - first);
    require(exceed >= 100, ErrorKind::InsufficientData,
            "only " + std::to_string(exceed) + " exceedances above the threshold");
    std::vector<double> lx;
    std::vector<double> ly;
    lx.reserve(exceed);
    ly.reserve(exceed);
    for (auto it = first; it != mag.end(); ++it) {
        const auto i = static_cast<std::size_t>(it - mag.begin());
        lx.push_back(std::log(*it));
        ly.push_back(std::log(static_cast<double>(n - i) / static_cast<double>(n)));
    }
    return -fit_line(lx, ly).slope;
}

double tail_slope(std::span<const double> samples, double t_lo, double t_hi, int points) {
    require(t_lo > 0.0 && t_hi > t_lo && points >= 2, ErrorKind::ParameterDomain,
            "tail_slope needs 0 < t_lo < t_hi and at least two levels");
    std::vector<double> mag(samples.size());
    std::transform(samples.begin(), samples.end(), mag.begin(), [](double x) { return std::abs(x); });
    std::sort(mag.begin(), mag.end());
    std::vector<double> lx;
    std::vector<double> ly;
    for (int i = 0; i < points; ++i) {
        const double t = t_lo * std::pow(t_hi / t_lo, static_cast<double>(i) / (points - 1));
        const auto count = static_cast<std::size_t>(mag.end() - std::upper_bound(mag.begin(), mag.end(), t));
        if (count == 0) continue;
        lx.push_back(std::log(t));
        ly.push_back(std::log(static_cast<double>(count) / static_cast<double>(mag.size())));
    }
    require(lx.size() >= 2, ErrorKind::InsufficientData, "no exceedances in the requested tail range");
    return fit_line(lx, ly).slope;
}

double symmetric_stable_cdf(double x, double alpha) {
    require_alpha(alpha);
    if (x == 0.0) return 0.5;
    if (alpha == 2.0) return 0.5 * std::erfc(-x / 2.0);
    if (alpha == 1.0) return 0.5 + std::atan(x) / kPi;
    const double upper = std::pow(60.0, 1.0 / alpha);
    auto integrand = [&](double u) {
        if (u == 0.0) return x;
        return std::sin(x * u) / u * std::exp(-std::pow(u, alpha));
    };
    const double value =
        boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, upper, 20, 1e-13);
    return 0.5 + value / kPi;
}

double symmetric_stable_pdf(double x, double alpha) {
    require_alpha(alpha);
    if (alpha == 2.0) return std::exp(-x * x / 4.0) / (2.0 * std::sqrt(kPi));
    if (alpha == 1.0) return 1.0 / (kPi * (1.0 + x * x));
    const double upper = std::pow(60.0, 1.0 / alpha);
    auto integrand = [&](double u) { return std::cos(x * u) * std::exp(-std::pow(u, alpha)); };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, upper, 20, 1e-13) /
           kPi;
}

double symmetric_stable_quartile(double alpha) {
    require_alpha(alpha);
    static std::mutex mutex;
    static std::map<double, double> cache;
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(alpha); it != cache.end()) return it->second;
    }
    double q = 0.0;
    if (alpha == 2.0) {
        q = 2.0 * 0.47693627620446987338;  // 2 * erfinv(1/2)
    } else if (alpha == 1.0) {
        q = 1.0;
    } else {
        std::uintmax_t iters = 200;
        auto f = [&](double x) { return symmetric_stable_cdf(x, alpha) - 0.75; };
        const auto [lo, hi] = boost::math::tools::toms748_solve(
            f, 1e-3, 50.0, boost::math::tools::eps_tolerance<double>(48), iters);
        q = 0.5 * (lo + hi);
    }
    std::lock_guard lock(mutex);
    cache.emplace(alpha, q);
    return q;
}

double estimate_scale(std::span<const double> samples, double alpha) {
    require_alpha(alpha);
    require(samples.size() >= 1000, ErrorKind::InsufficientData,
            "scale estimate needs at least 1e3 samples, got " + std::to_string(samples.size()));
    return iqr_scale(samples, alpha);
}

double iqr_scale(std::span<const double> samples, double alpha) {
    require_alpha(alpha);
    require(samples.size() >= 4, ErrorKind::InsufficientData, "scale estimate needs at least 4 samples");
    std::vector<double> v(samples.begin(), samples.end());
    const double iqr = quantile_inplace(v, 0.75) - quantile_inplace(v, 0.25);
    return iqr / (2.0 * symmetric_stable_quartile(alpha));
}

double scale_estimate_rel_stderr(double alpha, std::size_t n) {
    const double q = symmetric_stable_quartile(alpha);
    const double f = symmetric_stable_pdf(q, alpha);
    return 0.25 / (f * q * std::sqrt(static_cast<double>(n)));
}

}  // namespace lfss
