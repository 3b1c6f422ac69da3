#include "lfss/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lfss/errors.hpp"
#include "lfss/stable_rng.hpp"
#include "lfss/stats.hpp"

namespace lfss {

namespace {

constexpr std::size_t kMinReplicates = 200;

void require_replicates(std::size_t n) {
    require(n >= kMinReplicates, ErrorKind::InsufficientData,
            "need at least " + std::to_string(kMinReplicates) + " replicates, got " + std::to_string(n));
}

std::vector<double> checked_scales(std::span<const double> scales) {
    std::vector<double> s(scales.begin(), scales.end());
    require(s.size() >= 5, ErrorKind::InsufficientData, "box counting needs at least 5 scales");
    for (double d : s) require(d > 0.0 && std::isfinite(d), ErrorKind::ParameterDomain, "box scales must be positive");
    std::sort(s.begin(), s.end(), std::greater<>());
    require(s.front() / s.back() >= 4.0 * (1.0 - 1e-12), ErrorKind::Resolution, "box scales must span at least 2 octaves");
    return s;
}

DimensionReport fit_counts(std::string target, std::vector<double> scales, std::vector<double> counts) {
    require(counts.back() > counts.front() && counts.back() >= 16.0, ErrorKind::Resolution,
            "too few occupied boxes at the finest scale; refine the scales or the sample");
    std::vector<double> x;
    std::vector<double> y;
    for (std::size_t i = 0; i < scales.size(); ++i) {
        x.push_back(-std::log(scales[i]));
        y.push_back(std::log(counts[i]));
    }
    const auto fit = fit_line(x, y);
    DimensionReport r;
    r.target = std::move(target);
    r.estimate = fit.slope;
    r.stderr_ = fit.slope_stderr;
    r.box_scales = std::move(scales);
    r.counts = std::move(counts);
    return r;
}

}  // namespace

Check make_check(std::string name, double estimate, double theory, double tolerance) {
    Check c;
    c.name = std::move(name);
    c.estimate = estimate;
    c.theory = theory;
    c.tolerance = tolerance;
    c.pass = std::isfinite(estimate) && std::abs(estimate - theory) <= tolerance;
    return c;
}

std::vector<std::size_t> default_lags() {
    std::vector<std::size_t> lags;
    for (int e = 2; e <= 7; ++e) lags.push_back(std::size_t{1} << e);
    return lags;
}

ExponentReport empirical_axis_exponent(std::span<const double> transect, double dt, std::span<const std::size_t> lags,
                                       std::size_t axis, const HurstVector& hurst) {
    require(transect.size() >= (std::size_t{1} << 12), ErrorKind::Resolution,
            "exponent estimation needs a transect of at least 4096 points, got " + std::to_string(transect.size()));
    require(dt > 0.0, ErrorKind::ParameterDomain, "transect spacing must be positive");
    require(axis < hurst.dim(), ErrorKind::Input, "axis out of range");
    std::vector<std::size_t> L(lags.begin(), lags.end());
    std::sort(L.begin(), L.end());
    L.erase(std::unique(L.begin(), L.end()), L.end());
    require(L.size() >= 3 && L.front() >= 1, ErrorKind::InsufficientData, "need at least 3 positive lags");
    require(L.back() < transect.size() / 2, ErrorKind::Resolution, "largest lag exceeds half the transect");
    require(std::log10(static_cast<double>(L.back()) / static_cast<double>(L.front())) >= 1.5 - 1e-9,
            ErrorKind::ParameterDomain, "lags must span at least 1.5 decades");

    ExponentReport r;
    r.axis = axis;
    r.theory = hurst.exponent(axis);
    r.lag_min = static_cast<double>(L.front()) * dt;
    r.lag_max = static_cast<double>(L.back()) * dt;

    std::vector<double> log_lag;
    std::vector<double> log_sup;
    std::vector<double> log_med;
    std::vector<double> inc;
    bool all_zero = true;
    bool any_zero = false;
    for (std::size_t lag : L) {
        inc.resize(transect.size() - lag);
        for (std::size_t i = 0; i + lag < transect.size(); ++i) inc[i] = std::abs(transect[i + lag] - transect[i]);
        const double sup = *std::max_element(inc.begin(), inc.end());
        const double med = quantile_inplace(inc, 0.5);
        if (sup > 0.0) all_zero = false;
        if (sup <= 0.0 || med <= 0.0) any_zero = true;
        log_lag.push_back(std::log(static_cast<double>(lag) * dt));
        log_sup.push_back(sup > 0.0 ? std::log(sup) : 0.0);
        log_med.push_back(med > 0.0 ? std::log(med) : 0.0);
    }
    if (all_zero || any_zero) {
        r.degenerate = true;
        r.estimated_exponent = std::numeric_limits<double>::quiet_NaN();
        r.median_slope = std::numeric_limits<double>::quiet_NaN();
        return r;
    }
    const auto sup_fit = fit_line(log_lag, log_sup);
    r.estimated_exponent = sup_fit.slope;
    r.stderr_ = sup_fit.slope_stderr;
    r.median_slope = fit_line(log_lag, log_med).slope;
    return r;
}

RatioReport check_increment_bounds(const std::vector<std::vector<double>>& increments,
                                   const std::vector<std::pair<std::vector<double>, std::vector<double>>>& pairs,
                                   const HurstVector& hurst) {
    require(increments.size() == pairs.size() && !pairs.empty(), ErrorKind::Input,
            "one replicate set per pair is required");
    RatioReport r;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        require_replicates(increments[p].size());
        const auto& [s, t] = pairs[p];
        require(s.size() == hurst.dim() && t.size() == hurst.dim(), ErrorKind::Input, "pair dimension mismatch");
        const double rho = rho_metric(s, t, hurst);
        require(rho > 0.0, ErrorKind::Precondition, "pairs with s = t are excluded");
        r.ratios.push_back(iqr_scale(increments[p], hurst.alpha) / rho);
    }
    r.min = *std::min_element(r.ratios.begin(), r.ratios.end());
    r.max = *std::max_element(r.ratios.begin(), r.ratios.end());
    return r;
}

SupMomentReport check_sup_moment(const std::vector<std::vector<double>>& sups, const std::vector<Rectangle>& rects,
                                 const HurstVector& hurst) {
    require(sups.size() == rects.size() && rects.size() >= 2, ErrorKind::Input,
            "need replicate sups for at least two rectangles");
    SupMomentReport r;
    for (std::size_t i = 0; i < rects.size(); ++i) {
        rects[i].validate();
        require(rects[i].lower.size() == hurst.dim(), ErrorKind::Input, "rectangle dimension mismatch");
        require_replicates(sups[i].size());
        double size = 0.0;
        for (std::size_t j = 0; j < hurst.dim(); ++j)
            size += std::pow(rects[i].upper[j] - rects[i].lower[j], hurst.H[j]);
        r.ratios.push_back(mean(sups[i]) / size);
    }
    for (std::size_t i = 1; i < r.ratios.size(); ++i)
        r.max_growth = std::max(r.max_growth, r.ratios[i] / r.ratios[i - 1]);
    r.pass = r.max_growth <= 2.0;
    return r;
}

std::vector<double> dyadic_scales(int k_lo, int k_hi) {
    require(k_hi >= k_lo, ErrorKind::ParameterDomain, "empty dyadic scale range");
    std::vector<double> s;
    for (int k = k_lo; k <= k_hi; ++k) s.push_back(std::ldexp(1.0, -k));
    return s;
}

DimensionReport box_counting_dimension(const std::vector<std::vector<double>>& points, std::span<const double> scales) {
    require(points.size() >= kMinBoxCountingPoints, ErrorKind::InsufficientData,
            "box counting needs at least " + std::to_string(kMinBoxCountingPoints) + " points, got " +
                std::to_string(points.size()));
    const std::size_t m = points.front().size();
    require(m >= 1, ErrorKind::Input, "points must have at least one coordinate");
    std::vector<double> lo(m, std::numeric_limits<double>::infinity());
    for (const auto& p : points) {
        require(p.size() == m, ErrorKind::Input, "points differ in dimension");
        for (std::size_t j = 0; j < m; ++j) {
            require(std::isfinite(p[j]), ErrorKind::Input, "points must be finite");
            lo[j] = std::min(lo[j], p[j]);
        }
    }
    auto s = checked_scales(scales);
    std::vector<double> counts;
    std::vector<std::int64_t> keys(points.size() * m);
    std::vector<std::size_t> order(points.size());
    for (double delta : s) {
        for (std::size_t i = 0; i < points.size(); ++i)
            for (std::size_t j = 0; j < m; ++j)
                keys[i * m + j] = static_cast<std::int64_t>(std::floor((points[i][j] - lo[j]) / delta));
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        auto less = [&](std::size_t a, std::size_t b) {
            return std::lexicographical_compare(keys.begin() + a * m, keys.begin() + (a + 1) * m, keys.begin() + b * m,
                                                keys.begin() + (b + 1) * m);
        };
        std::sort(order.begin(), order.end(), less);
        std::size_t boxes = 1;
        for (std::size_t i = 1; i < order.size(); ++i)
            if (less(order[i - 1], order[i])) ++boxes;
        counts.push_back(static_cast<double>(boxes));
    }
    return fit_counts("range", std::move(s), std::move(counts));
}

DimensionReport graph_box_dimension(std::span<const double> values, std::span<const double> scales) {
    require(values.size() >= kMinBoxCountingPoints, ErrorKind::InsufficientData,
            "graph box counting needs at least " + std::to_string(kMinBoxCountingPoints) + " samples, got " +
                std::to_string(values.size()));
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    const double lo = *mn;
    const double span = *mx - *mn;
    auto s = checked_scales(scales);
    const double n1 = static_cast<double>(values.size() - 1);
    require(s.back() * n1 >= 2.0, ErrorKind::Resolution, "finest box scale is below the sampling step");
    std::vector<double> counts;
    for (double delta : s) {
        const auto columns = static_cast<std::size_t>(std::ceil(1.0 / delta - 1e-12));
        double total = 0.0;
        for (std::size_t c = 0; c < columns; ++c) {
            const auto first = static_cast<std::size_t>(std::floor(static_cast<double>(c) * delta * n1));
            const auto last = std::min(values.size() - 1,
                                       static_cast<std::size_t>(std::ceil(static_cast<double>(c + 1) * delta * n1)));
            double a = values[first];
            double b = a;
            for (std::size_t i = first; i <= last; ++i) {
                a = std::min(a, values[i]);
                b = std::max(b, values[i]);
            }
            if (span > 0.0) {
                a = (a - lo) / span;
                b = (b - lo) / span;
            } else {
                a = b = 0.0;
            }
            total += std::floor(b / delta) - std::floor(a / delta) + 1.0;
        }
        counts.push_back(total);
    }
    return fit_counts("graph", std::move(s), std::move(counts));
}

GrowthReport check_growth_envelope(const std::vector<std::vector<double>>& points, std::span<const double> values,
                                   const HurstVector& hurst, double eta, double octaves) {
    require(points.size() == values.size(), ErrorKind::Input, "points and values differ in length");
    require(eta >= 0.0 && octaves > 0.0, ErrorKind::ParameterDomain, "eta must be >= 0 and octaves > 0");
    const double power = 1.0 / hurst.alpha + eta;
    const double inner_lo = std::ldexp(1.0, -static_cast<int>(std::lround(octaves))) * (1.0 - 1e-12);
    const double inner_hi = std::ldexp(1.0, static_cast<int>(std::lround(octaves))) * (1.0 + 1e-12);
    GrowthReport r;
    for (std::size_t i = 0; i < points.size(); ++i) {
        require(points[i].size() == hurst.dim(), ErrorKind::Input, "point dimension mismatch");
        double envelope = 1.0;
        bool inner = true;
        for (std::size_t j = 0; j < hurst.dim(); ++j) {
            const double a = std::abs(points[i][j]);
            envelope *= std::pow(a, hurst.H[j]) * std::pow(1.0 + std::abs(std::log(a)), power);
            inner = inner && a >= inner_lo && a <= inner_hi;
        }
        if (envelope <= 0.0) continue;
        const double v = std::abs(values[i]) / envelope;
        r.sup_outer = std::max(r.sup_outer, v);
        if (inner) r.sup_inner = std::max(r.sup_inner, v);
    }
    r.pass = r.ratio() <= 1.25;
    return r;
}

}  // namespace lfss
