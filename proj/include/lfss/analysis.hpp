#pragma once

#include <span>
#include <string>
#include <vector>

#include "lfss/hurst.hpp"
#include "lfss/kernel.hpp"

namespace lfss {

/// One pass/fail line of a verification report.
struct Check {
    std::string name;
    double estimate = 0.0;
    double theory = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string detail;
};

/// |estimate - theory| <= tolerance.
Check make_check(std::string name, double estimate, double theory, double tolerance);

struct ExponentReport {
    std::size_t axis = 0;
    /// Slope of log max_i |X(t_i + lag) - X(t_i)| against log lag.
    double estimated_exponent = 0.0;
    double stderr_ = 0.0;
    /// Slope of log median_i |X(t_i + lag) - X(t_i)|: the self-similarity index H, not the Hölder exponent.
    double median_slope = 0.0;
    double lag_min = 0.0;
    double lag_max = 0.0;
    double theory = 0.0;
    /// Set when every increment vanishes and no regression is possible.
    bool degenerate = false;
};

/// Hölder exponent of a transect sampled at spacing dt, from lags given in steps.
/// Requires >= 2^12 samples (ErrorKind::Resolution) and lags spanning >= 1.5 decades.
ExponentReport empirical_axis_exponent(std::span<const double> transect, double dt, std::span<const std::size_t> lags,
                                       std::size_t axis, const HurstVector& hurst);

/// Default lags 2^2 .. 2^7 steps.
std::vector<std::size_t> default_lags();

struct RatioReport {
    std::vector<double> ratios;
    double min = 0.0;
    double max = 0.0;
    double spread() const noexcept { return min > 0.0 ? max / min : 0.0; }
};

/// r(s, t) = scale(X(s) - X(t)) / rho(s, t) for each pair; increments[p] holds the replicates of pair p.
/// Requires >= 200 replicates (ErrorKind::InsufficientData) and s != t.
RatioReport check_increment_bounds(const std::vector<std::vector<double>>& increments,
                                   const std::vector<std::pair<std::vector<double>, std::vector<double>>>& pairs,
                                   const HurstVector& hurst);

struct SupMomentReport {
    /// mean_replicates sup_T |X - X(a)| / sum_j (b_j - a_j)^H_j, one per rectangle.
    std::vector<double> ratios;
    double max_growth = 0.0;  // largest ratio[i+1] / ratio[i]
    bool pass = false;        // max_growth <= 2
};

/// sups[r][i] = sup over the grid of rectangle r of |X - X(a_r)| in replicate i; rectangles
/// are ordered from large to small. Requires >= 200 replicates.
SupMomentReport check_sup_moment(const std::vector<std::vector<double>>& sups, const std::vector<Rectangle>& rects,
                                 const HurstVector& hurst);

struct DimensionReport {
    std::string target;
    double estimate = 0.0;
    double theory = 0.0;
    double stderr_ = 0.0;
    std::vector<double> box_scales;
    std::vector<double> counts;
};

/// Minimum point count accepted by box_counting_dimension.
constexpr std::size_t kMinBoxCountingPoints = 1u << 16;

/// Slope of log N(delta) against log(1/delta), N counting occupied axis-aligned boxes
/// of side delta. Requires >= 2^16 points, >= 5 scales spanning >= 2 octaves, and
/// more occupied boxes at the finest scale than at the coarsest (ErrorKind::Resolution).
DimensionReport box_counting_dimension(const std::vector<std::vector<double>>& points, std::span<const double> scales);

/// Box counting for the graph of a function sampled at uniform t on [t0, t1]: per column
/// of width delta, the boxes met by the range of the (linearly interpolated) path. Both
/// axes are first mapped to the unit square. Scales are column widths in that square.
DimensionReport graph_box_dimension(std::span<const double> values, std::span<const double> scales);

/// delta = 2^-k for k in [k_lo, k_hi].
std::vector<double> dyadic_scales(int k_lo, int k_hi);

struct GrowthReport {
    double sup_inner = 0.0;  // over points with all |t_j| in [2^-octaves, 2^octaves]
    double sup_outer = 0.0;  // over all points
    double ratio() const noexcept { return sup_inner > 0.0 ? sup_outer / sup_inner : 1.0; }
    bool pass = false;       // ratio <= 1.25
};

/// sup |X(t)| / prod_j |t_j|^H_j (1 + |log |t_j||)^(1/alpha + eta) over the points, and over
/// the points inside [2^-octaves, 2^octaves]^N (coordinates by absolute value).
GrowthReport check_growth_envelope(const std::vector<std::vector<double>>& points, std::span<const double> values,
                                   const HurstVector& hurst, double eta, double octaves);

}  // namespace lfss
