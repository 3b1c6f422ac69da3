#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace lfss {

/// Law of one strictly alpha-stable variate S_alpha(scale, skewness, 0).
struct StableParams {
    double alpha = 2.0;
    double scale = 1.0;
    double skewness = 0.0;

    /// Throws ErrorKind::ParameterDomain on invalid values. alpha = 1 with
    /// nonzero skewness is rejected (not strictly stable in this family).
    void validate() const;
};

/// 128-bit counter under a 64-bit stream: addresses one variate.
struct SeedKey {
    std::uint64_t stream = 0;
    std::uint64_t counter_lo = 0;
    std::uint64_t counter_hi = 0;
};

/// Two uniforms on the open interval (0, 1) drawn from the Philox block at `key`.
struct UniformPair {
    double u1;
    double u2;
};
UniformPair uniform_pair(const SeedKey& key) noexcept;

/// One strictly stable draw (Chambers-Mallows-Stuck), pure in (params, key).
double sample_stable(const StableParams& params, const SeedKey& key);

/// Unit-scale draw without validation, for hot loops over already validated
/// parameters. `alpha != 1` or `skewness == 0` must hold.
double sample_stable_unit(double alpha, double skewness, const SeedKey& key) noexcept;

/// Fill `out[i]` with the draw at counter `first_counter + i`.
void sample_stable_block(const StableParams& params, std::uint64_t stream,
                         std::uint64_t first_counter, std::span<double> out);

/// Tail index from the log-log slope of the empirical survival of |x| above
/// the `t_min_quantile` quantile.
double estimate_tail_index(std::span<const double> samples, double t_min_quantile);

/// Slope of log P(|x| > t) against log t, evaluated at `points` log-spaced
/// levels in [t_lo, t_hi]. Returns the (negative) slope.
double tail_slope(std::span<const double> samples, double t_lo, double t_hi, int points = 16);

/// Scale from interquartile-range matching against the unit symmetric law.
/// Requires >= 1e3 samples.
double estimate_scale(std::span<const double> samples, double alpha);

/// Same estimator without the sample-size floor (at least 4 samples).
double iqr_scale(std::span<const double> samples, double alpha);

/// Upper quartile of the unit-scale symmetric alpha-stable law, from numerical
/// inversion of exp(-|u|^alpha). Cached per alpha.
double symmetric_stable_quartile(double alpha);

/// CDF and density of the unit-scale symmetric alpha-stable law.
double symmetric_stable_cdf(double x, double alpha);
double symmetric_stable_pdf(double x, double alpha);

/// Asymptotic relative standard error of estimate_scale for n symmetric draws.
double scale_estimate_rel_stderr(double alpha, std::size_t n);

}  // namespace lfss
