#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace lfss {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double r2 = 0.0;
};

/// Ordinary least squares y = intercept + slope * x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Type-7 (linear interpolation) sample quantile; reorders `v`.
double quantile_inplace(std::vector<double>& v, double p);
double quantile(std::span<const double> v, double p);
double median(std::span<const double> v);

double mean(std::span<const double> v);
double variance(std::span<const double> v);  // unbiased

/// Distance correlation of paired samples (Szekely-Rizzo V-statistic form).
double distance_correlation(std::span<const double> x, std::span<const double> y);

/// Permutation p-value for the null of independence based on distance correlation.
double distance_correlation_pvalue(std::span<const double> x, std::span<const double> y,
                                   int permutations, std::uint64_t seed);

}  // namespace lfss
