#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lfss/analysis.hpp"

namespace lfss {

struct VerifyOptions {
    std::uint64_t seed = 1;
    /// Monte Carlo replicates for scale checks.
    std::size_t replicates = 3000;
    /// Independent paths for per-seed checks.
    int seeds = 20;
    /// Draws per law in the rng suite.
    std::size_t draws = 1000000;
    /// Largest admissible fraction of failing seeds.
    double seed_failure_rate = 0.10;
};

/// Suite names accepted by run_suite.
const std::vector<std::string>& suite_names();

/// "rng", "wavelet", "scale", "exponent", "dims" or "all"; ErrorKind::Configuration otherwise.
std::vector<Check> run_suite(const std::string& name, const VerifyOptions& options);

/// Generator known-answer vectors, tail slopes for alpha in {1.2, 1.5, 1.8}, Gaussian variance.
std::vector<Check> verify_rng(const VerifyOptions& options);

/// Zero integrals, biorthogonality over |J| <= 2, |K| <= 4, localization under window doubling.
std::vector<Check> verify_wavelet(const VerifyOptions& options);

/// Unit scale at (1, 1), rectangular increment scales, scaling of X(2t) against X(t).
std::vector<Check> verify_scale(const VerifyOptions& options);

/// Per-seed Hölder exponents on 2^14-point transects.
std::vector<Check> verify_exponent(const VerifyOptions& options);

/// Closed-form dimension cases and box-counting estimates of graph and range.
std::vector<Check> verify_dims(const VerifyOptions& options);

/// Largest grid discrepancy between the truncated wavelet series and the direct
/// integral on one shared noise grid, for n = n_lo .. n_hi.
struct OracleReport {
    std::vector<int> levels;
    std::vector<double> discrepancy;
    bool strictly_decreasing() const;
};
OracleReport oracle_discrepancy(std::uint64_t stream, int n_lo = 3, int n_hi = 6);

/// Empirical scales of the G transform for the (j, k) pairs against the quadrature target.
struct GScaleReport {
    std::vector<std::pair<int, std::int64_t>> pairs;
    std::vector<double> scales;
    double target = 0.0;
    double rel_stderr = 0.0;
};
GScaleReport g_transform_scales(std::uint64_t seed, std::size_t replicates);

/// Scale of exact coefficients against ||psi||_alpha^N and a distance-correlation
/// independence p-value for coefficients `separation` lattice steps apart.
struct CoefficientLawReport {
    double scale = 0.0;
    double target = 0.0;
    std::size_t samples = 0;
    double independence_pvalue = 0.0;
    std::size_t pairs = 0;
    int separation = 0;
    double support_length = 0.0;
};
CoefficientLawReport coefficient_laws(std::uint64_t seed, int paths);

}  // namespace lfss
