#pragma once

#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace lfss {

/// Daubechies low-pass filter with `vanishing_moments` vanishing moments
/// (length 2p, sum sqrt(2), extremal phase), computed by spectral factorization.
std::vector<double> daubechies_filter(int vanishing_moments);

/// Compactly supported Daubechies mother wavelet sampled on a dyadic grid.
/// Shifted by an integer so its support is [1 - p, p] inside [-L, L], L = p.
struct MotherWavelet {
    int vanishing_moments = 0;
    int refinement_level = 0;
    double support_halfwidth = 0.0;
    double grid_spacing = 0.0;
    /// psi(-L + i * grid_spacing), i = 0 .. 2L / grid_spacing (both ends included).
    std::vector<double> values;
    /// Running integral of psi from -L, trapezoidal, same grid as `values`.
    std::vector<double> cumulative;

    double value(double x) const noexcept;
    /// int_{-inf}^{x} psi, piecewise quadratic between grid points.
    double integral_to(double x) const noexcept;
    /// (int |psi|^p)^(1/p) by trapezoidal quadrature.
    double lp_norm(double p) const;
    /// int x^k psi(x) dx.
    double moment(int k) const;
};

MotherWavelet build_daubechies(int vanishing_moments, int refinement_level);

enum class Direction { Primitive, Derivative };

struct FractionalizeOptions {
    /// Reject windows holding less than this fraction of int |phi|.
    double min_window_mass = 0.999;
    bool enforce_window_mass = true;
};

/// psi^{H} (left-sided fractional primitive) or psi^{-H} (right-sided
/// fractional derivative) of order H - 1/alpha + 1, sampled on [-W, W).
///
/// The primitive is normalized to coincide with int (x - y)_+^{H - 1/alpha} psi(y) dy;
/// the derivative carries the reciprocal constant so that
/// int psi^{H}(x) psi^{-H}(x) dx = int psi^2 = 1.
struct FractionalWavelet {
    std::shared_ptr<const MotherWavelet> base;
    double exponent = 0.0;
    double alpha = 2.0;
    Direction direction = Direction::Primitive;
    double window = 0.0;
    double spacing = 0.0;
    /// phi(-window + i * spacing), i = 0 .. values.size() - 1.
    std::vector<double> values;
    double decay_constant = 0.0;
    /// effective_support(1e-10), cached at construction.
    double support_lo = 0.0;
    double support_hi = 0.0;

    double order() const noexcept { return exponent - 1.0 / alpha + 1.0; }
    double x_at(std::size_t i) const noexcept { return -window + static_cast<double>(i) * spacing; }
    /// Linear interpolation; zero outside the window.
    double value(double x) const noexcept;
    double integral() const;
    /// Smallest interval holding all but `tail_fraction` of int |phi|.
    std::pair<double, double> effective_support(double tail_fraction = 1e-10) const;
};

/// Default truncation window: 64 support half-widths.
double default_window(const MotherWavelet& psi);

FractionalWavelet fractionalize(std::shared_ptr<const MotherWavelet> psi, double exponent, double alpha,
                                Direction direction, double window, const FractionalizeOptions& options = {});

/// sup over the grid of (1+|x|)^2 (|phi(x)| + |phi'(x)|), centered differences.
double check_localization(const FractionalWavelet& phi);
/// Same functional for the mother wavelet itself.
double check_localization(const MotherWavelet& psi);

struct LocalizationStability {
    double at_window = 0.0;
    double at_double_window = 0.0;
    double relative_change = 0.0;
    bool stable = false;  // relative_change < 5%
};

/// Localization functional at W and at 2W.
LocalizationStability localization_stability(std::shared_ptr<const MotherWavelet> psi, double exponent,
                                             double alpha, Direction direction, double window,
                                             const FractionalizeOptions& options = {});

/// int a(2^J x - K) b(2^J2 x - K2) dx with a = psi^{H}, b = psi^{-H}.
double biorth_inner(const FractionalWavelet& a, const FractionalWavelet& b, int J, int K, int J2, int K2);

}  // namespace lfss
