#pragma once

#include <map>
#include <span>
#include <vector>

#include "lfss/hurst.hpp"

namespace lfss {

struct QuadratureSpec {
    double rel_tol = 1e-8;
    /// Bisection depth of the adaptive Gauss-Kronrod rule.
    int max_depth = 15;
    /// Allowed omitted alpha-mass of the kernel when a noise domain is truncated.
    double tail_tol = 1e-4;

    /// Twice the resolution: half the tolerance, one more bisection level.
    QuadratureSpec refined() const { return {rel_tol / 2.0, max_depth + 1, tail_tol}; }
};

struct KernelSpec {
    HurstVector hurst;
    double kappa = 1.0;
    /// Per-axis I_l = int |(1-s)_+^q - (-s)_+^q|^alpha ds with q = H_l - 1/alpha.
    std::vector<double> slice_mass;
    QuadratureSpec quadrature;

    std::size_t dim() const noexcept { return hurst.dim(); }
};

/// Builds the spec and its normalizing constant; validates the regime.
KernelSpec make_kernel_spec(const HurstVector& hurst, const QuadratureSpec& quad = {});

/// x_+^q with x_+^0 the indicator of x > 0.
double positive_power(double x, double q) noexcept;

/// (t - s)_+^q - (-s)_+^q, stable when |s| >> |t|.
double kernel_factor(double t, double s, double q) noexcept;

/// Mean of kernel_factor(t, ., q) over the cell [a, b], in closed form.
double kernel_factor_cell_average(double t, double a, double b, double q) noexcept;

/// kappa * prod_l kernel_factor(t_l, s_l, H_l - 1/alpha).
double kernel_h(std::span<const double> t, std::span<const double> s, const KernelSpec& spec);

/// int_R |(1-s)_+^q - (-s)_+^q|^alpha ds. Throws ErrorKind::Tolerance when the
/// adaptive quadrature does not reach `quad.rel_tol`.
double slice_mass(double q, double alpha, const QuadratureSpec& quad = {});

/// prod_l slice_mass_l^(-1/alpha).
double normalize_kappa(const HurstVector& hurst, const QuadratureSpec& quad = {});

/// L^alpha norm of s -> (u - s)_+^q - (-s)_+^q, i.e. (|u|^(q alpha + 1) I)^(1/alpha).
double slice_norm(double u, double q, double alpha, const QuadratureSpec& quad = {});

/// alpha-mass of the kernel factor below s = -R (R >> |u|), leading order.
double slice_tail_mass(double u, double q, double alpha, double R) noexcept;

/// Smallest R with slice_tail_mass(u, q, alpha, R) <= tol * slice mass of u.
double required_tail_radius(double u, double q, double alpha, double tol, const QuadratureSpec& quad = {});

struct Rectangle {
    std::vector<double> lower;
    std::vector<double> upper;

    /// Throws ErrorKind::Precondition unless lower_j < upper_j for all j.
    void validate() const;
};

/// prod_j (t_j - s_j)^H_j, the scale parameter of the rectangular increment.
double increment_scale(const Rectangle& rect, const KernelSpec& spec);

/// Signed vertex sum; bit l of the key selects upper (1) or lower (0) along axis l.
double rectangular_increment(const std::map<unsigned, double>& values_at_vertices, std::size_t dim);

/// sum_l |s_l - t_l|^H_l.
double rho_metric(std::span<const double> s, std::span<const double> t, const HurstVector& hurst);

struct HausdorffDims {
    double range = 0.0;
    double graph = 0.0;
    double rho_cube = 0.0;
};

/// Range, graph and rho-dimension of the unit cube for a d-dimensional field.
/// Requires sorted H (ErrorKind::Ordering otherwise).
HausdorffDims hausdorff_dims(const HurstVector& hurst, int d);

}  // namespace lfss
