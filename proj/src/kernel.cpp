#include "lfss/kernel.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "lfss/errors.hpp"

namespace lfss {

namespace {

// Beyond this point the kernel slice is replaced by its two-term asymptotic expansion.
constexpr double kAsymptoticStart = 1e6;

// (v + t)^p - v^p for v > 0, v + t > 0, without cancellation when |t| << v.
double shifted_power_difference(double v, double t, double p) noexcept {
    return std::pow(v, p) * std::expm1(p * std::log1p(t / v));
}

// D(s) = (t - s)_+^p - (-s)_+^p
double primitive_difference(double t, double s, double p) noexcept {
    if (s < 0.0 && s < t) return shifted_power_difference(-s, t, p);
    return positive_power(t - s, p) - positive_power(-s, p);
}

void check_quadrature(double value, double error, const QuadratureSpec& quad, const char* what) {
    if (!(std::isfinite(value) && error <= 10.0 * quad.rel_tol * std::abs(value) + 1e-300)) {
        std::ostringstream os;
        os << what << ": quadrature error estimate " << error << " exceeds tolerance for value " << value;
        throw Error(ErrorKind::Tolerance, os.str());
    }
}

}  // namespace

double positive_power(double x, double q) noexcept {
    if (!(x > 0.0)) return 0.0;
    return q == 0.0 ? 1.0 : std::pow(x, q);
}

double kernel_factor(double t, double s, double q) noexcept {
    if (t == 0.0) return 0.0;
    if (s < 0.0 && s < t) return shifted_power_difference(-s, t, q);
    return positive_power(t - s, q) - positive_power(-s, q);
}

double kernel_factor_cell_average(double t, double a, double b, double q) noexcept {
    if (t == 0.0) return 0.0;
    const double p = q + 1.0;
    return (primitive_difference(t, a, p) - primitive_difference(t, b, p)) / (p * (b - a));
}

double kernel_h(std::span<const double> t, std::span<const double> s, const KernelSpec& spec) {
    require(t.size() == spec.dim() && s.size() == spec.dim(), ErrorKind::Input, "point dimension mismatch");
    double v = spec.kappa;
    for (std::size_t l = 0; l < spec.dim(); ++l) v *= kernel_factor(t[l], s[l], spec.hurst.exponent(l));
    return v;
}

double slice_mass(double q, double alpha, const QuadratureSpec& quad) {
    require(alpha > 0.0 && alpha <= 2.0, ErrorKind::ParameterDomain, "alpha must lie in (0, 2]");
    require(q > -1.0 / alpha && q < 1.0, ErrorKind::ParameterDomain, "kernel exponent out of range");
    if (q == 0.0) return 1.0;
    const double decay = (1.0 - q) * alpha - 1.0;
    require(decay > 0.0, ErrorKind::Regime, "kernel slice is not in L^alpha: need H < 1");

    // s in [0, 1): (1 - s)^(q alpha)
    const double near = 1.0 / (q * alpha + 1.0);
    // s = -u < 0: ((1 + u)^q - u^q)^alpha
    auto g = [q, alpha](double u) {
        if (u <= 0.0) return 1.0;
        return std::pow(std::abs(shifted_power_difference(u, 1.0, q)), alpha);
    };
    boost::math::quadrature::tanh_sinh<double> ts(quad.max_depth);
    double err0 = 0.0;
    const double inner = ts.integrate(g, 0.0, 1.0, quad.rel_tol, &err0);
    check_quadrature(inner, err0, quad, "slice mass on [0, 1]");

    auto g_log = [&g](double w) {
        const double u = std::exp(w);
        return g(u) * u;
    };
    double err1 = 0.0;
    const double middle = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        g_log, 0.0, std::log(kAsymptoticStart), static_cast<unsigned>(quad.max_depth), quad.rel_tol, &err1);
    check_quadrature(middle, err1, quad, "slice mass on [1, U]");

    // g(u) = q^alpha u^{-(decay + 1)} (1 + (q - 1) / (2u) + O(u^-2))^alpha
    const double U = kAsymptoticStart;
    const double c = alpha * (q - 1.0) / 2.0;
    const double tail =
        std::pow(std::abs(q), alpha) * (std::pow(U, -decay) / decay + c * std::pow(U, -decay - 1.0) / (decay + 1.0));
    return near + inner + middle + tail;
}

double normalize_kappa(const HurstVector& hurst, const QuadratureSpec& quad) {
    double kappa = 1.0;
    for (std::size_t l = 0; l < hurst.dim(); ++l)
        kappa *= std::pow(slice_mass(hurst.exponent(l), hurst.alpha, quad), -1.0 / hurst.alpha);
    return kappa;
}

KernelSpec make_kernel_spec(const HurstVector& hurst, const QuadratureSpec& quad) {
    hurst.validate();
    KernelSpec spec;
    spec.hurst = hurst;
    spec.quadrature = quad;
    spec.kappa = 1.0;
    for (std::size_t l = 0; l < hurst.dim(); ++l) {
        spec.slice_mass.push_back(slice_mass(hurst.exponent(l), hurst.alpha, quad));
        spec.kappa *= std::pow(spec.slice_mass.back(), -1.0 / hurst.alpha);
    }
    return spec;
}

double slice_norm(double u, double q, double alpha, const QuadratureSpec& quad) {
    if (u == 0.0) return 0.0;
    return std::pow(std::pow(std::abs(u), q * alpha + 1.0) * slice_mass(q, alpha, quad), 1.0 / alpha);
}

double slice_tail_mass(double u, double q, double alpha, double R) noexcept {
    if (u == 0.0 || q == 0.0) return 0.0;
    const double decay = (1.0 - q) * alpha - 1.0;
    return std::pow(std::abs(q * u), alpha) * std::pow(R, -decay) / decay;
}

double required_tail_radius(double u, double q, double alpha, double tol, const QuadratureSpec& quad) {
    require(tol > 0.0, ErrorKind::ParameterDomain, "tail tolerance must be positive");
    if (u == 0.0 || q == 0.0) return std::abs(u);
    const double decay = (1.0 - q) * alpha - 1.0;
    require(decay > 0.0, ErrorKind::Regime, "kernel slice is not in L^alpha: need H < 1");
    const double mass = std::pow(std::abs(u), q * alpha + 1.0) * slice_mass(q, alpha, quad);
    const double R = std::pow(std::pow(std::abs(q * u), alpha) / (decay * tol * mass), 1.0 / decay);
    // the asymptotic form needs R well beyond |u|
    return std::max(R, 8.0 * std::abs(u) + 1.0);
}

void Rectangle::validate() const {
    require(lower.size() == upper.size() && !lower.empty(), ErrorKind::Input, "rectangle corners differ in dimension");
    for (std::size_t j = 0; j < lower.size(); ++j)
        require(lower[j] < upper[j], ErrorKind::Precondition,
                "rectangle side " + std::to_string(j + 1) + " is degenerate");
}

double increment_scale(const Rectangle& rect, const KernelSpec& spec) {
    rect.validate();
    require(rect.lower.size() == spec.dim(), ErrorKind::Input, "rectangle dimension mismatch");
    double v = 1.0;
    for (std::size_t j = 0; j < spec.dim(); ++j) v *= std::pow(rect.upper[j] - rect.lower[j], spec.hurst.H[j]);
    return v;
}

double rectangular_increment(const std::map<unsigned, double>& values_at_vertices, std::size_t dim) {
    require(dim >= 1 && dim < 32, ErrorKind::Input, "unsupported dimension");
    const unsigned count = 1u << dim;
    double acc = 0.0;
    for (unsigned delta = 0; delta < count; ++delta) {
        const auto it = values_at_vertices.find(delta);
        require(it != values_at_vertices.end(), ErrorKind::Input,
                "missing vertex value for selector " + std::to_string(delta));
        const int ones = std::popcount(delta);
        acc += ((static_cast<int>(dim) - ones) % 2 == 0 ? 1.0 : -1.0) * it->second;
    }
    return acc;
}

double rho_metric(std::span<const double> s, std::span<const double> t, const HurstVector& hurst) {
    require(s.size() == hurst.dim() && t.size() == hurst.dim(), ErrorKind::Input, "point dimension mismatch");
    double v = 0.0;
    for (std::size_t l = 0; l < s.size(); ++l) v += std::pow(std::abs(s[l] - t[l]), hurst.H[l]);
    return v;
}

HausdorffDims hausdorff_dims(const HurstVector& hurst, int d) {
    hurst.validate_ordering();
    require(d >= 1, ErrorKind::ParameterDomain, "d must be a positive integer");
    const std::size_t N = hurst.dim();
    const auto dd = static_cast<double>(d);
    double total = 0.0;
    for (double h : hurst.H) total += 1.0 / h;

    HausdorffDims out;
    out.rho_cube = total;
    out.range = std::min(dd, total);
    if (total <= dd) {
        out.graph = total;
        return out;
    }
    double partial = 0.0;
    for (std::size_t k = 1; k <= N; ++k) {
        const double before = partial;
        partial += 1.0 / hurst.H[k - 1];
        if (before <= dd && dd < partial) {
            const double Hk = hurst.H[k - 1];
            double g = static_cast<double>(N - k) + (1.0 - Hk) * dd;
            for (std::size_t l = 0; l < k; ++l) g += Hk / hurst.H[l];
            out.graph = g;
            return out;
        }
    }
    out.graph = total;  // unreachable for total > d
    return out;
}

}  // namespace lfss
