#include "lfss/wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "fft.hpp"
#include "lfss/errors.hpp"

namespace lfss {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxOrder = 20;

using cld = std::complex<long double>;

long double binomial(int n, int k) {
    long double r = 1.0L;
    for (int i = 1; i <= k; ++i) r = r * static_cast<long double>(n - k + i) / static_cast<long double>(i);
    return r;
}

cld eval_poly(const std::vector<long double>& coef, cld y) {
    cld acc = 0.0L;
    for (auto it = coef.rbegin(); it != coef.rend(); ++it) acc = acc * y + *it;
    return acc;
}

cld eval_poly_derivative(const std::vector<long double>& coef, cld y) {
    cld acc = 0.0L;
    for (std::size_t k = coef.size() - 1; k >= 1; --k) {
        acc = acc * y + static_cast<long double>(k) * coef[k];
        if (k == 1) break;
    }
    return acc;
}

// Values of the scaling function at the integers 0..N from the two-scale relation.
std::vector<double> scaling_at_integers(const std::vector<double>& h) {
    const int N = static_cast<int>(h.size()) - 1;
    if (N == 1) return {1.0, 0.0};
    const int m = N - 1;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m + 1, m);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(m + 1);
    for (int n = 1; n <= N - 1; ++n) {
        for (int j = 1; j <= N - 1; ++j) {
            const int idx = 2 * n - j;
            double c = (idx >= 0 && idx <= N) ? std::numbers::sqrt2 * h[static_cast<std::size_t>(idx)] : 0.0;
            if (n == j) c -= 1.0;
            A(n - 1, j - 1) = c;
        }
    }
    A.row(m).setOnes();
    b(m) = 1.0;
    const Eigen::VectorXd x = A.colPivHouseholderQr().solve(b);
    std::vector<double> phi(static_cast<std::size_t>(N) + 1, 0.0);
    for (int j = 1; j <= N - 1; ++j) phi[static_cast<std::size_t>(j)] = x(j - 1);
    return phi;
}

// One cascade step: samples on the grid 2^-(j-1) to samples on 2^-j.
std::vector<double> cascade_step(const std::vector<double>& coarse, const std::vector<double>& filter,
                                 std::size_t coarse_per_unit) {
    const std::size_t N = filter.size() - 1;
    const std::size_t fine_size = N * coarse_per_unit * 2 + 1;
    std::vector<double> fine(fine_size, 0.0);
    for (std::size_t k = 0; k < fine_size; ++k) {
        double acc = 0.0;
        for (std::size_t m = 0; m <= N; ++m) {
            const std::size_t shift = m * coarse_per_unit;
            if (k < shift) break;
            const std::size_t idx = k - shift;
            if (idx < coarse.size()) acc += filter[m] * coarse[idx];
        }
        fine[k] = std::numbers::sqrt2 * acc;
    }
    return fine;
}

double trapezoid(std::span<const double> v, double h) {
    if (v.size() < 2) return 0.0;
    double acc = 0.5 * (v.front() + v.back());
    for (std::size_t i = 1; i + 1 < v.size(); ++i) acc += v[i];
    return acc * h;
}

double localization_of(std::span<const double> v, double x0, double h) {
    double sup = 0.0;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        double d = 0.0;
        if (n >= 2) {
            if (i == 0) d = (v[1] - v[0]) / h;
            else if (i + 1 == n) d = (v[n - 1] - v[n - 2]) / h;
            else d = (v[i + 1] - v[i - 1]) / (2.0 * h);
        }
        const double x = x0 + static_cast<double>(i) * h;
        const double w = (1.0 + std::abs(x)) * (1.0 + std::abs(x));
        sup = std::max(sup, w * (std::abs(v[i]) + std::abs(d)));
    }
    return sup;
}

// Fractional wavelet samples on the periodic grid -W + i h, i < n.
std::vector<double> fractional_samples(const MotherWavelet& psi, double order, Direction direction,
                                       std::size_t n) {
    const double h = psi.grid_spacing;
    const double W = 0.5 * static_cast<double>(n) * h;
    std::vector<double> data(n, 0.0);
    const auto offset = static_cast<std::size_t>(std::llround((W - psi.support_halfwidth) / h));
    for (std::size_t m = 0; m < psi.values.size() && offset + m < n; ++m) data[offset + m] = psi.values[m];

    const double gamma_c = std::tgamma(order);
    const std::complex<double> phase = std::polar(1.0, -order * kPi / 2.0);
    const double dxi = 2.0 * kPi / (static_cast<double>(n) * h);
    const bool even = n % 2 == 0;
    detail::apply_fourier_multiplier(data, [&](std::size_t k) -> std::complex<double> {
        if (k == 0 || (even && k == n / 2)) return 0.0;
        const double xi = dxi * static_cast<double>(k);
        if (direction == Direction::Primitive) return gamma_c * std::pow(xi, -order) * phase;
        return std::pow(xi, order) / gamma_c * phase;
    });
    return data;
}

std::size_t grid_points(double window, double h) {
    return static_cast<std::size_t>(std::llround(2.0 * window / h));
}

double inside_mass_fraction(std::span<const double> v, double h, double inner) {
    const double W = 0.5 * static_cast<double>(v.size()) * h;
    double total = 0.0;
    double inside = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double a = std::abs(v[i]);
        total += a;
        if (std::abs(-W + static_cast<double>(i) * h) <= inner) inside += a;
    }
    return total > 0.0 ? inside / total : 1.0;
}

}  // namespace

std::vector<double> daubechies_filter(int p) {
    require(p >= 1, ErrorKind::ParameterDomain, "vanishing moments must be >= 1");
    require(p <= kMaxOrder, ErrorKind::UnsupportedOrder,
            "Daubechies filters are supported up to order " + std::to_string(kMaxOrder));
    std::vector<long double> P(static_cast<std::size_t>(p));
    for (int k = 0; k < p; ++k) P[static_cast<std::size_t>(k)] = binomial(p - 1 + k, k);

    std::vector<cld> zroots;
    if (p > 1) {
        const int deg = p - 1;
        Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
        const auto lead = static_cast<double>(P.back());
        for (int i = 0; i < deg; ++i) {
            companion(0, i) = -static_cast<double>(P[static_cast<std::size_t>(deg - 1 - i)]) / lead;
            if (i + 1 < deg) companion(i + 1, i) = 1.0;
        }
        Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
        for (int i = 0; i < deg; ++i) {
            cld y(solver.eigenvalues()(i).real(), solver.eigenvalues()(i).imag());
            for (int it = 0; it < 50; ++it) {
                const cld step = eval_poly(P, y) / eval_poly_derivative(P, y);
                y -= step;
                if (std::abs(step) < 1e-19L * (1.0L + std::abs(y))) break;
            }
            const cld c = 1.0L - 2.0L * y;
            const cld disc = std::sqrt(c * c - 1.0L);
            cld z = c + disc;
            if (std::abs(z) > 1.0L) z = c - disc;
            zroots.push_back(z);
        }
    }
    // Q(z) = (1 + z)^p prod (z - z_i), ascending powers.
    std::vector<cld> q{1.0L};
    auto multiply_linear = [&q](cld root) {  // by (z - root)
        std::vector<cld> r(q.size() + 1, 0.0L);
        for (std::size_t i = 0; i < q.size(); ++i) {
            r[i + 1] += q[i];
            r[i] -= root * q[i];
        }
        q = std::move(r);
    };
    for (int i = 0; i < p; ++i) multiply_linear(-1.0L);
    for (const auto& z : zroots) multiply_linear(z);

    long double sum = 0.0L;
    for (const auto& c : q) sum += c.real();
    std::vector<double> h(q.size());
    const long double norm = std::sqrt(2.0L) / sum;
    for (std::size_t i = 0; i < q.size(); ++i) h[q.size() - 1 - i] = static_cast<double>(q[i].real() * norm);
    return h;
}

double MotherWavelet::value(double x) const noexcept {
    const double pos = (x + support_halfwidth) / grid_spacing;
    if (pos < 0.0 || pos > static_cast<double>(values.size() - 1)) return 0.0;
    const auto i = static_cast<std::size_t>(pos);
    if (i + 1 >= values.size()) return values.back();
    const double f = pos - static_cast<double>(i);
    return values[i] + f * (values[i + 1] - values[i]);
}

double MotherWavelet::integral_to(double x) const noexcept {
    const double pos = (x + support_halfwidth) / grid_spacing;
    if (pos <= 0.0) return 0.0;
    if (pos >= static_cast<double>(values.size() - 1)) return cumulative.back();
    const auto i = static_cast<std::size_t>(pos);
    const double d = (pos - static_cast<double>(i)) * grid_spacing;
    return cumulative[i] + d * values[i] + 0.5 * d * d * (values[i + 1] - values[i]) / grid_spacing;
}

double MotherWavelet::lp_norm(double p) const {
    std::vector<double> v(values.size());
    std::transform(values.begin(), values.end(), v.begin(), [p](double x) { return std::pow(std::abs(x), p); });
    return std::pow(trapezoid(v, grid_spacing), 1.0 / p);
}

double MotherWavelet::moment(int k) const {
    std::vector<double> v(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double x = -support_halfwidth + static_cast<double>(i) * grid_spacing;
        v[i] = std::pow(x, k) * values[i];
    }
    return trapezoid(v, grid_spacing);
}

MotherWavelet build_daubechies(int vanishing_moments, int refinement_level) {
    require(refinement_level >= 6, ErrorKind::Precondition, "refinement level must be >= 6");
    require(refinement_level <= 16, ErrorKind::ParameterDomain, "refinement level must be <= 16");
    const auto h = daubechies_filter(vanishing_moments);
    const std::size_t N = h.size() - 1;
    std::vector<double> g(h.size());
    for (std::size_t m = 0; m <= N; ++m) g[m] = (m % 2 == 0 ? 1.0 : -1.0) * h[N - m];

    std::vector<double> phi = scaling_at_integers(h);
    std::size_t per_unit = 1;
    for (int j = 1; j < refinement_level; ++j) {
        phi = cascade_step(phi, h, per_unit);
        per_unit *= 2;
    }
    MotherWavelet psi;
    psi.vanishing_moments = vanishing_moments;
    psi.refinement_level = refinement_level;
    // Integer shift keeps the dyadic translation lattice: raw support [0, 2p-1]
    // becomes [1-p, p], stored on [-p, p].
    psi.support_halfwidth = static_cast<double>(vanishing_moments);
    psi.grid_spacing = std::ldexp(1.0, -refinement_level);
    const auto raw = cascade_step(phi, g, per_unit);
    psi.values.assign(2 * per_unit, 0.0);
    psi.values.insert(psi.values.end(), raw.begin(), raw.end());

    psi.cumulative.assign(psi.values.size(), 0.0);
    for (std::size_t i = 1; i < psi.values.size(); ++i)
        psi.cumulative[i] = psi.cumulative[i - 1] + 0.5 * psi.grid_spacing * (psi.values[i - 1] + psi.values[i]);
    return psi;
}

double default_window(const MotherWavelet& psi) { return 64.0 * psi.support_halfwidth; }

double FractionalWavelet::value(double x) const noexcept {
    const double pos = (x + window) / spacing;
    if (!(pos >= 0.0) || pos > static_cast<double>(values.size() - 1)) return 0.0;
    const auto i = static_cast<std::size_t>(pos);
    if (i + 1 >= values.size()) return values.back();
    const double f = pos - static_cast<double>(i);
    return values[i] + f * (values[i + 1] - values[i]);
}

double FractionalWavelet::integral() const { return trapezoid(values, spacing); }

std::pair<double, double> FractionalWavelet::effective_support(double tail_fraction) const {
    double total = 0.0;
    for (double v : values) total += std::abs(v);
    const double cut = tail_fraction * total;
    std::size_t lo = 0;
    double acc = 0.0;
    while (lo + 1 < values.size() && acc + std::abs(values[lo]) <= cut) acc += std::abs(values[lo++]);
    std::size_t hi = values.size() - 1;
    acc = 0.0;
    while (hi > lo && acc + std::abs(values[hi]) <= cut) acc += std::abs(values[hi--]);
    return {x_at(lo), x_at(hi)};
}

FractionalWavelet fractionalize(std::shared_ptr<const MotherWavelet> psi, double exponent, double alpha,
                                Direction direction, double window, const FractionalizeOptions& options) {
    require(psi != nullptr, ErrorKind::Input, "no mother wavelet supplied");
    require(alpha > 0.0 && alpha <= 2.0, ErrorKind::ParameterDomain, "alpha must lie in (0, 2]");
    const double q = exponent - 1.0 / alpha;
    if (!(q > 0.0 && q < 1.0)) {
        std::ostringstream os;
        os << "H - 1/alpha = " << q << " must lie in (0, 1)";
        throw Error(ErrorKind::Regime, os.str());
    }
    require(psi->vanishing_moments >= 3, ErrorKind::Precondition,
            "fractional wavelets need a mother wavelet with at least 3 vanishing moments");
    const double h = psi->grid_spacing;
    const std::size_t n = grid_points(window, h);
    const double W = 0.5 * static_cast<double>(n) * h;
    require(W > psi->support_halfwidth, ErrorKind::Window, "window must exceed the wavelet support");

    FractionalWavelet fw;
    fw.base = psi;
    fw.exponent = exponent;
    fw.alpha = alpha;
    fw.direction = direction;
    fw.window = W;
    fw.spacing = h;
    const double order = q + 1.0;

    if (options.enforce_window_mass) {
        const auto wide = fractional_samples(*psi, order, direction, 2 * n);
        const double frac = inside_mass_fraction(wide, h, W);
        if (frac < options.min_window_mass) {
            double suggested = 4.0 * W;
            for (double w = W; w <= 2.0 * W; w *= 1.1) {
                if (inside_mass_fraction(wide, h, w) >= options.min_window_mass) {
                    suggested = 1.25 * w;
                    break;
                }
            }
            std::ostringstream os;
            os << "window W = " << W << " holds only " << frac << " of the mass; use W >= " << suggested;
            throw Error(ErrorKind::Window, os.str());
        }
    }
    fw.values = fractional_samples(*psi, order, direction, n);
    fw.decay_constant = localization_of(fw.values, -W, h);
    std::tie(fw.support_lo, fw.support_hi) = fw.effective_support(1e-10);
    return fw;
}

double check_localization(const FractionalWavelet& phi) { return localization_of(phi.values, -phi.window, phi.spacing); }

double check_localization(const MotherWavelet& psi) {
    return localization_of(psi.values, -psi.support_halfwidth, psi.grid_spacing);
}

LocalizationStability localization_stability(std::shared_ptr<const MotherWavelet> psi, double exponent,
                                             double alpha, Direction direction, double window,
                                             const FractionalizeOptions& options) {
    LocalizationStability out;
    out.at_window = check_localization(fractionalize(psi, exponent, alpha, direction, window, options));
    out.at_double_window =
        check_localization(fractionalize(psi, exponent, alpha, direction, 2.0 * window, options));
    out.relative_change = std::abs(out.at_double_window - out.at_window) / out.at_double_window;
    out.stable = out.relative_change < 0.05;
    return out;
}

double biorth_inner(const FractionalWavelet& a, const FractionalWavelet& b, int J, int K, int J2, int K2) {
    require(a.direction == Direction::Primitive && b.direction == Direction::Derivative,
            ErrorKind::Configuration, "biorth_inner expects (primitive, derivative)");
    require(a.base && b.base &&
                (a.base == b.base || (a.base->vanishing_moments == b.base->vanishing_moments &&
                                      a.base->refinement_level == b.base->refinement_level)),
            ErrorKind::Configuration, "fractional wavelets come from different mother wavelets");
    require(a.exponent == b.exponent && a.alpha == b.alpha, ErrorKind::Configuration,
            "fractional wavelets have different exponents");

    // Integrate on the grid of the finer of the two dilated functions.
    const bool a_fine = J >= J2;
    const FractionalWavelet& fine = a_fine ? a : b;
    const FractionalWavelet& coarse = a_fine ? b : a;
    const int Jf = a_fine ? J : J2;
    const int Kf = a_fine ? K : K2;
    const int Jc = a_fine ? J2 : J;
    const int Kc = a_fine ? K2 : K;
    const double ratio = std::ldexp(1.0, Jc - Jf);
    // coarse argument = ratio * (u + Kf) - Kc
    const double lo = std::max(fine.support_lo, (coarse.support_lo + Kc) / ratio - Kf);
    const double hi = std::min(fine.support_hi, (coarse.support_hi + Kc) / ratio - Kf);
    if (!(hi > lo)) return 0.0;
    const double h = fine.spacing;
    const auto i0 = static_cast<std::size_t>(std::max(0.0, std::floor((lo + fine.window) / h)));
    const auto i1 = std::min(fine.values.size() - 1, static_cast<std::size_t>(std::ceil((hi + fine.window) / h)));
    double acc = 0.0;
    for (std::size_t i = i0; i <= i1; ++i) {
        const double u = fine.x_at(i);
        acc += fine.values[i] * coarse.value(ratio * (u + Kf) - Kc);
    }
    return acc * h * std::ldexp(1.0, -Jf);
}

}  // namespace lfss
