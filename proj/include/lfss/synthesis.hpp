#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lfss/kernel.hpp"
#include "lfss/noise.hpp"
#include "lfss/wavelet.hpp"

namespace lfss {

enum class Method { Direct, WaveletExact, WaveletIid };
const char* to_string(Method m) noexcept;
/// "direct", "wavelet-exact", "wavelet-iid"; ErrorKind::Configuration otherwise.
Method method_from_string(const std::string& name);

/// Scale cutoff n and spatial cutoff M of the index set
/// {(j, k): |j_l| <= n, |k_l| <= M 2^(n+1)}.
struct TruncationSpec {
    int n = 4;
    double M = 1.0;

    std::int64_t k_max() const;
    void validate() const;
};

struct WaveletIndex {
    int j = 0;
    std::int64_t k = 0;
    friend bool operator==(const WaveletIndex&, const WaveletIndex&) = default;
};

/// Per-axis (j, k) list of a truncation, j-major.
std::vector<WaveletIndex> axis_indices(const TruncationSpec& trunc);

/// Tensor-product evaluation grid; points are enumerated row-major (last axis fastest).
struct TensorGrid {
    std::vector<std::vector<double>> axes;

    std::size_t dim() const noexcept { return axes.size(); }
    std::size_t size() const noexcept;
    std::vector<std::vector<double>> points() const;
    /// n^N points of [lo, hi]^N, endpoints included.
    static TensorGrid regular(std::size_t N, double lo, double hi, std::size_t n);
};

struct NoiseOptions {
    double spacing = 1.0 / 128.0;
    /// Per-axis spacing; empty means `spacing` on every axis.
    std::vector<double> axis_spacing;
    /// Uniform cells reach this far below min(lower bound, 0).
    double buffer = 1.0;
    double ratio = 1.25;
    /// Omitted alpha-mass of the kernel, relative to the slice mass, split over axes.
    double tail_tol = 1e-4;
    double skewness = 0.0;

    double spacing_of(std::size_t axis) const { return axis_spacing.empty() ? spacing : axis_spacing.at(axis); }
};

/// Noise partitions covering every point whose axis-l coordinate lies in bounds[l].
std::vector<Partition1D> noise_partitions(const std::vector<std::pair<double, double>>& bounds,
                                          const KernelSpec& spec, const NoiseOptions& options);

struct Provenance {
    Method method = Method::Direct;
    std::uint64_t seed = 0;
    std::vector<std::uint64_t> streams;
    double alpha = 2.0;
    std::vector<double> H;
    double kappa = 1.0;
    double skewness = 0.0;
    std::optional<TruncationSpec> truncation;
    /// Noise domain and resolution (empty for iid coefficients).
    std::vector<double> noise_lower;
    std::vector<double> noise_upper;
    double noise_spacing = 0.0;
    std::size_t noise_cells = 0;
    double tail_tol = 0.0;
    int vanishing_moments = 0;
    int refinement_level = 0;
    double wavelet_window = 0.0;
};

struct FieldSample {
    std::vector<std::vector<double>> points;
    /// values[coordinate][point]
    std::vector<std::vector<double>> values;
    Provenance provenance;

    std::size_t dim() const noexcept { return points.empty() ? 0 : points.front().size(); }
    std::size_t coordinates() const noexcept { return values.size(); }
};

/// kappa * sum_cells (cell average of h_H(t, .)) dZ at every point.
/// ErrorKind::Tail when the noise domain omits more than `tail_tol` of the kernel mass;
/// an infinite tolerance treats the noise domain as the integration support.
FieldSample direct_synthesis(const std::vector<std::vector<double>>& points, const NoiseGrid& noise,
                             const KernelSpec& spec, double tail_tol = 1e-4);

/// Values on a tensor grid, row-major; same numbers as direct_synthesis on grid.points().
std::vector<double> direct_grid(const TensorGrid& grid, const NoiseGrid& noise, const KernelSpec& spec,
                                double tail_tol = 1e-4);

/// Values along axis `axis` at the coordinates `fixed` (entry `axis` ignored), for t_i = t0 + i * dt, i < count.
/// Uses FFT convolution over the uniform part of the noise when the transect is
/// aligned with it and falls back to the general path otherwise.
std::vector<double> direct_transect(std::size_t axis, std::span<const double> fixed, double t0, double dt,
                                    std::size_t count, const NoiseGrid& noise, const KernelSpec& spec,
                                    double tail_tol = 1e-4);

/// Tensor-product coefficient lattice.
struct CoefficientArray {
    std::vector<std::vector<WaveletIndex>> axes;
    std::vector<double> values;
    Method method = Method::WaveletExact;

    std::size_t dim() const noexcept { return axes.size(); }
    double at(std::span<const std::size_t> idx) const;
};

/// eps_{j,k} = sum_cells prod_l 2^(j_l/alpha) (cell average of psi(2^j_l . - k_l)) dZ.
/// ErrorKind::Resolution unless the finest noise cell is <= 2^-(max j + 3).
CoefficientArray compute_coefficients(const NoiseGrid& noise, const std::vector<std::vector<WaveletIndex>>& axes,
                                      const MotherWavelet& psi);

/// Independent strictly stable coefficients of scale psi_norm^N, keyed by (j, k)
/// so that enlarging the truncation keeps the existing values.
CoefficientArray sample_coefficients_iid(const TruncationSpec& trunc, std::size_t N, double alpha, double skewness,
                                         double psi_norm, std::uint64_t stream);

/// kappa * sum 2^-<j,H> eps_{j,k} prod_l (psi^H_l(2^j_l t_l - k_l) - psi^H_l(-k_l)).
/// `primitives[l]` is psi^{H_l}. ErrorKind::TruncationDomain outside [-M, M]^N.
FieldSample wavelet_synthesis(const std::vector<std::vector<double>>& points, const CoefficientArray& coeffs,
                              const TruncationSpec& trunc, const std::vector<FractionalWavelet>& primitives,
                              const KernelSpec& spec);

/// Same as compute_coefficients followed by wavelet_synthesis on a tensor grid,
/// with the coefficient lattice contracted analytically (never materialized).
std::vector<double> wavelet_exact_grid(const TensorGrid& grid, const NoiseGrid& noise, const TruncationSpec& trunc,
                                       const MotherWavelet& psi, const std::vector<FractionalWavelet>& primitives,
                                       const KernelSpec& spec);

/// Everything needed to synthesize one scalar field.
struct SynthesisConfig {
    Method method = Method::Direct;
    NoiseOptions noise;
    TruncationSpec truncation;
    int vanishing_moments = 6;
    int refinement_level = 10;
    double window = 0.0;  // 0: default_window
};

/// d independent coordinates; coordinate i uses stream derive_stream(seed, i).
FieldSample synthesize_vector(const std::vector<std::vector<double>>& points, int d, const KernelSpec& spec,
                              const SynthesisConfig& config, std::uint64_t seed);

/// Primitives psi^{H_l} for every axis of `spec`, sharing one mother wavelet.
std::vector<FractionalWavelet> make_primitives(std::shared_ptr<const MotherWavelet> psi, const KernelSpec& spec,
                                               double window);

/// 2^(j(1+H)) int path(s) psi^{-H}(2^j s - k) ds for a path sampled at s_i = s0 + i ds.
/// Requires ds <= 2^-(j+4) and a sample window covering the effective support.
double wavelet_transform_G(std::span<const double> path, double s0, double ds, int j, std::int64_t k,
                           const FractionalWavelet& derivative);

/// Sample window [lo, hi] that wavelet_transform_G needs for (j, k).
std::pair<double, double> G_window(int j, std::int64_t k, const FractionalWavelet& derivative);

}  // namespace lfss
