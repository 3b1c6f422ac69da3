#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace lfss {

/// Cells [edges[i], edges[i+1]) of one axis.
struct Partition1D {
    std::vector<double> edges;

    std::size_t cells() const noexcept { return edges.empty() ? 0 : edges.size() - 1; }
    double width(std::size_t i) const noexcept { return edges[i + 1] - edges[i]; }
    double lower() const noexcept { return edges.front(); }
    double upper() const noexcept { return edges.back(); }
    double min_width() const noexcept;

    /// Spacing h on [lo, hi]; hi - lo must be a multiple of h (rounded).
    static Partition1D uniform(double lo, double hi, double h);

    /// Uniform core [core_lo, core_hi] at spacing h, extended below by cells
    /// whose widths grow geometrically by `ratio` until the edge reaches -far.
    static Partition1D graded(double core_lo, double core_hi, double h, double far, double ratio = 1.25);

    /// Cells of relative width `rel` around the origin between |s| = inner and
    /// `outer`, a single cell on each side of 0 below `inner`, nothing above
    /// `outer`, and a graded tail below -outer down to -far.
    static Partition1D log_graded(double inner, double outer, double rel, double far, double ratio = 1.25);
};

/// Discretized stable random measure: one independent increment per cell of a
/// tensor-product partition, scale (cell volume)^(1/alpha). Cell c (row-major,
/// last axis fastest) draws from counter c of `stream`.
class NoiseGrid {
public:
    NoiseGrid() = default;
    static NoiseGrid generate(std::vector<Partition1D> axes, double alpha, double skewness, std::uint64_t stream);

    std::size_t dim() const noexcept { return axes_.size(); }
    const std::vector<Partition1D>& axes() const noexcept { return axes_; }
    const Partition1D& axis(std::size_t l) const { return axes_[l]; }
    double alpha() const noexcept { return alpha_; }
    double skewness() const noexcept { return skewness_; }
    std::uint64_t stream() const noexcept { return stream_; }
    std::size_t cells() const noexcept { return increments_.size(); }
    std::span<const double> increments() const noexcept { return increments_; }
    double increment(std::span<const std::size_t> cell) const;
    std::size_t linear_index(std::span<const std::size_t> cell) const;
    /// Whether the increments are fresh draws or sums of a finer grid.
    bool coarsened() const noexcept { return coarsened_; }

    /// Merge neighbouring cell pairs along every axis (a trailing odd cell is
    /// kept) and sum their increments. The result has the law of a grid
    /// generated directly on the coarse partition.
    NoiseGrid coarsen() const;

private:
    std::vector<Partition1D> axes_;
    double alpha_ = 2.0;
    double skewness_ = 0.0;
    std::uint64_t stream_ = 0;
    bool coarsened_ = false;
    std::vector<double> increments_;
};

}  // namespace lfss
