#pragma once

#include <cstddef>
#include <vector>

namespace lfss {

/// Hurst indices (H_1, ..., H_N) together with the stability index.
/// The continuity regime requires 1/alpha < H_1 <= ... <= H_N < 1.
struct HurstVector {
    double alpha = 2.0;
    std::vector<double> H;

    std::size_t dim() const noexcept { return H.size(); }

    /// Kernel exponent H_l - 1/alpha of axis l.
    double exponent(std::size_t l) const { return H[l] - 1.0 / alpha; }

    /// Full check: ErrorKind::Ordering for an unsorted vector, ErrorKind::Regime
    /// when H_1 <= 1/alpha or H_N >= 1, ParameterDomain for a bad alpha.
    void validate() const;

    /// Ordering and 0 < H_l < 1 only; no constraint against alpha.
    void validate_ordering() const;
};

}  // namespace lfss
