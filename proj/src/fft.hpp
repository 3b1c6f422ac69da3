#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace lfss::detail {

/// Multiply the DFT of a real sequence by `multiplier(k)`, k = 0 .. n/2, and
/// transform back. The multiplier must describe a real operator (Hermitian
/// symmetry is implied by the real-to-complex layout).
void apply_fourier_multiplier(std::vector<double>& data,
                              const std::function<std::complex<double>(std::size_t)>& multiplier);

/// Linear convolution: out[m] = sum_i a[i] b[m - i], size a.size() + b.size() - 1.
std::vector<double> convolve(std::span<const double> a, std::span<const double> b);

}  // namespace lfss::detail
