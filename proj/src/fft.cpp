#include "fft.hpp"

#include <fftw3.h>

#include <mutex>

namespace lfss::detail {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct ComplexBuffer {
    explicit ComplexBuffer(std::size_t n) : ptr(fftw_alloc_complex(n)) {}
    ~ComplexBuffer() { fftw_free(ptr); }
    ComplexBuffer(const ComplexBuffer&) = delete;
    ComplexBuffer& operator=(const ComplexBuffer&) = delete;
    fftw_complex* ptr;
};

struct RealBuffer {
    explicit RealBuffer(std::size_t n) : ptr(fftw_alloc_real(n)) {}
    ~RealBuffer() { fftw_free(ptr); }
    RealBuffer(const RealBuffer&) = delete;
    RealBuffer& operator=(const RealBuffer&) = delete;
    double* ptr;
};

class Plan {
public:
    template <typename Make>
    explicit Plan(Make make) {
        std::lock_guard lock(planner_mutex());
        plan_ = make();
    }
    ~Plan() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan_);
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;
    void execute() const { fftw_execute(plan_); }

private:
    fftw_plan plan_;
};

std::size_t good_size(std::size_t n) {
    std::size_t m = 1;
    while (m < n) m <<= 1;
    // 3 * 2^k is also fast and often closer
    if (m / 4 * 3 >= n) return m / 4 * 3;
    return m;
}

}  // namespace

void apply_fourier_multiplier(std::vector<double>& data,
                              const std::function<std::complex<double>(std::size_t)>& multiplier) {
    const std::size_t n = data.size();
    const std::size_t nc = n / 2 + 1;
    RealBuffer real(n);
    ComplexBuffer spec(nc);
    const auto ni = static_cast<int>(n);
    Plan forward([&] { return fftw_plan_dft_r2c_1d(ni, real.ptr, spec.ptr, FFTW_ESTIMATE); });
    Plan backward([&] { return fftw_plan_dft_c2r_1d(ni, spec.ptr, real.ptr, FFTW_ESTIMATE); });
    std::copy(data.begin(), data.end(), real.ptr);
    forward.execute();
    for (std::size_t k = 0; k < nc; ++k) {
        const std::complex<double> v(spec.ptr[k][0], spec.ptr[k][1]);
        const auto w = v * multiplier(k);
        spec.ptr[k][0] = w.real();
        spec.ptr[k][1] = w.imag();
    }
    backward.execute();
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) data[i] = real.ptr[i] * inv;
}

std::vector<double> convolve(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) return {};
    const std::size_t out_size = a.size() + b.size() - 1;
    const std::size_t n = good_size(out_size);
    const std::size_t nc = n / 2 + 1;
    RealBuffer ra(n);
    RealBuffer rb(n);
    ComplexBuffer ca(nc);
    ComplexBuffer cb(nc);
    const auto ni = static_cast<int>(n);
    Plan fa([&] { return fftw_plan_dft_r2c_1d(ni, ra.ptr, ca.ptr, FFTW_ESTIMATE); });
    Plan fb([&] { return fftw_plan_dft_r2c_1d(ni, rb.ptr, cb.ptr, FFTW_ESTIMATE); });
    Plan inv([&] { return fftw_plan_dft_c2r_1d(ni, ca.ptr, ra.ptr, FFTW_ESTIMATE); });
    std::fill(ra.ptr, ra.ptr + n, 0.0);
    std::fill(rb.ptr, rb.ptr + n, 0.0);
    std::copy(a.begin(), a.end(), ra.ptr);
    std::copy(b.begin(), b.end(), rb.ptr);
    fa.execute();
    fb.execute();
    for (std::size_t k = 0; k < nc; ++k) {
        const double re = ca.ptr[k][0] * cb.ptr[k][0] - ca.ptr[k][1] * cb.ptr[k][1];
        const double im = ca.ptr[k][0] * cb.ptr[k][1] + ca.ptr[k][1] * cb.ptr[k][0];
        ca.ptr[k][0] = re;
        ca.ptr[k][1] = im;
    }
    inv.execute();
    std::vector<double> out(out_size);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < out_size; ++i) out[i] = ra.ptr[i] * scale;
    return out;
}

}  // namespace lfss::detail
