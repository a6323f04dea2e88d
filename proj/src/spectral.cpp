// spectral.cpp — FFT-backed pieces of the analysis module (FFTW3)

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <numeric>

#include <fftw3.h>

#include "oscibath/analysis.hpp"

namespace oscibath {

namespace {

// FFTW planning is not thread-safe; execution of distinct plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

class ComplexFft {
public:
    ComplexFft(std::size_t n, int sign) : n_(n) {
        data_ = fftw_alloc_complex(n);
        std::lock_guard lock(planner_mutex());
        plan_ = fftw_plan_dft_1d(static_cast<int>(n), data_, data_, sign, FFTW_ESTIMATE);
    }
    ~ComplexFft() {
        {
            std::lock_guard lock(planner_mutex());
            fftw_destroy_plan(plan_);
        }
        fftw_free(data_);
    }
    ComplexFft(const ComplexFft&) = delete;
    ComplexFft& operator=(const ComplexFft&) = delete;

    std::complex<double>* data() { return reinterpret_cast<std::complex<double>*>(data_); }
    void execute() { fftw_execute(plan_); }
    std::size_t size() const { return n_; }

private:
    std::size_t n_;
    fftw_complex* data_{nullptr};
    fftw_plan plan_{nullptr};
};

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace

std::vector<std::complex<double>> analytic_signal(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n == 0) return {};
    ComplexFft forward(n, FFTW_FORWARD);
    ComplexFft backward(n, FFTW_BACKWARD);

    auto* buf = forward.data();
    for (std::size_t i = 0; i < n; ++i) buf[i] = {x[i], 0.0};
    forward.execute();

    // Keep DC (and Nyquist for even n), double positive frequencies, drop negative ones.
    auto* spec = backward.data();
    for (std::size_t k = 0; k < n; ++k) {
        double gain = 0.0;
        if (k == 0 || (n % 2 == 0 && k == n / 2)) gain = 1.0;
        else if (k < (n + 1) / 2) gain = 2.0;
        spec[k] = buf[k] * gain;
    }
    backward.execute();

    std::vector<std::complex<double>> z(n);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = spec[i] * scale;
    return z;
}

double spectral_period(std::span<const double> x, double dt, double max_period) {
    const std::size_t n = x.size();
    const std::size_t m = next_pow2(16 * n);
    ComplexFft fft(m, FFTW_FORWARD);
    auto* buf = fft.data();

    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    for (std::size_t i = 0; i < m; ++i) buf[i] = {0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        const double hann =
            0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n - 1)));
        buf[i] = {hann * (x[i] - mean), 0.0};
    }
    fft.execute();

    const double span = static_cast<double>(m) * dt;  // f_k = k / span
    const auto k_lo = static_cast<std::size_t>(std::max(1.0, std::ceil(span / max_period)));
    const std::size_t k_hi = m / 2 - 1;
    std::size_t best = k_lo;
    double best_power = -1.0;
    for (std::size_t k = k_lo; k <= k_hi; ++k) {
        const double p = std::norm(buf[k]);
        if (p > best_power) {
            best_power = p;
            best = k;
        }
    }
    double k_star = static_cast<double>(best);
    if (best > k_lo && best < k_hi) {
        const double l = std::norm(buf[best - 1]), c = best_power, r = std::norm(buf[best + 1]);
        if (l > 0.0 && c > 0.0 && r > 0.0) {
            const double ll = std::log(l), lc = std::log(c), lr = std::log(r);
            const double curv = ll - 2.0 * lc + lr;
            if (curv < 0.0) k_star += std::clamp(0.5 * (ll - lr) / curv, -0.5, 0.5);
        }
    }
    return span / k_star;
}

}  // namespace oscibath
