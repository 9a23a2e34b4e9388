#include "stai/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>

#include "stai/errors.hpp"

namespace stai {

namespace {
// FFTW's planner is not thread-safe; execution of distinct plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
} // namespace

FftWorkspace::FftWorkspace(int n) : n_(n) {
    if (n <= 0) throw NumericsError("FFT size must be positive");
    buf_ = reinterpret_cast<std::complex<double>*>(fftw_alloc_complex(n_));
    if (buf_ == nullptr) throw NumericsError("FFT buffer allocation failed");
    auto* raw = reinterpret_cast<fftw_complex*>(buf_);
    std::lock_guard<std::mutex> lock(planner_mutex());
    // FFTW_ESTIMATE keeps plan selection deterministic run to run.
    plan_fwd_ = fftw_plan_dft_1d(n_, raw, raw, FFTW_FORWARD, FFTW_ESTIMATE);
    plan_bwd_ = fftw_plan_dft_1d(n_, raw, raw, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (plan_fwd_ == nullptr || plan_bwd_ == nullptr) {
        throw NumericsError("FFTW plan creation failed");
    }
}

FftWorkspace::~FftWorkspace() {
    if (buf_ == nullptr) return;
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
    fftw_free(buf_);
}

FftWorkspace::FftWorkspace(FftWorkspace&& other) noexcept
    : n_(other.n_), plan_fwd_(other.plan_fwd_), plan_bwd_(other.plan_bwd_), buf_(other.buf_) {
    other.buf_ = nullptr;
    other.plan_fwd_ = nullptr;
    other.plan_bwd_ = nullptr;
}

std::span<std::complex<double>> FftWorkspace::data() { return {buf_, static_cast<std::size_t>(n_)}; }

void FftWorkspace::forward() { fftw_execute(static_cast<fftw_plan>(plan_fwd_)); }

void FftWorkspace::backward() {
    fftw_execute(static_cast<fftw_plan>(plan_bwd_));
    const double inv = 1.0 / n_;
    for (int i = 0; i < n_; ++i) buf_[i] *= inv;
}

void FftWorkspace::load(std::span<const std::complex<double>> src) {
    if (static_cast<int>(src.size()) != n_) throw NumericsError("FFT size mismatch");
    std::copy(src.begin(), src.end(), buf_);
}

void FftWorkspace::store(std::span<std::complex<double>> dst) const {
    if (static_cast<int>(dst.size()) != n_) throw NumericsError("FFT size mismatch");
    std::copy(buf_, buf_ + n_, dst.begin());
}

void FftWorkspace::forward(std::vector<std::complex<double>>& inout) {
    load(inout);
    forward();
    store(inout);
}

void FftWorkspace::backward(std::vector<std::complex<double>>& inout) {
    load(inout);
    backward();
    store(inout);
}

} // namespace stai
