#ifndef STAI_FFT_HPP
#define STAI_FFT_HPP

#include <complex>
#include <span>
#include <vector>

namespace stai {

/// One FFT scratch context: plans plus an aligned in-place buffer. Each
/// propagation task owns its workspace; nothing is shared between threads
/// except the (mutex-guarded) planner.
class FftWorkspace {
public:
    explicit FftWorkspace(int n);
    ~FftWorkspace();
    FftWorkspace(const FftWorkspace&) = delete;
    FftWorkspace& operator=(const FftWorkspace&) = delete;
    FftWorkspace(FftWorkspace&& other) noexcept;
    FftWorkspace& operator=(FftWorkspace&&) = delete;

    int size() const { return n_; }

    /// The in-place working buffer of length n.
    std::span<std::complex<double>> data();

    /// Unnormalized forward transform of the working buffer.
    void forward();
    /// Inverse transform scaled by 1/n (round trip is the identity).
    void backward();

    /// Convenience copies for one-shot transforms of external vectors.
    void forward(std::vector<std::complex<double>>& inout);
    void backward(std::vector<std::complex<double>>& inout);

    void load(std::span<const std::complex<double>> src);
    void store(std::span<std::complex<double>> dst) const;

private:
    int n_;
    void* plan_fwd_;
    void* plan_bwd_;
    std::complex<double>* buf_;
};

} // namespace stai

#endif
