#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace dwlab {

/// Real-to-complex FFT of fixed length backed by FFTW.
///
/// The object owns aligned scratch buffers and copies through them, so the
/// same plan is always executed on the same memory; results therefore do not
/// depend on caller buffer alignment. Plan creation is serialized through a
/// process-wide mutex. An instance itself must not be shared between threads;
/// use `RealFft::local(n)` for a per-thread instance.
class RealFft {
public:
    explicit RealFft(std::size_t n);
    ~RealFft();

    RealFft(const RealFft&) = delete;
    RealFft& operator=(const RealFft&) = delete;

    std::size_t size() const { return n_; }
    std::size_t spectrum_size() const { return n_ / 2 + 1; }

    /// Unnormalized forward transform: out[k] = sum_j in[j] exp(-2 pi i jk/n).
    void forward(std::span<const double> in, std::span<std::complex<double>> out);

    /// Inverse transform including the 1/n factor.
    void inverse(std::span<const std::complex<double>> in, std::span<double> out);

    /// Thread-local cached instance for length n.
    static RealFft& local(std::size_t n);

private:
    std::size_t n_;
    double* real_ = nullptr;
    std::complex<double>* spec_ = nullptr;
    void* forward_plan_ = nullptr;
    void* inverse_plan_ = nullptr;
};

}  // namespace dwlab
