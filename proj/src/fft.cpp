#include "dwlab/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace dwlab {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

RealFft::RealFft(std::size_t n) : n_(n) {
    if (n < 2) throw std::invalid_argument("RealFft: length must be at least 2");
    std::lock_guard<std::mutex> lock(planner_mutex());
    real_ = fftw_alloc_real(n_);
    spec_ = reinterpret_cast<std::complex<double>*>(fftw_alloc_complex(n_ / 2 + 1));
    auto* spec = reinterpret_cast<fftw_complex*>(spec_);
    const int len = static_cast<int>(n_);
    forward_plan_ = fftw_plan_dft_r2c_1d(len, real_, spec, FFTW_ESTIMATE);
    inverse_plan_ = fftw_plan_dft_c2r_1d(len, spec, real_, FFTW_ESTIMATE);
    if (!forward_plan_ || !inverse_plan_) throw std::runtime_error("RealFft: FFTW planning failed");
}

RealFft::~RealFft() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (forward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
    if (inverse_plan_) fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
    fftw_free(spec_);
    fftw_free(real_);
}

void RealFft::forward(std::span<const double> in, std::span<std::complex<double>> out) {
    if (in.size() != n_ || out.size() != spectrum_size())
        throw std::invalid_argument("RealFft::forward: size mismatch");
    std::copy(in.begin(), in.end(), real_);
    fftw_execute(static_cast<fftw_plan>(forward_plan_));
    std::copy(spec_, spec_ + spectrum_size(), out.begin());
}

void RealFft::inverse(std::span<const std::complex<double>> in, std::span<double> out) {
    if (in.size() != spectrum_size() || out.size() != n_)
        throw std::invalid_argument("RealFft::inverse: size mismatch");
    std::copy(in.begin(), in.end(), spec_);
    fftw_execute(static_cast<fftw_plan>(inverse_plan_));
    const double scale = 1.0 / static_cast<double>(n_);
    std::transform(real_, real_ + n_, out.begin(), [scale](double v) { return v * scale; });
}

RealFft& RealFft::local(std::size_t n) {
    thread_local std::map<std::size_t, std::unique_ptr<RealFft>> cache;
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<RealFft>(n);
    return *slot;
}

}  // namespace dwlab
