#include "dwlab/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dwlab {

double bessel_i0_series(double y) {
    if (y < 0.0) throw std::domain_error("bessel_i0: negative argument");
    const double q = 0.25 * y * y;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 500; ++k) {
        term *= q / (static_cast<double>(k) * static_cast<double>(k));
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return sum;
}

namespace {
// Sum of the large-argument series 1 + 1/(8y) + 9/(2(8y)^2) + ..., stopped at
// its smallest term.
double asymptotic_factor(double y) {
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double r = (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * y);
        if (r >= 1.0) break;
        term *= r;
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return sum;
}
}  // namespace

double bessel_i0_asymptotic(double y) {
    if (!(y > 0.0)) throw std::domain_error("bessel_i0_asymptotic: argument must be positive");
    return std::exp(y) / std::sqrt(2.0 * std::numbers::pi * y) * asymptotic_factor(y);
}

double bessel_i0(double y) {
    if (y < 0.0 || std::isnan(y)) throw std::domain_error("bessel_i0: negative argument");
    return y <= kBesselSeriesLimit ? bessel_i0_series(y) : bessel_i0_asymptotic(y);
}

double bessel_i0_scaled(double y) {
    if (y < 0.0 || std::isnan(y)) throw std::domain_error("bessel_i0_scaled: negative argument");
    if (y <= kBesselSeriesLimit) return std::exp(-y) * bessel_i0_series(y);
    return asymptotic_factor(y) / std::sqrt(2.0 * std::numbers::pi * y);
}

double lambert_w0(double z) {
    if (z < 0.0 || std::isnan(z)) throw std::domain_error("lambert_w0: only z >= 0 is supported");
    if (z == 0.0) return 0.0;
    if (std::isinf(z)) return z;
    double w = std::log1p(z);
    for (int iter = 0; iter < 100; ++iter) {
        const double ew = std::exp(w);
        const double f = w * ew - z;
        const double fp = ew * (w + 1.0);
        const double step = f / (fp - (w + 2.0) * f / (2.0 * w + 2.0));
        w -= step;
        if (std::abs(step) <= 1e-16 * (1.0 + std::abs(w))) break;
    }
    return w;
}

double gaussian_derivative_at(int j, double x) {
    const double g = std::exp(-0.25 * x * x);
    switch (j) {
    case 0: return g;
    case 1: return -0.5 * x * g;
    case 2: return (0.25 * x * x - 0.5) * g;
    case 3: return (0.75 * x - 0.125 * x * x * x) * g;
    default: throw std::invalid_argument("gaussian_derivative: order must be 0..3");
    }
}

GridFunction gaussian_derivative(int j, const GridSpec& spec) {
    if (j < 0 || j > 3) throw std::invalid_argument("gaussian_derivative: order must be 0..3");
    return GridFunction::sample(spec, [j](double x) { return gaussian_derivative_at(j, x); });
}

}  // namespace dwlab
