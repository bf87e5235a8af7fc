#include "dwlab/fit.hpp"

#include "dwlab/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace dwlab {

double ExponentFit::predict(double x) const { return std::exp(intercept + slope * std::log(x)); }

ExponentFit fit_power_law(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_power_law: need two or more paired samples");
    const std::size_t n = x.size();
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            throw std::invalid_argument("fit_power_law: samples must be positive");
        sx += std::log(x[i]);
        sy += std::log(y[i]);
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = std::log(x[i]) - mx, dy = std::log(y[i]) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_power_law: x values are all equal");
    ExponentFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    fit.window_min = *lo;
    fit.window_max = *hi;
    fit.accepted = fit.r_squared >= kMinAcceptedR2;
    return fit;
}

double LambertFit::predict(double eps) const {
    return A * std::pow(eps, -2.0 / 3.0) * std::exp(2.0 * lambert_w0(B / std::sqrt(eps)) / 3.0);
}

namespace {
// Best log A for fixed B and the resulting residual sum of squares.
std::pair<double, double> profile(double B, std::span<const double> eps, std::span<const double> logT) {
    const std::size_t n = eps.size();
    std::vector<double> shape(n);
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        shape[i] = -2.0 / 3.0 * std::log(eps[i]) + 2.0 * lambert_w0(B / std::sqrt(eps[i])) / 3.0;
        mean += logT[i] - shape[i];
    }
    mean /= n;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = logT[i] - shape[i] - mean;
        ss += r * r;
    }
    return {mean, ss};
}
}  // namespace

LambertFit fit_lambert_law(std::span<const double> eps, std::span<const double> T) {
    if (eps.size() != T.size() || eps.size() < 3)
        throw std::invalid_argument("fit_lambert_law: need three or more paired samples");
    std::vector<double> logT(T.size());
    for (std::size_t i = 0; i < T.size(); ++i) {
        if (!(eps[i] > 0.0) || !(T[i] > 0.0))
            throw std::invalid_argument("fit_lambert_law: samples must be positive");
        logT[i] = std::log(T[i]);
    }
    // Coarse scan over log B, then golden-section refinement.
    double best_lb = 0.0, best_ss = std::numeric_limits<double>::infinity();
    for (double lb = -12.0; lb <= 12.0; lb += 0.05) {
        const double ss = profile(std::exp(lb), eps, logT).second;
        if (ss < best_ss) best_ss = ss, best_lb = lb;
    }
    double a = best_lb - 0.05, b = best_lb + 0.05;
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int iter = 0; iter < 100; ++iter) {
        const double c = b - phi * (b - a), d = a + phi * (b - a);
        if (profile(std::exp(c), eps, logT).second < profile(std::exp(d), eps, logT).second)
            b = d;
        else
            a = c;
    }
    const double B = std::exp(0.5 * (a + b));
    const auto [logA, ss] = profile(B, eps, logT);
    double mean = 0.0, tot = 0.0;
    for (double v : logT) mean += v;
    mean /= logT.size();
    for (double v : logT) tot += (v - mean) * (v - mean);
    return LambertFit{std::exp(logA), B, tot == 0.0 ? 1.0 : 1.0 - ss / tot};
}

}  // namespace dwlab
