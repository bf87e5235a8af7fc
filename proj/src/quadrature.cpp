#include "dwlab/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dwlab {

QuadratureRule gauss_legendre(std::size_t n, double a, double b) {
    if (n == 0) throw std::invalid_argument("gauss_legendre: need at least one node");
    QuadratureRule rule{std::vector<double>(n), std::vector<double>(n)};
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    const std::size_t m = (n + 1) / 2;
    for (std::size_t i = 0; i < m; ++i) {
        double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (std::size_t j = 1; j <= n; ++j) {
                const double p2 = p1;
                p1 = p0;
                const double jd = static_cast<double>(j);
                p0 = ((2.0 * jd - 1.0) * z * p1 - (jd - 1.0) * p2) / jd;
            }
            dp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule.nodes[i] = mid - half * z;
        rule.nodes[n - 1 - i] = mid + half * z;
        rule.weights[i] = rule.weights[n - 1 - i] = half * w;
    }
    return rule;
}

}  // namespace dwlab
