#include "dwlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dwlab {

namespace {

constexpr std::size_t kMinRegionNodes = 8;
constexpr std::size_t kInterpolatedPoints = 16;

// Four-point (cubic) Lagrange interpolation on the periodic grid.
double interpolate_cubic(const GridFunction& u, double x) {
    const GridSpec& g = u.spec();
    const double s = (x + g.half_width) / g.spacing;
    const long i = static_cast<long>(std::floor(s));
    const double th = s - static_cast<double>(i);
    const long n = static_cast<long>(g.points);
    auto at = [&](long k) { return u[static_cast<std::size_t>(((k % n) + n) % n)]; };
    const double wm1 = -th * (th - 1.0) * (th - 2.0) / 6.0;
    const double w0 = (th + 1.0) * (th - 1.0) * (th - 2.0) / 2.0;
    const double w1 = -(th + 1.0) * th * (th - 2.0) / 2.0;
    const double w2 = (th + 1.0) * th * (th - 1.0) / 6.0;
    return wm1 * at(i - 1) + w0 * at(i) + w1 * at(i + 1) + w2 * at(i + 2);
}

}  // namespace

double region_infimum(const GridFunction& u, double a, double b, bool closed) {
    if (!(b > a)) throw std::invalid_argument("region_infimum: empty region");
    const GridSpec& g = u.spec();
    double inf = std::numeric_limits<double>::infinity();
    std::size_t count = 0;
    for (std::size_t j = 0; j < g.points; ++j) {
        const double x = g.x(j);
        const bool inside = closed ? (x >= a && x <= b) : (x > a && x < b);
        if (inside) {
            inf = std::min(inf, u[j]);
            ++count;
        }
    }
    if (count < kMinRegionNodes) {
        for (std::size_t i = 0; i < kInterpolatedPoints; ++i) {
            const double frac = closed ? static_cast<double>(i) / (kInterpolatedPoints - 1)
                                       : (static_cast<double>(i) + 0.5) / kInterpolatedPoints;
            inf = std::min(inf, interpolate_cubic(u, a + (b - a) * frac));
        }
    }
    return inf;
}

FunctionalValues track_functionals(const SolverState& state) {
    const double t = state.t;
    if (t < kCorridorStart)
        throw std::domain_error("track_functionals: corridors are defined for t >= 4");
    const double r = std::sqrt(t);
    return FunctionalValues{r * region_infimum(state.u, -r, r, true),
                            t * region_infimum(state.u, 0.5 * r, r, false),
                            t * region_infimum(state.u, -r, -0.5 * r, false)};
}

}  // namespace dwlab
