#include "dwlab/duhamel.hpp"

#include "dwlab/propagators.hpp"
#include "dwlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dwlab {

std::vector<double> duhamel_sample_times(std::span<const double> checkpoints, std::size_t nodes) {
    std::vector<double> times;
    for (double tc : checkpoints) {
        if (!(tc > 0.0)) throw std::invalid_argument("duhamel_sample_times: checkpoints must be > 0");
        times.push_back(tc);
        const QuadratureRule rule = gauss_legendre(nodes, 0.0, tc);
        times.insert(times.end(), rule.nodes.begin(), rule.nodes.end());
    }
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end(),
                            [](double a, double b) { return std::abs(a - b) <= 1e-13 * std::max(1.0, b); }),
                times.end());
    return times;
}

double duhamel_residual(const Trajectory& traj, double p, std::span<const double> checkpoints,
                        std::size_t nodes, bool linear_only, double edge_tol) {
    if (traj.empty()) throw std::invalid_argument("duhamel_residual: empty trajectory");
    if (nodes < kMinDuhamelNodes)
        throw std::invalid_argument("duhamel_residual: at least 64 quadrature nodes are required");
    if (checkpoints.empty()) throw std::invalid_argument("duhamel_residual: no checkpoints");
    const GridFunction& u0 = traj.u(0);
    const GridFunction& u1 = traj.ut(0);
    const GridFunction sum01 = u0 + u1;

    double worst = 0.0;
    for (double tc : checkpoints) {
        const std::size_t ic = traj.find(tc, 1e-12 * std::max(1.0, tc));
        if (ic == traj.size()) throw std::invalid_argument("duhamel_residual: checkpoint not sampled");
        GridFunction rhs = apply_S(tc, sum01, edge_tol) + apply_dtS(tc, u0, edge_tol);
        if (!linear_only) {
            const QuadratureRule rule = gauss_legendre(nodes, 0.0, tc);
            for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
                const double tau = rule.nodes[q];
                const std::size_t i = traj.find(tau, 1e-12 * std::max(1.0, tc));
                if (i == traj.size())
                    throw std::invalid_argument("duhamel_residual: insufficient sampling in time");
                const GridFunction& u = traj.u(i);
                std::vector<double> src(u.size());
                for (std::size_t j = 0; j < u.size(); ++j) src[j] = std::pow(std::abs(u[j]), p);
                rhs += rule.weights[q] * apply_S(tc - tau, GridFunction(u.spec(), std::move(src)), edge_tol);
            }
        }
        const GridFunction& u = traj.u(ic);
        const double denom = lp_norm(u, 2.0);
        const double num = lp_norm(u - rhs, 2.0);
        worst = std::max(worst, denom > 0.0 ? num / denom : num);
    }
    return worst;
}

}  // namespace dwlab
