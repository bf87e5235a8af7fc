#pragma once

#include "dwlab/grid.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace dwlab {

inline constexpr std::size_t kMinDuhamelNodes = 64;

/// Sorted union of every checkpoint and the Gauss-Legendre nodes of [0, t_c]
/// for each checkpoint t_c; feed this to integrate_to before calling
/// duhamel_residual.
std::vector<double> duhamel_sample_times(std::span<const double> checkpoints,
                                         std::size_t nodes = kMinDuhamelNodes);

/// max over checkpoints of ||u(t) - RHS(t)||_{L^2} / ||u(t)||_{L^2} with
///   RHS(t) = S(t)(u0 + u1) + dS(t) u0 + int_0^t S(t - tau) |u(tau)|^p dtau,
/// the time integral by Gauss-Legendre with `nodes` points and each S by the
/// Fourier multiplier. The trajectory must contain every node exactly, and
/// its states must be below `edge_tol` times their maximum near the edge
/// (TruncationError otherwise).
double duhamel_residual(const Trajectory& traj, double p, std::span<const double> checkpoints,
                        std::size_t nodes = kMinDuhamelNodes, bool linear_only = false,
                        double edge_tol = 1e-8);

}  // namespace dwlab
