#pragma once

#include "dwlab/fit.hpp"
#include "dwlab/grid.hpp"

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace dwlab {

/// Fourier multipliers of the damped-wave solution operator S(t) and of its
/// time derivative. sigma(t, xi) solves v'' + v' + xi^2 v = 0, v(0) = 0,
/// v'(0) = 1; both are real for real xi.
struct PropagatorSymbol {
    double t = 0.0;
    std::vector<double> freq;  ///< half-spectrum wavenumbers, k = 0..N/2
    std::vector<double> sigma;
    std::vector<double> sigma_t;
};

struct SymbolValue {
    double sigma;
    double sigma_t;
};

/// Scalar symbol evaluation; stable for large t and near |xi| = 1/2.
SymbolValue damped_symbol_at(double t, double xi);

PropagatorSymbol damped_symbol(double t, const GridSpec& spec);

/// Throws TruncationError unless |f| <= rel_tol * max|f| on the outer 5% of
/// the grid.
void check_boundary_decay(const GridFunction& f, double rel_tol = 1e-12);

/// S(t) f and d/dt S(t) f via the Fourier multiplier. `edge_tol` is passed
/// to check_boundary_decay.
GridFunction apply_S(double t, const GridFunction& f, double edge_tol = 1e-12);
GridFunction apply_dtS(double t, const GridFunction& f, double edge_tol = 1e-12);

inline constexpr double kKernelMaxTime = 50.0;

/// S(t) f from the physical-space kernel
///   e^{-t/2} (1/2) int_{-t}^{t} I_0(sqrt(t^2 - y^2) / 2) f(x - y) dy,
/// 8-point Gauss-Legendre per grid cell with degree-7 Lagrange
/// interpolation of f between nodes. t in (0, 50].
GridFunction apply_S_kernel(double t, const GridFunction& f);

/// Total weight of the discrete kernel used by apply_S_kernel (its action on
/// the constant 1).
double kernel_mass(double t, const GridSpec& spec);

/// W(t) f(x) = (1/2) int_{x-t}^{x+t} f(y) dy.
GridFunction apply_wave(double t, const GridFunction& f);

/// e^{t Delta} f through the multiplier exp(-t xi^2).
GridFunction apply_heat(double t, const GridFunction& f);

/// (u(t), u_t(t)) of the linear damped wave equation with data (u0, u1).
std::pair<GridFunction, GridFunction> propagate_linear(double t, const GridFunction& u0,
                                                       const GridFunction& u1);

struct DecayReport {
    std::vector<double> times;
    std::vector<double> norms;
    double p = 2.0;
    ExponentFit fitted;
};

struct FitWindow {
    double t_min;
    double t_max;
};

/// ||S(t) f||_{L^p} at each time and a log-log fit over `window`
/// (default: the last decade of `times`).
DecayReport decay_scan(const GridFunction& f, double p, std::span<const double> times,
                       std::optional<FitWindow> window = std::nullopt);

enum class ResidualVariant { heat, heat_plus_wave };

/// ||S(t) f - e^{t Delta} f||_{L^p}, optionally also subtracting e^{-t/2} W(t) f.
DecayReport residual_scan(const GridFunction& f, double p, std::span<const double> times,
                          ResidualVariant variant, std::optional<FitWindow> window = std::nullopt);

/// Decay exponent of ||S(t) f||_{L^p} when the first `vanishing_moments`
/// moments of f vanish, from the heat expansion: -k/2 - 1/(2p').
double moment_decay_exponent(double p, int vanishing_moments);

/// The same family with -1/p' in place of -1/(2p') (the convention printed
/// alongside the weighted norms); reported for comparison only.
double printed_decay_exponent(double p, int vanishing_moments);

}  // namespace dwlab
