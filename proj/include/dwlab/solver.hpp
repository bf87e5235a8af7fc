#pragma once

#include "dwlab/data_family.hpp"
#include "dwlab/grid.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace dwlab {

/// March state of u_tt + u_t - u_xx = |u|^p written as u_t = v, v_t = -v + u_xx + |u|^p.
struct SolverState {
    double t = 0.0;
    GridFunction u;
    GridFunction v;
    double dt = 0.0;
    std::size_t steps_taken = 0;
    double max_abs_u = 0.0;
};

SolverState initial_state(const GridFunction& u0, const GridFunction& u1, double dt);

struct SolverControl {
    double dt_initial = 0.05;
    double dt_max = 0.2;
    double dt_min = 1e-12;
    double rtol = 1e-8;  ///< step-doubling error tolerance, relative
    bool adaptive = true;
    bool linear_only = false;
    bool check_boundary = true;
    double boundary_tol = 1e-8;       ///< |u| on |x| >= 0.9 L relative to max |u|
    double blowup_threshold = 0.0;    ///< 0 selects max(1e6 eps, 1e4)
    double bracket_tol = 2e-3;        ///< keep marching until (T_high - T_low) <= bracket_tol T_high
    std::size_t extrapolation_samples = 20;
    double functional_t0 = 4.0;
    bool record_functionals = true;
};

/// One integrating-factor RK4 step of size dt. The linear part is advanced
/// exactly by the damped symbol; |u|^p is evaluated on a twice-refined grid
/// and restricted back. Returns nullopt when the step produces non-finite
/// values (the signal that blow-up is imminent).
std::optional<SolverState> step(const SolverState& state, double p, double dt,
                                bool linear_only = false);

enum class LifespanStatus { blown_up, survived_horizon, truncation_abort };

std::string_view to_string(LifespanStatus s);

struct LifespanEstimate {
    LifespanStatus status = LifespanStatus::survived_horizon;
    double T_low = 0.0;
    double T_high = 0.0;
    double threshold_used = 0.0;
    GridSpec grid;
    std::size_t steps = 0;
    std::size_t rejected = 0;
    double dt_min_used = 0.0;
};

/// Infimum functionals sampled along a run (t >= t0 only).
struct FunctionalTrace {
    std::vector<double> times;
    std::vector<double> U;
    std::vector<double> w_plus;
    std::vector<double> w_minus;
};

void write_csv(std::ostream& os, const FunctionalTrace& trace);

struct LifespanResult {
    LifespanEstimate estimate;
    FunctionalTrace trace;
};

/// Marches (u0, u1) until numerical blow-up, the horizon, or a truncation
/// failure. `amplitude` is the data size eps used for the default threshold.
LifespanResult solve_lifespan(const GridFunction& u0, const GridFunction& u1, double p,
                              double amplitude, double horizon, const SolverControl& ctrl = {});

LifespanResult solve_lifespan(const DataFamily& data, double p, double horizon,
                              const SolverControl& ctrl = {});

/// Integrates to each requested time exactly (sorted, > 0), with substeps no
/// larger than ctrl.dt_max, and returns the samples with t = 0 prepended.
Trajectory integrate_to(const GridFunction& u0, const GridFunction& u1, double p,
                        std::span<const double> times, const SolverControl& ctrl = {});

/// Values of the infimum functionals at one instant:
///   U   = sqrt(t) inf_{|x| <= sqrt(t)} u,
///   w_+ = t inf_{x in D_+(t)} u,  D_+(t) = { sqrt(t)/2 < x < sqrt(t) },
///   w_- = t inf_{x in D_-(t)} u,  D_-(t) = { sqrt(t)/2 < -x < sqrt(t) }.
struct FunctionalValues {
    double U;
    double w_plus;
    double w_minus;
};

inline constexpr double kCorridorStart = 4.0;

/// Throws std::domain_error when state.t < 4.
FunctionalValues track_functionals(const SolverState& state);

/// inf of u over the open interval (a, b), or the closed one when `closed`.
/// Fewer than eight nodes inside triggers cubic interpolation at extra points.
double region_infimum(const GridFunction& u, double a, double b, bool closed);

}  // namespace dwlab
