#pragma once

#include "dwlab/fit.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace dwlab {

/// Equality form of the memory-kernel inequality
///   v(t) = eps*seed + c1 t^gamma int_{t-1}^{t} (t - tau) v^p tau^{-beta} dtau
///                   + c2 t^gamma int_{t0}^{t-1} v^p tau^{-beta} dtau,   t >= t0.
/// gamma = 0 is the plain inequality; gamma = 1/2 with beta = p - 1/2 is the
/// t-weighted corridor inequality.
struct OdiConfig {
    double p = 2.0;
    double beta = 0.0;
    double gamma = 0.0;
    double t0 = 4.0;
    double eps = 1e-2;
    double seed_scale = 1.0;  ///< |M1| multiplying eps in the source term
    double c1 = 1.0;
    double c2 = 1.0;
    double dt = 0.05;  ///< 1/dt must be an integer
    double horizon = 1e7;
    std::size_t max_samples = 20000;  ///< recorded trace is thinned to about this size
};

/// Throws std::invalid_argument for p <= 1, beta outside [0, 1], beta = 1 with
/// gamma = 0, t0 < 4, negative eps, non-positive couplings, or a step that
/// does not divide the unit memory window.
void validate(const OdiConfig& cfg);

struct OdiTrace {
    std::vector<double> times;
    std::vector<double> v;
    std::optional<double> blowup_time;
    double v_min = 0.0;
    double v_max = 0.0;
    double t_final = 0.0;
    double v_final = 0.0;
};

/// Explicit march on t_n = t0 + n dt; trapezoidal memory quadrature (the
/// (t - tau) weight vanishes at tau = t, so each step is explicit). Blow-up
/// is declared when v >= 1e8 eps seed or v grows tenfold in one step.
OdiTrace simulate_odi(const OdiConfig& cfg);

void write_csv(std::ostream& os, const OdiTrace& trace);

struct OdiScaling {
    ExponentFit fit;
    double target_slope = 0.0;  ///< -(p-1)/(1-beta)
    std::vector<double> eps;
    std::vector<double> blowup_times;
};

/// Log-log fit of blow-up time against eps. Requires gamma = 0 and beta < 1;
/// throws HorizonError if any run survives its horizon.
OdiScaling odi_scaling_fit(const OdiConfig& base, std::span<const double> eps_list);

struct CorridorRun {
    double eps = 0.0;
    double crossover = 0.0;      ///< end of the first phase
    double w_min_over_eps = 0.0; ///< inf of w on [t0, crossover] / (eps seed)
    double w_max_over_eps = 0.0;
    double restart_value = 0.0;  ///< crossover^{-1/2} w(crossover)
    double total_time = 0.0;     ///< blow-up time of the second phase
    bool plateau_ok = false;
    bool degenerate = false;     ///< phase 1 blew up or the crossover is below t0 + 1
};

struct CorridorFit {
    double p = 0.0;
    std::vector<CorridorRun> runs;
    ExponentFit fit;             ///< total_time against eps (non-degenerate runs)
    double target_slope = 0.0;   ///< -(p-1)/(2-p); NaN at p = 3/2
};

struct CorridorOptions {
    double crossover_constant = 1.0;  ///< C in the crossover equation
    double plateau_factor = 10.0;     ///< plateau holds when w <= factor * eps on phase 1
    double dt = 0.05;
    double seed_scale = 1.0;
    double horizon = 1e9;
};

/// Two-phase simulation: the corridor inequality (beta = p - 1/2,
/// gamma = 1/2) up to the crossover time, then the plain inequality with
/// 1 - beta = (3 - p)/2 restarted from crossover^{-1/2} w(crossover).
CorridorFit w_inequality_fit(double p, std::span<const double> eps_list,
                             const CorridorOptions& opts = {});

}  // namespace dwlab
