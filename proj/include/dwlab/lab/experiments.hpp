#pragma once

#include "dwlab/lab/config.hpp"
#include "dwlab/lab/reports.hpp"

#include <cstddef>
#include <functional>
#include <vector>

namespace dwlab::lab {

/// Calls fn(i) for i in [0, n) on at most `workers` threads. Results come
/// back in index order whatever the scheduling; the first exception thrown
/// by any task is rethrown after all threads join.
template <class T>
std::vector<T> parallel_map(std::size_t n, std::size_t workers,
                            const std::function<T(std::size_t)>& fn);

/// Grid for one lifespan run: at least the configured half-width, widened to
/// 5 sqrt(horizon) + 12, with the configured spacing or finer.
GridSpec sized_grid(const ExperimentConfig& cfg);

SolverControl solver_control(const ExperimentConfig& cfg);

/// One solve_lifespan per eps (parallel), in input order.
std::vector<RunRecord> run_lifespans(const ExperimentConfig& cfg);

SweepReport run_sweep(const ExperimentConfig& cfg);

/// Decay fits of S(t) g, S(t) g', S(t) g'' and the heat residual of g.
DecaySummary run_decay(const ExperimentConfig& cfg);

std::vector<CheckRow> run_verify_propagators(const ExperimentConfig& cfg);

/// Predictions for every moment class at every eps.
std::vector<PredictionRow> run_predict(const ExperimentConfig& cfg);

/// Plain inequality (gamma = 0): blow-up time scaling against eps, +-10%
/// band and r^2 >= 0.98. gamma = 1/2 runs the two-phase corridor fit.
OdiReport run_odi(const ExperimentConfig& cfg);

}  // namespace dwlab::lab

#include "dwlab/lab/parallel_map.ipp"
