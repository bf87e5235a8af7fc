#pragma once

#include "dwlab/data_family.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dwlab::lab {

enum class Command { decay, lifespan, sweep, odi, predict, verify_propagators };

std::string_view to_string(Command c);
Command parse_command(std::string_view name);

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Five points, half a decade apart, from 0.1 down.
std::vector<double> default_eps_list();

struct ExperimentConfig {
    Command command = Command::sweep;
    double p = 1.25;
    MomentClass moment_class = MomentClass::m0_zero_m1_nonzero;
    std::vector<double> eps_list = default_eps_list();

    double half_width = 128.0;
    std::size_t points = 4096;
    double horizon = 400.0;

    // solver tolerances
    double rtol = 1e-8;
    double dt_max = 0.2;
    double bracket_tol = 2e-3;
    double blowup_threshold = 0.0;  ///< 0: solver default

    double slope_rel_tol = 0.2;  ///< sweep verdict band, relative to the predicted slope

    // odi
    double beta = 0.0;
    double gamma = 0.0;
    double odi_dt = 0.05;
    double odi_horizon = 1e9;

    // predict
    double c = 1.0;
    double C = 1.0;

    // decay / verify-propagators
    double decay_t_min = 100.0;
    double decay_t_max = 1e4;
    std::size_t decay_samples = 17;
    double verify_t = 5.0;

    std::string output_dir = ".";
    std::size_t workers = 1;
};

/// Throws ConfigError. eps must be non-empty, positive and strictly descending; p in
/// (1, 3] except for decay, which also takes p = 1 (and inf for the sup norm).
void validate(const ExperimentConfig& cfg);

/// Comma-separated reals, e.g. "0.4,0.2,0.1".
std::vector<double> parse_real_list(std::string_view text);

}  // namespace dwlab::lab
