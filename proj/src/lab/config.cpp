#include "dwlab/lab/config.hpp"

#include <cmath>
#include <string>

namespace dwlab::lab {

namespace {

constexpr Command kCommands[] = {Command::decay, Command::lifespan, Command::sweep,
                                 Command::odi, Command::predict, Command::verify_propagators};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

}  // namespace

std::string_view to_string(Command c) {
    switch (c) {
    case Command::decay: return "decay";
    case Command::lifespan: return "lifespan";
    case Command::sweep: return "sweep";
    case Command::odi: return "odi";
    case Command::predict: return "predict";
    case Command::verify_propagators: return "verify-propagators";
    }
    return "unknown";
}

Command parse_command(std::string_view name) {
    for (auto c : kCommands)
        if (name == to_string(c)) return c;
    throw ConfigError("unknown command: " + std::string(name));
}

std::vector<double> default_eps_list() {
    std::vector<double> eps;
    for (int i = 0; i < 5; ++i) eps.push_back(std::pow(10.0, -1.0 - 0.5 * i));
    return eps;
}

std::vector<double> parse_real_list(std::string_view text) {
    std::vector<double> out;
    while (true) {
        const auto comma = text.find(',');
        const std::string item(trim(text.substr(0, comma)));
        if (item.empty()) throw ConfigError("empty entry in list");
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(item, &used);
        } catch (const std::exception&) {
            throw ConfigError("not a number: " + item);
        }
        if (used != item.size()) throw ConfigError("not a number: " + item);
        out.push_back(value);
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

void validate(const ExperimentConfig& cfg) {
    if (cfg.command == Command::decay) {
        if (!(cfg.p >= 1.0)) throw ConfigError("decay: p must be >= 1");
        if (cfg.decay_t_max < 10.0 || !(cfg.decay_t_min < cfg.decay_t_max))
            throw ConfigError("decay: fit window too small");
        if (cfg.decay_samples < 3) throw ConfigError("decay: need at least 3 samples");
    } else if (!(cfg.p > 1.0 && cfg.p <= 3.0)) {
        throw ConfigError("p must lie in (1, 3]");
    }
    const auto& eps = cfg.eps_list;
    if (eps.empty()) throw ConfigError("empty eps list");
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (!(eps[i] > 0.0) || !std::isfinite(eps[i])) throw ConfigError("eps must be positive");
        if (i > 0 && !(eps[i] < eps[i - 1])) throw ConfigError("eps list must be strictly descending");
    }
    if (!(cfg.half_width > 0.0)) throw ConfigError("half-width must be positive");
    if (cfg.points < 16 || (cfg.points & (cfg.points - 1)) != 0)
        throw ConfigError("points must be a power of two >= 16");
    if (!(cfg.horizon > 0.0)) throw ConfigError("horizon must be positive");
    if (!(cfg.rtol > 0.0) || !(cfg.dt_max > 0.0) || !(cfg.bracket_tol > 0.0 && cfg.bracket_tol <= 0.01))
        throw ConfigError("solver tolerances out of range");
    if (!(cfg.slope_rel_tol > 0.0)) throw ConfigError("slope tolerance must be positive");
    if (!(cfg.c > 0.0) || !(cfg.C > 0.0)) throw ConfigError("constants c, C must be positive");
    if (cfg.workers == 0) throw ConfigError("workers must be positive");
    if (cfg.output_dir.empty()) throw ConfigError("output directory must be named");
}

}  // namespace dwlab::lab
