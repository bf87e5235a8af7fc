#include "dwlab/lab/reports.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dwlab::lab {

using nlohmann::json;

namespace {

// NaN and inf are not JSON numbers.
json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

LifespanStatus parse_status(std::string_view s) {
    for (auto st : {LifespanStatus::blown_up, LifespanStatus::survived_horizon,
                    LifespanStatus::truncation_abort})
        if (s == to_string(st)) return st;
    throw std::invalid_argument("unknown run status: " + std::string(s));
}

}  // namespace

std::string_view to_string(Verdict v) {
    switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::unconverged: return "unconverged";
    }
    return "unknown";
}

int exit_code(Verdict v) {
    switch (v) {
    case Verdict::pass: return 0;
    case Verdict::fail: return 1;
    case Verdict::unconverged: return 2;
    }
    return 2;
}

Verdict combine(Verdict a, Verdict b) { return exit_code(a) >= exit_code(b) ? a : b; }

json to_json(const RunRecord& r) {
    const auto& e = r.estimate;
    return {{"p", r.p},
            {"eps", r.eps},
            {"class", to_string(r.moment_class)},
            {"N", e.grid.points},
            {"L", e.grid.half_width},
            {"dt_min", e.dt_min_used},
            {"status", to_string(e.status)},
            {"T_low", e.T_low},
            {"T_high", e.T_high},
            {"steps", e.steps}};
}

SweepReport assess_sweep(double p, MomentClass moment_class, std::vector<SweepRow> rows,
                         double rel_tol) {
    SweepReport r;
    r.p = p;
    r.moment_class = moment_class;
    r.regime = classify_regime(p, moment_class);
    r.predicted_slope = lifespan_exponent(p, moment_class);
    r.tolerance = std::isfinite(r.predicted_slope) ? rel_tol * std::abs(r.predicted_slope)
                                                   : std::numeric_limits<double>::quiet_NaN();
    r.rows = std::move(rows);

    bool aborted = false, survived = false;
    for (const auto& row : r.rows) {
        aborted |= row.status == LifespanStatus::truncation_abort;
        survived |= row.status == LifespanStatus::survived_horizon;
    }
    if (r.rows.size() < 2 || aborted) {
        r.verdict = Verdict::unconverged;
        return r;
    }
    if (survived) {
        r.verdict = Verdict::fail;
        return r;
    }

    std::vector<double> eps, T;
    for (const auto& row : r.rows) {
        eps.push_back(row.eps);
        T.push_back(row.T_high);
    }
    r.fit = fit_power_law(eps, T);
    if (r.regime == LifespanRegime::critical_m1) {
        if (eps.size() >= 3) r.lambert = fit_lambert_law(eps, T);
        r.verdict = r.lambert && r.lambert->r_squared >= kMinLambertR2 ? Verdict::pass : Verdict::fail;
    } else {
        r.verdict = std::abs(r.fit->slope - r.predicted_slope) <= r.tolerance ? Verdict::pass
                                                                               : Verdict::fail;
    }
    return r;
}

void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows) {
    const auto old = os.precision(17);
    os << "eps,T_low,T_high,status\n";
    for (const auto& r : rows)
        os << r.eps << ',' << r.T_low << ',' << r.T_high << ',' << to_string(r.status) << '\n';
    os.precision(old);
}

std::vector<SweepRow> read_sweep_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != "eps,T_low,T_high,status")
        throw std::invalid_argument("read_sweep_csv: bad header");
    std::vector<SweepRow> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string f[4];
        for (auto& s : f)
            if (!std::getline(ls, s, ',')) throw std::invalid_argument("read_sweep_csv: short row");
        rows.push_back({std::stod(f[0]), std::stod(f[1]), std::stod(f[2]), parse_status(f[3])});
    }
    return rows;
}

json to_json(const ExponentFit& f) {
    return {{"slope", number(f.slope)},
            {"intercept", number(f.intercept)},
            {"r2", number(f.r_squared)},
            {"window", {number(f.window_min), number(f.window_max)}},
            {"accepted", f.accepted}};
}

json to_json(const SweepReport& r) {
    json j{{"p", r.p},
           {"class", to_string(r.moment_class)},
           {"regime", to_string(r.regime)},
           {"predicted_slope", number(r.predicted_slope)},
           {"tolerance", number(r.tolerance)},
           {"verdict", to_string(r.verdict)},
           {"fit", r.fit ? to_json(*r.fit) : json(nullptr)}};
    if (r.lambert)
        j["lambert"] = {{"A", r.lambert->A}, {"B", r.lambert->B}, {"r2", r.lambert->r_squared}};
    json rows = json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"eps", row.eps},
                        {"T_low", row.T_low},
                        {"T_high", row.T_high},
                        {"status", to_string(row.status)}});
    j["rows"] = std::move(rows);
    return j;
}

json to_json(const ExperimentConfig& c) {
    return {{"command", to_string(c.command)},
            {"p", number(c.p)},
            {"class", to_string(c.moment_class)},
            {"eps_list", c.eps_list},
            {"L", c.half_width},
            {"N", c.points},
            {"horizon", c.horizon},
            {"rtol", c.rtol},
            {"dt_max", c.dt_max},
            {"bracket_tol", c.bracket_tol},
            {"blowup_threshold", c.blowup_threshold},
            {"slope_rel_tol", c.slope_rel_tol},
            {"beta", c.beta},
            {"gamma", c.gamma},
            {"odi_dt", c.odi_dt},
            {"odi_horizon", c.odi_horizon},
            {"c", c.c},
            {"C", c.C},
            {"decay_t_min", c.decay_t_min},
            {"decay_t_max", c.decay_t_max},
            {"decay_samples", c.decay_samples},
            {"verify_t", c.verify_t},
            {"out", c.output_dir}};
}

void write_decay_csv(std::ostream& os, const DecayReport& r) {
    const auto old = os.precision(17);
    os << "t,norm\n";
    for (std::size_t i = 0; i < r.times.size(); ++i) os << r.times[i] << ',' << r.norms[i] << '\n';
    os.precision(old);
}

json to_json(const DecaySummary& s) {
    json rows = json::array();
    for (const auto& r : s.rows)
        rows.push_back({{"label", r.label},
                        {"target_slope", number(r.target_slope)},
                        {"band", r.band},
                        {"fit", to_json(r.report.fitted)},
                        {"within_band", r.within_band}});
    return {{"p", number(s.p)}, {"verdict", to_string(s.verdict)}, {"rows", rows}};
}

std::string_view to_string(CheckStatus s) {
    switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::skipped: return "skipped";
    }
    return "unknown";
}

json to_json(const CheckRow& r) {
    return {{"name", r.name},
            {"measured", number(r.measured)},
            {"tolerance", number(r.tolerance)},
            {"status", to_string(r.status)},
            {"note", r.note}};
}

Verdict verdict_of(std::span<const CheckRow> rows) {
    for (const auto& r : rows)
        if (r.status == CheckStatus::fail) return Verdict::fail;
    return Verdict::pass;
}

json to_json(const PredictionRow& r) {
    return {{"p", r.p},
            {"eps", r.eps},
            {"class", to_string(r.moment_class)},
            {"regime", to_string(r.prediction.regime)},
            {"value", number(r.prediction.value)},
            {"upper", number(r.prediction.upper)},
            {"formula", r.prediction.formula_text},
            {"crossover", r.crossover ? number(*r.crossover) : json(nullptr)}};
}

json to_json(const OdiReport& r) {
    return {{"p", r.p},
            {"beta", r.beta},
            {"gamma", r.gamma},
            {"slope", number(r.fit.slope)},
            {"target_slope", number(r.target_slope)},
            {"r2", number(r.fit.r_squared)},
            {"rel_tol", r.rel_tol},
            {"eps", r.eps},
            {"blowup_times", r.blowup_times},
            {"verdict", to_string(r.verdict)}};
}

}  // namespace dwlab::lab
