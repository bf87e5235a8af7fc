// lab: experiment driver for the damped-wave lifespan toolkit.
//
//   lab decay|lifespan|sweep|odi|predict|verify-propagators
//       [--config FILE] [--p X] [--eps-list a,b,c] [--out DIR] [--workers K] ...
//
// A config file holds one [section] per command with key = value lines; flags
// override it. Exit status: 0 pass, 1 fail, 2 unconverged, 3 bad config.

#include "dwlab/lab/config.hpp"
#include "dwlab/lab/experiments.hpp"
#include "dwlab/lab/reports.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

using namespace dwlab;
using namespace dwlab::lab;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Options {
    ExperimentConfig cfg;
    std::string moment_class = "M0_zero_M1_nonzero";
    std::vector<std::string> eps;
};

void add_common(CLI::App* sub, Options& o) {
    auto& c = o.cfg;
    sub->add_option("--p", c.p, "nonlinearity power (decay: norm exponent)");
    sub->add_option("--class", o.moment_class, "moment class of the data");
    sub->add_option("--eps-list", o.eps, "data sizes, strictly descending")->delimiter(',');
    sub->add_option("--out", c.output_dir, "output directory");
    sub->add_option("--workers", c.workers, "parallel runs");
    sub->add_option("--L", c.half_width, "grid half-width");
    sub->add_option("--N", c.points, "grid points (power of two)");
}

void add_solver(CLI::App* sub, ExperimentConfig& c) {
    sub->add_option("--horizon", c.horizon, "final time of each run");
    sub->add_option("--rtol", c.rtol, "step-doubling tolerance");
    sub->add_option("--dt-max", c.dt_max, "largest time step");
    sub->add_option("--bracket-tol", c.bracket_tol, "relative blow-up bracket width");
    sub->add_option("--threshold", c.blowup_threshold, "blow-up threshold (0: default)");
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream os(path);
    os << j.dump(2) << '\n';
    if (!os) throw std::runtime_error("cannot write " + path.string());
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    return os;
}

std::string index_name(const char* stem, std::size_t i, const char* ext) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_%02zu.%s", stem, i, ext);
    return buf;
}

Verdict cmd_lifespan(const ExperimentConfig& cfg, const fs::path& out) {
    const auto runs = run_lifespans(cfg);
    json all = json::array();
    Verdict v = Verdict::pass;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto& r = runs[i];
        all.push_back(to_json(r));
        write_json(out / index_name("run", i, "json"), to_json(r));
        auto os = open_out(out / index_name("trace", i, "csv"));
        write_csv(os, r.trace);
        std::printf("eps=%-10.4g %-16s T in [%.6g, %.6g]  steps=%zu\n", r.eps,
                    std::string(to_string(r.estimate.status)).c_str(), r.estimate.T_low,
                    r.estimate.T_high, r.estimate.steps);
        if (r.estimate.status == LifespanStatus::truncation_abort) v = Verdict::unconverged;
    }
    write_json(out / "runs.json", {{"config", to_json(cfg)}, {"runs", all}});
    return v;
}

Verdict cmd_sweep(const ExperimentConfig& cfg, const fs::path& out) {
    const auto runs = run_lifespans(cfg);
    std::vector<SweepRow> rows;
    json all = json::array();
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto& r = runs[i];
        rows.push_back({r.eps, r.estimate.T_low, r.estimate.T_high, r.estimate.status});
        all.push_back(to_json(r));
        write_json(out / index_name("run", i, "json"), to_json(r));
    }
    const SweepReport rep = assess_sweep(cfg.p, cfg.moment_class, rows, cfg.slope_rel_tol);
    {
        auto os = open_out(out / "sweep.csv");
        write_sweep_csv(os, rep.rows);
    }
    json fit = to_json(rep);
    fit["config"] = to_json(cfg);
    write_json(out / "fit.json", fit);
    write_json(out / "runs.json", {{"config", to_json(cfg)}, {"runs", all}});

    for (const auto& r : rep.rows)
        std::printf("eps=%-10.4g %-16s T in [%.6g, %.6g]\n", r.eps,
                    std::string(to_string(r.status)).c_str(), r.T_low, r.T_high);
    std::printf("regime %s", std::string(to_string(rep.regime)).c_str());
    if (rep.fit)
        std::printf(": fitted slope %.4f (r2 %.4f)", rep.fit->slope, rep.fit->r_squared);
    if (std::isfinite(rep.predicted_slope))
        std::printf(", predicted %.4f +- %.4f", rep.predicted_slope, rep.tolerance);
    if (rep.lambert)
        std::printf(", Lambert fit A=%.4g B=%.4g r2=%.4f", rep.lambert->A, rep.lambert->B,
                    rep.lambert->r_squared);
    std::printf("\nverdict: %s\n", std::string(to_string(rep.verdict)).c_str());
    return rep.verdict;
}

Verdict cmd_decay(const ExperimentConfig& cfg, const fs::path& out) {
    const DecaySummary s = run_decay(cfg);
    for (std::size_t i = 0; i < s.rows.size(); ++i) {
        auto os = open_out(out / index_name("decay", i, "csv"));
        write_decay_csv(os, s.rows[i].report);
    }
    json j = to_json(s);
    j["config"] = to_json(cfg);
    write_json(out / "decay_fit.json", j);
    std::printf("%-16s %10s %10s %8s\n", "family", "fitted", "target", "r2");
    for (const auto& r : s.rows)
        std::printf("%-16s %10.4f %10.4f %8.5f %s\n", r.label.c_str(), r.report.fitted.slope,
                    r.target_slope, r.report.fitted.r_squared, r.within_band ? "ok" : "OFF");
    std::printf("verdict: %s\n", std::string(to_string(s.verdict)).c_str());
    return s.verdict;
}

Verdict cmd_verify(const ExperimentConfig& cfg, const fs::path& out) {
    const auto rows = run_verify_propagators(cfg);
    json all = json::array();
    for (const auto& r : rows) {
        all.push_back(to_json(r));
        std::printf("%-8s %-40s %.3e (tol %.1e) %s\n", std::string(to_string(r.status)).c_str(),
                    r.name.c_str(), r.measured, r.tolerance, r.note.c_str());
    }
    const Verdict v = verdict_of(rows);
    write_json(out / "verify.json", {{"config", to_json(cfg)}, {"checks", all}, {"verdict", to_string(v)}});
    std::printf("verdict: %s\n", std::string(to_string(v)).c_str());
    return v;
}

Verdict cmd_predict(const ExperimentConfig& cfg, const fs::path& out) {
    const auto rows = run_predict(cfg);
    json all = json::array();
    std::printf("%-10s %-20s %-16s %14s %14s\n", "eps", "class", "regime", "value", "crossover");
    for (const auto& r : rows) {
        all.push_back(to_json(r));
        std::printf("%-10.4g %-20s %-16s %14.6g %14.6g\n", r.eps,
                    std::string(to_string(r.moment_class)).c_str(),
                    std::string(to_string(r.prediction.regime)).c_str(), r.prediction.value,
                    r.crossover.value_or(std::nan("")));
    }
    write_json(out / "predictions.json", {{"config", to_json(cfg)}, {"predictions", all}});
    return Verdict::pass;
}

Verdict cmd_odi(const ExperimentConfig& cfg, const fs::path& out) {
    const OdiReport r = run_odi(cfg);
    json j = to_json(r);
    j["config"] = to_json(cfg);
    write_json(out / "odi_fit.json", j);
    for (std::size_t i = 0; i < r.eps.size() && i < r.blowup_times.size(); ++i)
        std::printf("eps=%-10.4g T=%.6g\n", r.eps[i], r.blowup_times[i]);
    std::printf("slope %.4f target %.4f r2 %.5f\nverdict: %s\n", r.fit.slope, r.target_slope,
                r.fit.r_squared, std::string(to_string(r.verdict)).c_str());
    return r.verdict;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"damped-wave lifespan lab"};
    app.set_config("--config", "", "key = value file with one [section] per command");
    app.require_subcommand(1);

    // Separate storage per command: config sections for commands that were
    // not invoked must not leak into the one that was.
    Options opts[6];
    auto command_app = [&](Command cmd, const char* help) {
        Options& o = opts[static_cast<int>(cmd)];
        auto* sub = app.add_subcommand(std::string(to_string(cmd)), help);
        add_common(sub, o);
        return std::pair<CLI::App*, ExperimentConfig&>{sub, o.cfg};
    };

    auto [decay, dc] = command_app(Command::decay, "decay rates of S(t) on Gaussian-derivative data");
    dc.p = 2.0;
    decay->add_option("--t-min", dc.decay_t_min, "start of the fit window");
    decay->add_option("--t-max", dc.decay_t_max, "end of the fit window");
    decay->add_option("--samples", dc.decay_samples, "log-spaced sample times");

    auto [lifespan, lc] = command_app(Command::lifespan, "solve to blow-up for each eps");
    add_solver(lifespan, lc);

    auto [sweep, sc] = command_app(Command::sweep, "lifespan sweep and exponent fit");
    add_solver(sweep, sc);
    sweep->add_option("--slope-tol", sc.slope_rel_tol, "relative slope band");

    auto [odi, oc] = command_app(Command::odi, "memory-kernel inequality scaling");
    odi->add_option("--beta", oc.beta, "kernel decay exponent (gamma = 0)");
    odi->add_option("--gamma", oc.gamma, "0: plain inequality, 0.5: corridor inequality");
    odi->add_option("--dt", oc.odi_dt, "march step");
    odi->add_option("--odi-horizon", oc.odi_horizon, "final time");
    odi->add_option("--C", oc.C, "crossover constant (gamma = 0.5)");

    auto [predict, pc] = command_app(Command::predict, "predicted lifespans");
    predict->add_option("--c", pc.c, "lower constant");
    predict->add_option("--C", pc.C, "upper constant");

    auto [verify, vc] = command_app(Command::verify_propagators, "propagator cross-checks");
    verify->add_option("--t", vc.verify_t, "time of the duality and semigroup checks");

    CLI11_PARSE(app, argc, argv);

    const auto* sub = app.get_subcommands().front();
    Options& o = opts[static_cast<int>(parse_command(sub->get_name()))];
    ExperimentConfig& c = o.cfg;
    try {
        c.command = parse_command(sub->get_name());
        c.moment_class = parse_moment_class(o.moment_class);
        if (sub->count("--eps-list") > 0) {
            c.eps_list.clear();
            for (const auto& item : o.eps) {
                const auto part = parse_real_list(item);
                c.eps_list.insert(c.eps_list.end(), part.begin(), part.end());
            }
        }
        validate(c);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 3;
    }

    try {
        const fs::path out = c.output_dir;
        fs::create_directories(out);
        Verdict v = Verdict::pass;
        switch (c.command) {
        case Command::decay: v = cmd_decay(c, out); break;
        case Command::lifespan: v = cmd_lifespan(c, out); break;
        case Command::sweep: v = cmd_sweep(c, out); break;
        case Command::odi: v = cmd_odi(c, out); break;
        case Command::predict: v = cmd_predict(c, out); break;
        case Command::verify_propagators: v = cmd_verify(c, out); break;
        }
        return exit_code(v);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
