#include "dwlab/odi.hpp"

#include "dwlab/error.hpp"
#include "dwlab/lifespan_formulas.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace dwlab {

namespace {
constexpr double kBlowupLevel = 1e8;
constexpr double kBlowupJump = 10.0;

std::size_t steps_per_unit(double dt) {
    const double m = std::round(1.0 / dt);
    if (!(dt > 0.0) || m < 1.0 || std::abs(m * dt - 1.0) > 1e-9)
        throw std::invalid_argument("OdiConfig: 1/dt must be a positive integer");
    return static_cast<std::size_t>(m);
}
}  // namespace

void validate(const OdiConfig& cfg) {
    if (!(cfg.p > 1.0)) throw std::invalid_argument("OdiConfig: p must exceed 1");
    if (!(cfg.beta >= 0.0 && cfg.beta <= 1.0))
        throw std::invalid_argument("OdiConfig: beta must lie in [0, 1]");
    if (cfg.beta == 1.0 && cfg.gamma == 0.0)
        throw std::invalid_argument("OdiConfig: beta = 1 without a t^gamma prefactor is not supported");
    if (!(cfg.t0 >= 4.0)) throw std::invalid_argument("OdiConfig: t0 must be >= 4");
    if (!(cfg.eps >= 0.0) || !(cfg.seed_scale >= 0.0))
        throw std::invalid_argument("OdiConfig: eps and seed scale must be non-negative");
    if (!(cfg.c1 > 0.0) || !(cfg.c2 > 0.0)) throw std::invalid_argument("OdiConfig: couplings must be positive");
    if (!(cfg.horizon > cfg.t0)) throw std::invalid_argument("OdiConfig: horizon must exceed t0");
    steps_per_unit(cfg.dt);
}

OdiTrace simulate_odi(const OdiConfig& cfg) {
    validate(cfg);
    const std::size_t m = steps_per_unit(cfg.dt);
    const double dt = cfg.dt;
    const double seed = cfg.eps * cfg.seed_scale;

    OdiTrace tr;
    tr.v_min = tr.v_max = tr.v_final = seed;
    tr.t_final = cfg.t0;
    tr.times.push_back(cfg.t0);
    tr.v.push_back(seed);
    if (seed == 0.0) {
        // v = 0 is an exact solution.
        tr.times.push_back(cfg.horizon);
        tr.v.push_back(0.0);
        tr.t_final = cfg.horizon;
        return tr;
    }

    const std::size_t ring = m + 2;
    std::vector<double> F(ring, 0.0);
    auto Fat = [&](std::size_t j) -> double& { return F[j % ring]; };
    auto source = [&](double v, double t) { return std::pow(v, cfg.p) * std::pow(t, -cfg.beta); };
    Fat(0) = source(seed, cfg.t0);

    double cumulative = 0.0;  // trapezoid of F over [t0, t_{n-m}]
    double v_prev = seed;
    std::size_t stride = 1;
    for (std::size_t n = 1;; ++n) {
        const double t = cfg.t0 + static_cast<double>(n) * dt;
        if (t > cfg.horizon) break;
        if (n > m) {
            const std::size_t k = n - m;
            cumulative += 0.5 * dt * (Fat(k - 1) + Fat(k));
        }
        const std::size_t a = n > m ? n - m : 0;
        double recent = 0.0;
        for (std::size_t j = a; j < n; ++j) {
            const double w = (j == a) ? 0.5 : 1.0;
            recent += w * static_cast<double>(n - j) * dt * Fat(j);
        }
        recent *= dt;
        const double weight = cfg.gamma == 0.0 ? 1.0 : std::pow(t, cfg.gamma);
        const double v = seed + weight * (cfg.c1 * recent + cfg.c2 * cumulative);

        const bool blown = !std::isfinite(v) || v >= kBlowupLevel * seed || v > kBlowupJump * v_prev;
        if (std::isfinite(v)) {
            tr.v_min = std::min(tr.v_min, v);
            tr.v_max = std::max(tr.v_max, v);
        }
        if (blown) {
            tr.blowup_time = t;
            tr.times.push_back(t);
            tr.v.push_back(v);
            break;
        }
        Fat(n) = source(v, t);
        v_prev = v;
        tr.t_final = t;
        tr.v_final = v;
        if (n % stride == 0) {
            tr.times.push_back(t);
            tr.v.push_back(v);
            if (tr.times.size() >= 2 * cfg.max_samples) {
                std::size_t keep = 0;
                for (std::size_t i = 0; i < tr.times.size(); i += 2, ++keep) {
                    tr.times[keep] = tr.times[i];
                    tr.v[keep] = tr.v[i];
                }
                tr.times.resize(keep);
                tr.v.resize(keep);
                stride *= 2;
            }
        }
    }
    if (!tr.blowup_time && tr.times.back() != tr.t_final) {
        tr.times.push_back(tr.t_final);
        tr.v.push_back(tr.v_final);
    }
    return tr;
}

void write_csv(std::ostream& os, const OdiTrace& trace) {
    const auto old_precision = os.precision();
    os << "t,v\n" << std::setprecision(17);
    for (std::size_t i = 0; i < trace.times.size(); ++i) os << trace.times[i] << ',' << trace.v[i] << '\n';
    os.precision(old_precision);
}

OdiScaling odi_scaling_fit(const OdiConfig& base, std::span<const double> eps_list) {
    if (base.gamma != 0.0 || !(base.beta < 1.0))
        throw std::invalid_argument("odi_scaling_fit: requires gamma = 0 and 0 <= beta < 1");
    if (eps_list.size() < 2) throw std::invalid_argument("odi_scaling_fit: need two or more eps values");
    OdiScaling out;
    out.target_slope = -(base.p - 1.0) / (1.0 - base.beta);
    for (double eps : eps_list) {
        OdiConfig cfg = base;
        cfg.eps = eps;
        const OdiTrace tr = simulate_odi(cfg);
        if (!tr.blowup_time) throw HorizonError("odi_scaling_fit: a run did not blow up before the horizon");
        out.eps.push_back(eps);
        out.blowup_times.push_back(*tr.blowup_time);
    }
    out.fit = fit_power_law(out.eps, out.blowup_times);
    return out;
}

CorridorFit w_inequality_fit(double p, std::span<const double> eps_list, const CorridorOptions& opts) {
    if (!(p > 1.0 && p <= 1.5)) throw std::invalid_argument("w_inequality_fit: p must lie in (1, 3/2]");
    CorridorFit out;
    out.p = p;
    out.target_slope = p < 1.5 ? -(p - 1.0) / (2.0 - p) : std::numeric_limits<double>::quiet_NaN();
    std::vector<double> fe, ft;
    for (double eps : eps_list) {
        CorridorRun run;
        run.eps = eps;
        OdiConfig phase1;
        phase1.p = p;
        phase1.beta = p - 0.5;
        phase1.gamma = 0.5;
        phase1.t0 = 4.0;
        phase1.eps = eps;
        phase1.seed_scale = opts.seed_scale;
        phase1.dt = opts.dt;
        try {
            run.crossover = tilde_T2p(p, eps, opts.crossover_constant);
        } catch (const HorizonError&) {
            run.degenerate = true;
        }
        if (!run.degenerate && run.crossover < phase1.t0 + 1.0) run.degenerate = true;
        if (!run.degenerate) {
            phase1.horizon = run.crossover;
            const OdiTrace w = simulate_odi(phase1);
            const double seed = eps * opts.seed_scale;
            run.w_min_over_eps = w.v_min / seed;
            run.w_max_over_eps = w.v_max / seed;
            if (w.blowup_time) {
                run.degenerate = true;
            } else {
                run.plateau_ok = run.w_min_over_eps >= 1.0 && run.w_max_over_eps <= opts.plateau_factor;
                run.restart_value = w.v_final / std::sqrt(w.t_final);
                OdiConfig phase2;
                phase2.p = p;
                phase2.beta = 0.5 * (p - 1.0);
                phase2.gamma = 0.0;
                phase2.t0 = w.t_final;
                phase2.eps = run.restart_value;
                phase2.dt = opts.dt;
                phase2.horizon = opts.horizon;
                const OdiTrace v = simulate_odi(phase2);
                if (!v.blowup_time) throw HorizonError("w_inequality_fit: second phase did not blow up");
                run.total_time = *v.blowup_time;
                fe.push_back(eps);
                ft.push_back(run.total_time);
            }
        }
        out.runs.push_back(run);
    }
    if (fe.size() >= 2) out.fit = fit_power_law(fe, ft);
    return out;
}

}  // namespace dwlab
