#include "dwlab/solver.hpp"

#include "dwlab/error.hpp"
#include "dwlab/fft.hpp"
#include "dwlab/propagators.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <deque>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace dwlab {

namespace {

using cplx = std::complex<double>;
using Spectrum = std::vector<cplx>;

struct SpectralState {
    Spectrum u;
    Spectrum v;
};

double spectral_norm(const Spectrum& c) {
    double s = 0.0;
    for (const auto& z : c) s += std::norm(z);
    return std::sqrt(s);
}

class Integrator {
public:
    Integrator(const GridSpec& grid, double p, bool linear_only)
        : grid_(grid), p_(p), linear_only_(linear_only), fft_(RealFft::local(grid.points)),
          fft2_(RealFft::local(2 * grid.points)), modes_(grid.points / 2 + 1), xi2_(modes_) {
        for (std::size_t k = 0; k < modes_; ++k) xi2_[k] = grid.wavenumber(k) * grid.wavenumber(k);
        pad_.resize(fft2_.spectrum_size());
        fine_.resize(2 * grid.points);
    }

    SpectralState to_spectral(std::span<const double> u, std::span<const double> v) {
        SpectralState s{Spectrum(modes_), Spectrum(modes_)};
        fft_.forward(u, s.u);
        fft_.forward(v, s.v);
        return s;
    }

    std::vector<double> to_physical(const Spectrum& c) {
        std::vector<double> out(grid_.points);
        fft_.inverse(c, out);
        return out;
    }

    /// Integrating-factor (Lawson) RK4 step; false on non-finite values.
    bool step(const SpectralState& in, double h, SpectralState& out) {
        const Symbols& full = symbols(h);
        const Symbols& half = symbols(0.5 * h);
        out.u.resize(modes_);
        out.v.resize(modes_);
        Spectrum eu_half(modes_), eu_full(modes_), ev_full(modes_);
        for (std::size_t k = 0; k < modes_; ++k) {
            eu_half[k] = (half.s[k] + half.st[k]) * in.u[k] + half.s[k] * in.v[k];
            eu_full[k] = (full.s[k] + full.st[k]) * in.u[k] + full.s[k] * in.v[k];
            ev_full[k] = -xi2_[k] * full.s[k] * in.u[k] + full.st[k] * in.v[k];
        }
        if (linear_only_) {
            out.u = std::move(eu_full);
            out.v = std::move(ev_full);
            return true;
        }
        Spectrum n1(modes_), n2(modes_), n3(modes_), n4(modes_), stage(modes_);
        if (!nonlinear(in.u, n1)) return false;
        for (std::size_t k = 0; k < modes_; ++k) stage[k] = eu_half[k] + 0.5 * h * half.s[k] * n1[k];
        if (!nonlinear(stage, n2)) return false;
        if (!nonlinear(eu_half, n3)) return false;
        for (std::size_t k = 0; k < modes_; ++k) stage[k] = eu_full[k] + h * half.s[k] * n3[k];
        if (!nonlinear(stage, n4)) return false;
        const double w = h / 6.0;
        for (std::size_t k = 0; k < modes_; ++k) {
            const cplx mid = n2[k] + n3[k];
            out.u[k] = eu_full[k] + w * (full.s[k] * n1[k] + 2.0 * half.s[k] * mid);
            out.v[k] = ev_full[k] + w * (full.st[k] * n1[k] + 2.0 * half.st[k] * mid + n4[k]);
        }
        for (std::size_t k = 0; k < modes_; ++k)
            if (!std::isfinite(out.u[k].real()) || !std::isfinite(out.u[k].imag()) ||
                !std::isfinite(out.v[k].real()) || !std::isfinite(out.v[k].imag()))
                return false;
        return true;
    }

private:
    struct Symbols {
        double h;
        std::vector<double> s;
        std::vector<double> st;
    };

    const Symbols& symbols(double h) {
        for (const auto& c : cache_)
            if (c.h == h) return c;
        if (cache_.size() >= 16) cache_.pop_front();
        Symbols sym{h, std::vector<double>(modes_), std::vector<double>(modes_)};
        for (std::size_t k = 0; k < modes_; ++k) {
            const auto v = damped_symbol_at(h, grid_.wavenumber(k));
            sym.s[k] = v.sigma;
            sym.st[k] = v.sigma_t;
        }
        cache_.push_back(std::move(sym));
        return cache_.back();
    }

    // |u|^p on the 2N grid, restricted to the N-grid modes (Nyquist dropped).
    bool nonlinear(const Spectrum& u, Spectrum& out) {
        const std::size_t half_n = grid_.points / 2;
        std::fill(pad_.begin(), pad_.end(), cplx{});
        for (std::size_t k = 0; k < half_n; ++k) pad_[k] = 2.0 * u[k];
        fft2_.inverse(pad_, fine_);
        for (double& x : fine_) {
            x = std::pow(std::abs(x), p_);
            if (!std::isfinite(x)) return false;
        }
        fft2_.forward(fine_, pad_);
        for (std::size_t k = 0; k < half_n; ++k) out[k] = 0.5 * pad_[k];
        out[half_n] = 0.0;
        return true;
    }

    GridSpec grid_;
    double p_;
    bool linear_only_;
    RealFft& fft_;
    RealFft& fft2_;
    std::size_t modes_;
    std::vector<double> xi2_;
    Spectrum pad_;
    std::vector<double> fine_;
    std::deque<Symbols> cache_;
};

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double boundary_max(const GridSpec& g, std::span<const double> u) {
    const double edge = 0.9 * g.half_width;
    double m = 0.0;
    for (std::size_t j = 0; j < g.points; ++j)
        if (std::abs(g.x(j)) >= edge) m = std::max(m, std::abs(u[j]));
    return m;
}

// Bound on the physical amplitude carried by the upper half of the resolved band.
double spectral_tail(const Spectrum& c, std::size_t n) {
    double s = 0.0;
    for (std::size_t k = n / 4; k < c.size(); ++k) s += std::abs(c[k]);
    return 2.0 * s / static_cast<double>(n);
}

// Root of the least-squares line through (t_i, |u|_inf^{-(p-1)/2}); the ODE
// blow-up profile u ~ (T - t)^{-2/(p-1)} makes this quantity linear in t.
std::optional<double> extrapolate_blowup(const std::deque<std::pair<double, double>>& hist, double p) {
    if (hist.size() < 3) return std::nullopt;
    const double e = -0.5 * (p - 1.0);
    double st = 0.0, sy = 0.0;
    for (const auto& [t, m] : hist) st += t, sy += std::pow(m, e);
    const double n = static_cast<double>(hist.size());
    const double mt = st / n, my = sy / n;
    double stt = 0.0, sty = 0.0;
    for (const auto& [t, m] : hist) {
        stt += (t - mt) * (t - mt);
        sty += (t - mt) * (std::pow(m, e) - my);
    }
    if (stt <= 0.0) return std::nullopt;
    const double slope = sty / stt;
    if (!(slope < 0.0)) return std::nullopt;
    return mt - my / slope;
}

}  // namespace

SolverState initial_state(const GridFunction& u0, const GridFunction& u1, double dt) {
    if (!(u0.spec() == u1.spec())) throw std::invalid_argument("initial_state: grid mismatch");
    return SolverState{0.0, u0, u1, dt, 0, u0.max_abs()};
}

std::optional<SolverState> step(const SolverState& state, double p, double dt, bool linear_only) {
    if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
    if (!(p > 1.0)) throw std::invalid_argument("step: p must exceed 1");
    const GridSpec& g = state.u.spec();
    Integrator integ(g, p, linear_only);
    const SpectralState in = integ.to_spectral(state.u.values(), state.v.values());
    SpectralState out;
    if (!integ.step(in, dt, out)) return std::nullopt;
    std::vector<double> u = integ.to_physical(out.u);
    std::vector<double> v = integ.to_physical(out.v);
    for (double x : u)
        if (!std::isfinite(x)) return std::nullopt;
    for (double x : v)
        if (!std::isfinite(x)) return std::nullopt;
    const double m = max_abs(u);
    return SolverState{state.t + dt, GridFunction(g, std::move(u)), GridFunction(g, std::move(v)), dt,
                       state.steps_taken + 1, m};
}

std::string_view to_string(LifespanStatus s) {
    switch (s) {
    case LifespanStatus::blown_up: return "blown_up";
    case LifespanStatus::survived_horizon: return "survived_horizon";
    case LifespanStatus::truncation_abort: return "truncation_abort";
    }
    return "unknown";
}

void write_csv(std::ostream& os, const FunctionalTrace& trace) {
    const auto old_precision = os.precision();
    os << "t,U,w_plus,w_minus\n" << std::setprecision(17);
    for (std::size_t i = 0; i < trace.times.size(); ++i)
        os << trace.times[i] << ',' << trace.U[i] << ',' << trace.w_plus[i] << ',' << trace.w_minus[i]
           << '\n';
    os.precision(old_precision);
}

LifespanResult solve_lifespan(const GridFunction& u0, const GridFunction& u1, double p,
                              double amplitude, double horizon, const SolverControl& ctrl) {
    if (!(p > 1.0)) throw std::invalid_argument("solve_lifespan: p must exceed 1");
    if (!(horizon > 0.0)) throw std::invalid_argument("solve_lifespan: horizon must be positive");
    if (!(u0.spec() == u1.spec())) throw std::invalid_argument("solve_lifespan: grid mismatch");
    if (!(ctrl.dt_max > 0.0) || !(ctrl.dt_min > 0.0) || ctrl.dt_min > ctrl.dt_max)
        throw std::invalid_argument("solve_lifespan: invalid step bounds");

    const GridSpec& g = u0.spec();
    LifespanResult res;
    LifespanEstimate& est = res.estimate;
    est.grid = g;
    est.threshold_used =
        ctrl.blowup_threshold > 0.0 ? ctrl.blowup_threshold : std::max(1e6 * amplitude, 1e4);
    est.dt_min_used = std::numeric_limits<double>::infinity();

    Integrator integ(g, p, ctrl.linear_only);
    SpectralState S = integ.to_spectral(u0.values(), u1.values());
    const double amp0 = spectral_norm(S.u) + spectral_norm(S.v);
    const double atol = ctrl.rtol * std::max(amp0, std::numeric_limits<double>::min());

    double t = 0.0;
    double dt = std::clamp(ctrl.dt_initial, ctrl.dt_min, ctrl.dt_max);
    double m = u0.max_abs();
    std::deque<std::pair<double, double>> hist;
    std::optional<double> asymptote;
    bool crossed = m >= est.threshold_used;

    auto finish = [&](LifespanStatus status, double lo, double hi) {
        est.status = status;
        est.T_low = lo;
        est.T_high = std::max(lo, hi);
    };

    auto record = [&](const std::vector<double>& u) {
        if (!ctrl.record_functionals || t < std::max(ctrl.functional_t0, kCorridorStart)) return;
        const GridFunction uf(g, u);
        const FunctionalValues fv = track_functionals(SolverState{t, uf, uf, dt, est.steps, m});
        res.trace.times.push_back(t);
        res.trace.U.push_back(fv.U);
        res.trace.w_plus.push_back(fv.w_plus);
        res.trace.w_minus.push_back(fv.w_minus);
    };

    while (true) {
        if (t >= horizon * (1.0 - 1e-14)) {
            finish(LifespanStatus::survived_horizon, t, t);
            break;
        }
        const double h = std::min(dt, horizon - t);
        SpectralState next;
        std::vector<double> u_next;
        double err = 0.0;
        bool finite = integ.step(S, h, next);
        if (finite && ctrl.adaptive) {
            SpectralState mid, fine;
            finite = integ.step(S, 0.5 * h, mid) && integ.step(mid, 0.5 * h, fine);
            if (finite) {
                Spectrum du(next.u.size()), dv(next.v.size());
                for (std::size_t k = 0; k < du.size(); ++k) {
                    du[k] = fine.u[k] - next.u[k];
                    dv[k] = fine.v[k] - next.v[k];
                }
                err = std::max(spectral_norm(du) / (atol + ctrl.rtol * spectral_norm(fine.u)),
                               spectral_norm(dv) / (atol + ctrl.rtol * spectral_norm(fine.v))) /
                      15.0;
                next = std::move(fine);
            }
        }
        double m_next = 0.0;
        if (finite) {
            u_next = integ.to_physical(next.u);
            m_next = max_abs(u_next);
            finite = std::isfinite(m_next);
        }
        const bool at_floor = 0.5 * h < ctrl.dt_min;
        if (!finite) {
            if (at_floor) {
                finish(LifespanStatus::blown_up, t, asymptote.value_or(t + h));
                break;
            }
            dt = 0.5 * h;
            ++est.rejected;
            continue;
        }
        const bool too_inaccurate = ctrl.adaptive && err > 1.0;
        const bool jumped = m > 0.0 && m_next > 2.0 * m;
        if ((too_inaccurate || jumped) && !at_floor) {
            dt = 0.5 * h;
            ++est.rejected;
            continue;
        }

        t += h;
        S = std::move(next);
        m = m_next;
        ++est.steps;
        est.dt_min_used = std::min(est.dt_min_used, h);
        if (ctrl.adaptive && err < 1.0 / 32.0 && h == dt) dt = std::min(2.0 * dt, ctrl.dt_max);

        if (ctrl.check_boundary && 
            boundary_max(g, u_next) > ctrl.boundary_tol * m + spectral_tail(S.u, g.points)) {
            finish(LifespanStatus::truncation_abort, t, t);
            break;
        }
        record(u_next);

        hist.emplace_back(t, m);
        if (hist.size() > ctrl.extrapolation_samples) hist.pop_front();
        if (m >= est.threshold_used) crossed = true;
        if (crossed) {
            asymptote = extrapolate_blowup(hist, p);
            if (asymptote && *asymptote >= t && *asymptote - t <= ctrl.bracket_tol * *asymptote) {
                finish(LifespanStatus::blown_up, t, *asymptote);
                break;
            }
            if (m > 1e250) {
                finish(LifespanStatus::blown_up, t, asymptote.value_or(t));
                break;
            }
        }
    }
    if (!std::isfinite(est.dt_min_used)) est.dt_min_used = 0.0;
    return res;
}

LifespanResult solve_lifespan(const DataFamily& data, double p, double horizon,
                              const SolverControl& ctrl) {
    return solve_lifespan(data.u0(), data.u1(), p, data.epsilon, horizon, ctrl);
}

Trajectory integrate_to(const GridFunction& u0, const GridFunction& u1, double p,
                        std::span<const double> times, const SolverControl& ctrl) {
    if (!(u0.spec() == u1.spec())) throw std::invalid_argument("integrate_to: grid mismatch");
    const GridSpec& g = u0.spec();
    Integrator integ(g, p, ctrl.linear_only);
    SpectralState S = integ.to_spectral(u0.values(), u1.values());
    Trajectory traj;
    traj.push(0.0, u0, u1);
    double t = 0.0;
    for (double target : times) {
        if (!(target > t)) throw std::invalid_argument("integrate_to: times must increase from 0");
        const auto substeps = static_cast<std::size_t>(std::ceil((target - t) / ctrl.dt_max - 1e-9));
        const double h = (target - t) / static_cast<double>(std::max<std::size_t>(substeps, 1));
        for (std::size_t i = 0; i < std::max<std::size_t>(substeps, 1); ++i) {
            SpectralState next;
            if (!integ.step(S, h, next))
                throw NumericalError("integrate_to: solution became non-finite");
            S = std::move(next);
        }
        t = target;
        traj.push(t, GridFunction(g, integ.to_physical(S.u)), GridFunction(g, integ.to_physical(S.v)));
    }
    return traj;
}

}  // namespace dwlab
