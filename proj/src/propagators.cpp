#include "dwlab/propagators.hpp"

#include "dwlab/error.hpp"
#include "dwlab/fft.hpp"
#include "dwlab/quadrature.hpp"
#include "dwlab/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace dwlab {

namespace {

// Below this value of |1/4 - xi^2| t^2 the symbol is summed as a series in
// (1/4 - xi^2); six terms leave a relative error below 1e-20.
constexpr double kSeriesThreshold = 1e-2;

void check_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("propagator: t must be >= 0");
}

template <typename Multiplier>
GridFunction apply_multiplier(const GridFunction& f, Multiplier&& mult) {
    const GridSpec& g = f.spec();
    auto& fft = RealFft::local(g.points);
    std::vector<std::complex<double>> c(fft.spectrum_size());
    fft.forward(f.values(), c);
    for (std::size_t k = 0; k < c.size(); ++k) c[k] *= mult(g.wavenumber(k));
    std::vector<double> out(g.points);
    fft.inverse(c, out);
    return GridFunction(g, std::move(out));
}

}  // namespace

SymbolValue damped_symbol_at(double t, double xi) {
    check_time(t);
    const double q = 0.25 - xi * xi;
    if (std::abs(q) * t * t < kSeriesThreshold) {
        // sinh(mu t)/mu = sum q^k t^{2k+1}/(2k+1)!, cosh(mu t) = sum q^k t^{2k}/(2k)!
        double sh = 0.0, ch = 0.0;
        double ct = 1.0;  // q^k t^{2k} / (2k)!
        for (int k = 0; k < 6; ++k) {
            ch += ct;
            sh += ct * t / (2.0 * k + 1.0);
            ct *= q * t * t / ((2.0 * k + 1.0) * (2.0 * k + 2.0));
        }
        const double damp = std::exp(-0.5 * t);
        return {damp * sh, damp * (ch - 0.5 * sh)};
    }
    if (q > 0.0) {
        const double mu = std::sqrt(q);
        const double lam = -xi * xi / (0.5 + mu);  // -1/2 + mu without cancellation
        const double grow = std::exp(lam * t);
        const double ratio = -std::expm1(-2.0 * mu * t) / (2.0 * mu);
        return {grow * ratio, grow * (lam * ratio + std::exp(-2.0 * mu * t))};
    }
    const double nu = std::sqrt(-q);
    const double damp = std::exp(-0.5 * t);
    const double s = std::sin(nu * t) / nu;
    return {damp * s, damp * (std::cos(nu * t) - 0.5 * s)};
}

PropagatorSymbol damped_symbol(double t, const GridSpec& spec) {
    check_time(t);
    PropagatorSymbol sym;
    sym.t = t;
    const std::size_t m = spec.points / 2 + 1;
    sym.freq.resize(m);
    sym.sigma.resize(m);
    sym.sigma_t.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        sym.freq[k] = spec.wavenumber(k);
        const auto v = damped_symbol_at(t, sym.freq[k]);
        sym.sigma[k] = v.sigma;
        sym.sigma_t[k] = v.sigma_t;
    }
    return sym;
}

void check_boundary_decay(const GridFunction& f, double rel_tol) {
    const GridSpec& g = f.spec();
    const double scale = f.max_abs();
    if (scale == 0.0) return;
    const double edge = 0.95 * g.half_width;
    for (std::size_t j = 0; j < g.points; ++j) {
        if (std::abs(g.x(j)) >= edge && std::abs(f[j]) > rel_tol * scale)
            throw TruncationError("data is not negligible near the edge of the truncated line");
    }
}

GridFunction apply_S(double t, const GridFunction& f, double edge_tol) {
    check_time(t);
    check_boundary_decay(f, edge_tol);
    return apply_multiplier(f, [t](double xi) { return damped_symbol_at(t, xi).sigma; });
}

GridFunction apply_dtS(double t, const GridFunction& f, double edge_tol) {
    check_time(t);
    check_boundary_decay(f, edge_tol);
    return apply_multiplier(f, [t](double xi) { return damped_symbol_at(t, xi).sigma_t; });
}

namespace {

// out_j = sum_i weights[i] f_{j - (first_offset + i)}, indices mod N.
struct Stencil {
    long first_offset = 0;
    std::vector<double> weights;
};

constexpr int kInterpLeft = 3;   // nodes -3..4 around the bracketing cell
constexpr int kInterpPoints = 8;

void lagrange_weights(double s, double (&w)[kInterpPoints]) {
    for (int a = 0; a < kInterpPoints; ++a) {
        const double na = a - kInterpLeft;
        double v = 1.0;
        for (int b = 0; b < kInterpPoints; ++b) {
            if (b == a) continue;
            const double nb = b - kInterpLeft;
            v *= (s - nb) / (na - nb);
        }
        w[a] = v;
    }
}

Stencil kernel_stencil(double t, double h) {
    if (!(t > 0.0 && t <= kKernelMaxTime))
        throw std::invalid_argument("apply_S_kernel: t must lie in (0, 50]");
    const long m_lo = static_cast<long>(std::floor(-t / h));
    const long m_hi = static_cast<long>(std::ceil(t / h)) - 1;
    Stencil st;
    st.first_offset = m_lo + 1 - (kInterpPoints - 1 - kInterpLeft);
    st.weights.assign(static_cast<std::size_t>(m_hi - m_lo + kInterpPoints), 0.0);
    const QuadratureRule unit = gauss_legendre(8, 0.0, 1.0);
    double lw[kInterpPoints];
    for (long m = m_lo; m <= m_hi; ++m) {
        const double a = std::max(static_cast<double>(m) * h, -t);
        const double b = std::min(static_cast<double>(m + 1) * h, t);
        if (!(b > a)) continue;
        for (std::size_t q = 0; q < unit.nodes.size(); ++q) {
            const double y = a + (b - a) * unit.nodes[q];
            const double wq = (b - a) * unit.weights[q];
            const double arg = 0.5 * std::sqrt(std::max(0.0, (t - y) * (t + y)));
            const double kernel = 0.5 * std::exp(arg - 0.5 * t) * bessel_i0_scaled(arg);
            // f(x_j - y) sits at fractional index (j - m - 1) + s.
            const double theta = y / h - static_cast<double>(m);
            lagrange_weights(1.0 - theta, lw);
            for (int l = 0; l < kInterpPoints; ++l) {
                const long d = m + 1 - (l - kInterpLeft);
                st.weights[static_cast<std::size_t>(d - st.first_offset)] += wq * kernel * lw[l];
            }
        }
    }
    return st;
}

}  // namespace

GridFunction apply_S_kernel(double t, const GridFunction& f) {
    const GridSpec& g = f.spec();
    const Stencil st = kernel_stencil(t, g.spacing);
    const long n = static_cast<long>(g.points);
    std::vector<double> out(g.points, 0.0);
    for (std::size_t i = 0; i < st.weights.size(); ++i) {
        const double w = st.weights[i];
        if (w == 0.0) continue;
        const long d = ((st.first_offset + static_cast<long>(i)) % n + n) % n;
        for (long j = 0; j < n; ++j) {
            long src = j - d;
            if (src < 0) src += n;
            out[static_cast<std::size_t>(j)] += w * f[static_cast<std::size_t>(src)];
        }
    }
    return GridFunction(g, std::move(out));
}

double kernel_mass(double t, const GridSpec& spec) {
    const Stencil st = kernel_stencil(t, spec.spacing);
    double s = 0.0;
    for (double w : st.weights) s += w;
    return s;
}

GridFunction apply_wave(double t, const GridFunction& f) {
    check_time(t);
    const GridSpec& g = f.spec();
    const std::size_t n = g.points;
    const double h = g.spacing;
    if (t == 0.0) return GridFunction::zeros(g);
    // Antiderivative at nodes: trapezoid with the Euler-Maclaurin end
    // correction. Derivatives come from a local five-point stencil so that
    // jumps elsewhere do not leak in.
    const long nl = static_cast<long>(n);
    auto at = [&](long i) { return f[static_cast<std::size_t>(((i % nl) + nl) % nl)]; };
    std::vector<double> df(n);
    for (long i = 0; i < nl; ++i)
        df[static_cast<std::size_t>(i)] = (at(i - 2) - 8.0 * at(i - 1) + 8.0 * at(i + 1) - at(i + 2)) / (12.0 * h);
    std::vector<double> F(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t k = (i + 1) % n;
        F[i + 1] = F[i] + 0.5 * h * (f[i] + f[k]) + h * h * (df[i] - df[k]) / 12.0;
    }
    const double period_mass = F[n];
    struct Node {
        double F, dF, d2F;  // derivatives in the index variable
    };
    auto node = [&](long i) {
        const long wrap = (i >= 0) ? i / nl : -((-i + nl - 1) / nl);
        const auto r = static_cast<std::size_t>(i - wrap * nl);
        return Node{F[r] + static_cast<double>(wrap) * period_mass, h * f[r], h * h * df[r]};
    };
    // Quintic Hermite interpolation of F at fractional index s.
    auto eval = [&](double s) {
        const long i = static_cast<long>(std::floor(s));
        const double x = s - static_cast<double>(i);
        const Node a = node(i), b = node(i + 1);
        const double x2 = x * x, x3 = x2 * x, x4 = x3 * x, x5 = x4 * x;
        const double h0 = 1 - 10 * x3 + 15 * x4 - 6 * x5;
        const double h1 = x - 6 * x3 + 8 * x4 - 3 * x5;
        const double h2 = 0.5 * (x2 - 3 * x3 + 3 * x4 - x5);
        const double h3 = 10 * x3 - 15 * x4 + 6 * x5;
        const double h4 = -4 * x3 + 7 * x4 - 3 * x5;
        const double h5 = 0.5 * (x3 - 2 * x4 + x5);
        return h0 * a.F + h1 * a.dF + h2 * a.d2F + h3 * b.F + h4 * b.dF + h5 * b.d2F;
    };
    const double shift = t / h;
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double s = static_cast<double>(j);
        out[j] = 0.5 * (eval(s + shift) - eval(s - shift));
    }
    return GridFunction(g, std::move(out));
}

GridFunction apply_heat(double t, const GridFunction& f) {
    check_time(t);
    return apply_multiplier(f, [t](double xi) { return std::exp(-t * xi * xi); });
}

std::pair<GridFunction, GridFunction> propagate_linear(double t, const GridFunction& u0,
                                                       const GridFunction& u1) {
    check_time(t);
    if (!(u0.spec() == u1.spec())) throw std::invalid_argument("propagate_linear: grid mismatch");
    const GridSpec& g = u0.spec();
    auto& fft = RealFft::local(g.points);
    const std::size_t m = fft.spectrum_size();
    std::vector<std::complex<double>> a(m), b(m), cu(m), cv(m);
    fft.forward(u0.values(), a);
    fft.forward(u1.values(), b);
    for (std::size_t k = 0; k < m; ++k) {
        const double xi = g.wavenumber(k);
        const auto s = damped_symbol_at(t, xi);
        cu[k] = (s.sigma + s.sigma_t) * a[k] + s.sigma * b[k];
        cv[k] = -xi * xi * s.sigma * a[k] + s.sigma_t * b[k];
    }
    std::vector<double> u(g.points), v(g.points);
    fft.inverse(cu, u);
    fft.inverse(cv, v);
    return {GridFunction(g, std::move(u)), GridFunction(g, std::move(v))};
}

namespace {

template <typename NormAt>
DecayReport scan(double p, std::span<const double> times, std::optional<FitWindow> window,
                 NormAt&& norm_at) {
    if (times.empty()) throw std::invalid_argument("scan: no sample times");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1])) throw std::invalid_argument("scan: times must increase");
    DecayReport rep;
    rep.p = p;
    rep.times.assign(times.begin(), times.end());
    for (double t : times) rep.norms.push_back(norm_at(t));

    const FitWindow w = window.value_or(FitWindow{times.back() / 10.0, times.back()});
    if (w.t_max < 10.0 || !(w.t_max > w.t_min))
        throw std::invalid_argument("scan: fit window too small (horizon must be >= 10)");
    std::vector<double> ft, fn;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] >= w.t_min * (1 - 1e-12) && times[i] <= w.t_max * (1 + 1e-12) && times[i] > 0) {
            ft.push_back(times[i]);
            fn.push_back(rep.norms[i]);
        }
    }
    if (ft.size() < 3) throw std::invalid_argument("scan: fewer than three samples in fit window");
    rep.fitted = fit_power_law(ft, fn);
    return rep;
}

}  // namespace

DecayReport decay_scan(const GridFunction& f, double p, std::span<const double> times,
                       std::optional<FitWindow> window) {
    return scan(p, times, window, [&](double t) { return lp_norm(apply_S(t, f), p); });
}

DecayReport residual_scan(const GridFunction& f, double p, std::span<const double> times,
                          ResidualVariant variant, std::optional<FitWindow> window) {
    return scan(p, times, window, [&](double t) {
        GridFunction r = apply_S(t, f) - apply_heat(t, f);
        if (variant == ResidualVariant::heat_plus_wave) r -= std::exp(-0.5 * t) * apply_wave(t, f);
        return lp_norm(r, p);
    });
}

double moment_decay_exponent(double p, int vanishing_moments) {
    const double inv_pp = (p == kInfNorm || std::isinf(p)) ? 1.0 : 1.0 - 1.0 / p;
    return -0.5 * vanishing_moments - 0.5 * inv_pp;
}

double printed_decay_exponent(double p, int vanishing_moments) {
    const double inv_pp = (p == kInfNorm || std::isinf(p)) ? 1.0 : 1.0 - 1.0 / p;
    return -0.5 * vanishing_moments - inv_pp;
}

}  // namespace dwlab
