#include "dwlab/grid.hpp"

#include "dwlab/fft.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <iomanip>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace dwlab {

double GridSpec::wavenumber(std::size_t k) const {
    return std::numbers::pi * static_cast<double>(k) / half_width;
}

GridSpec make_grid(double half_width, std::size_t points) {
    if (!(half_width > 0.0) || !std::isfinite(half_width))
        throw std::invalid_argument("make_grid: half width must be positive");
    if (points < 16 || (points & (points - 1)) != 0)
        throw std::invalid_argument("make_grid: point count must be a power of two >= 16");
    return GridSpec{half_width, points, 2.0 * half_width / static_cast<double>(points)};
}

GridFunction::GridFunction(GridSpec spec, std::vector<double> values)
    : spec_(spec), values_(std::move(values)) {
    if (values_.size() != spec_.points)
        throw std::invalid_argument("GridFunction: sample count does not match grid");
    for (double v : values_)
        if (!std::isfinite(v)) throw std::invalid_argument("GridFunction: non-finite sample");
}

GridFunction GridFunction::zeros(const GridSpec& spec) {
    return GridFunction(spec, std::vector<double>(spec.points, 0.0));
}

GridFunction GridFunction::sample(const GridSpec& spec, const std::function<double(double)>& fn) {
    std::vector<double> v(spec.points);
    for (std::size_t j = 0; j < spec.points; ++j) v[j] = fn(spec.x(j));
    return GridFunction(spec, std::move(v));
}

double GridFunction::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
    if (!(other.spec_ == spec_)) throw std::invalid_argument("GridFunction: grid mismatch");
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += other.values_[j];
    return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
    if (!(other.spec_ == spec_)) throw std::invalid_argument("GridFunction: grid mismatch");
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] -= other.values_[j];
    return *this;
}

GridFunction& GridFunction::operator*=(double c) {
    for (double& v : values_) v *= c;
    return *this;
}

GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
GridFunction operator*(double c, GridFunction f) { return f *= c; }

double lp_norm(const GridFunction& f, double p) {
    if (p == kInfNorm || std::isinf(p)) return f.max_abs();
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1 or infinity");
    const double h = f.spec().spacing;
    if (p == 1.0) {
        double s = 0.0;
        for (double v : f.values()) s += std::abs(v);
        return h * s;
    }
    // Scale by the max to keep |f|^p representable for large p.
    const double m = f.max_abs();
    if (m == 0.0) return 0.0;
    double s = 0.0;
    for (double v : f.values()) s += std::pow(std::abs(v) / m, p);
    return m * std::pow(h * s, 1.0 / p);
}

GridFunction spectral_derivative(const GridFunction& f) {
    const GridSpec& g = f.spec();
    auto& fft = RealFft::local(g.points);
    std::vector<std::complex<double>> c(fft.spectrum_size());
    fft.forward(f.values(), c);
    for (std::size_t k = 0; k < c.size(); ++k) c[k] *= std::complex<double>(0.0, g.wavenumber(k));
    c.back() = 0.0;
    std::vector<double> out(g.points);
    fft.inverse(c, out);
    return GridFunction(g, std::move(out));
}

double sobolev_norm(const GridFunction& f, double p) {
    return lp_norm(f, p) + lp_norm(spectral_derivative(f), p);
}

double moment(const GridFunction& f, int k) {
    if (k < 0) throw std::invalid_argument("moment: order must be non-negative");
    if (k > kMaxMomentOrder)
        throw std::invalid_argument("moment: orders above 4 amplify tail truncation error");
    const GridSpec& g = f.spec();
    double s = 0.0;
    for (std::size_t j = 0; j < g.points; ++j) s += std::pow(g.x(j), k) * f[j];
    return g.spacing * s;
}

MomentVector moments(const GridFunction& f, int max_order) {
    MomentVector mv;
    for (int k = 0; k <= max_order; ++k) mv.m.push_back(moment(f, k));
    return mv;
}

void Trajectory::push(double t, GridFunction u, GridFunction ut) {
    if (times_.empty()) {
        if (t != 0.0) throw std::invalid_argument("Trajectory: first time must be 0");
    } else if (!(t > times_.back())) {
        throw std::invalid_argument("Trajectory: times must increase strictly");
    }
    if (!(u.spec() == ut.spec())) throw std::invalid_argument("Trajectory: grid mismatch");
    times_.push_back(t);
    states_.emplace_back(std::move(u), std::move(ut));
}

std::size_t Trajectory::find(double t, double tol) const {
    auto it = std::lower_bound(times_.begin(), times_.end(), t - tol);
    if (it != times_.end() && std::abs(*it - t) <= tol)
        return static_cast<std::size_t>(it - times_.begin());
    return times_.size();
}

double weighted_norm(const Trajectory& traj, NormKind kind, double p) {
    if (traj.empty()) throw std::invalid_argument("weighted_norm: empty trajectory");
    if (!(p > 1.0 && p <= 3.0)) throw std::invalid_argument("weighted_norm: p must lie in (1, 3]");
    const double inv_2pp = 0.5 * (1.0 - 1.0 / p);  // 1/(2p')

    double line1 = 0.0, line2 = 0.0, line3 = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const double w = 1.0 + traj.times()[i];
        const double wp = std::pow(w, inv_2pp);
        const GridFunction& u = traj.u(i);
        const GridFunction& ut = traj.ut(i);
        const GridFunction ux = spectral_derivative(u);

        const double u1 = lp_norm(u, 1.0), up = lp_norm(u, p);
        const double ux1 = lp_norm(ux, 1.0), uxp = lp_norm(ux, p);
        const double ut1 = lp_norm(ut, 1.0), utp = lp_norm(ut, p);
        const double time_line = w * (ut1 + wp * utp);

        switch (kind) {
        case NormKind::X:
            line1 = std::max(line1, u1 + wp * up);
            line2 = std::max(line2, std::sqrt(w) * (ux1 + wp * uxp));
            line3 = std::max(line3, time_line);
            break;
        case NormKind::Y:
            line1 = std::max(line1, std::sqrt(w) * ((u1 + ux1) + wp * (up + uxp)));
            line2 = std::max(line2, time_line);
            break;
        case NormKind::Z:
            line1 = std::max(line1, w * ((u1 + ux1) + wp * (up + uxp)));
            line2 = std::max(line2, time_line);
            break;
        }
    }
    return line1 + line2 + line3;
}

void write_csv(std::ostream& os, const GridFunction& f) {
    const auto old_precision = os.precision();
    os << "x,value\n" << std::setprecision(17);
    for (std::size_t j = 0; j < f.size(); ++j) os << f.spec().x(j) << ',' << f[j] << '\n';
    os.precision(old_precision);
}

GridFunction read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("x,value", 0) != 0)
        throw std::invalid_argument("read_csv: missing `x,value` header");
    std::vector<double> xs, vs;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw std::invalid_argument("read_csv: malformed row");
        xs.push_back(std::stod(line.substr(0, comma)));
        vs.push_back(std::stod(line.substr(comma + 1)));
    }
    if (xs.size() < 2) throw std::invalid_argument("read_csv: too few rows");
    const GridSpec spec = make_grid(-xs.front(), xs.size());
    if (std::abs((xs[1] - xs[0]) - spec.spacing) > 1e-9 * spec.spacing)
        throw std::invalid_argument("read_csv: nodes are not a uniform [-L, L) grid");
    return GridFunction(spec, std::move(vs));
}

}  // namespace dwlab
