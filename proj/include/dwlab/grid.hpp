#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace dwlab {

/// Uniform periodic grid on [-L, L): x_j = -L + j h, h = 2L/N.
struct GridSpec {
    double half_width = 0.0;
    std::size_t points = 0;
    double spacing = 0.0;

    double x(std::size_t j) const { return -half_width + static_cast<double>(j) * spacing; }

    /// Angular wavenumber of the k-th half-spectrum mode, k = 0..N/2.
    double wavenumber(std::size_t k) const;

    bool operator==(const GridSpec&) const = default;
};

/// Validates N (power of two, >= 16) and L > 0.
GridSpec make_grid(double half_width, std::size_t points);

/// Real field sampled on a GridSpec. Samples are finite by construction.
class GridFunction {
public:
    GridFunction(GridSpec spec, std::vector<double> values);

    static GridFunction zeros(const GridSpec& spec);
    static GridFunction sample(const GridSpec& spec, const std::function<double(double)>& fn);

    const GridSpec& spec() const { return spec_; }
    std::span<const double> values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t j) const { return values_[j]; }

    double max_abs() const;

    GridFunction& operator+=(const GridFunction& other);
    GridFunction& operator-=(const GridFunction& other);
    GridFunction& operator*=(double c);

private:
    GridSpec spec_;
    std::vector<double> values_;
};

GridFunction operator+(GridFunction a, const GridFunction& b);
GridFunction operator-(GridFunction a, const GridFunction& b);
GridFunction operator*(double c, GridFunction f);

/// Sentinel for the sup norm.
inline constexpr double kInfNorm = -1.0;

/// Trapezoidal (periodic) L^p norm; p = kInfNorm (or +inf) gives max |f|.
double lp_norm(const GridFunction& f, double p);

/// First derivative by Fourier differentiation (Nyquist mode dropped).
GridFunction spectral_derivative(const GridFunction& f);

/// ||f||_{L^p} + ||f'||_{L^p}.
double sobolev_norm(const GridFunction& f, double p);

inline constexpr int kMaxMomentOrder = 4;

/// Trapezoidal approximation of the k-th moment, k <= 4.
double moment(const GridFunction& f, int k);

struct MomentVector {
    std::vector<double> m;
};

MomentVector moments(const GridFunction& f, int max_order);

/// Sampled (u, u_t) history on [0, T]; times start at 0 and increase strictly.
class Trajectory {
public:
    void push(double t, GridFunction u, GridFunction ut);

    bool empty() const { return times_.empty(); }
    std::size_t size() const { return times_.size(); }
    const std::vector<double>& times() const { return times_; }
    const GridFunction& u(std::size_t i) const { return states_[i].first; }
    const GridFunction& ut(std::size_t i) const { return states_[i].second; }

    /// Index of a stored time within `tol`, or size() when absent.
    std::size_t find(double t, double tol = 1e-12) const;

private:
    std::vector<double> times_;
    std::vector<std::pair<GridFunction, GridFunction>> states_;
};

/// Weighted space-time norms used by the local existence arguments:
///   X: L^1 / L^p control of u with derivative weights (1+t)^{1/2} and (1+t),
///   Y: u decaying like (1+t)^{-1/2} in W^{1,1} (first moment present),
///   Z: u decaying like (1+t)^{-1} in W^{1,1} (first two moments vanish).
/// Each supremum line is taken separately, as displayed; the L^p factor is
/// always weighted by (1+t)^{1/(2p')} with p' = p/(p-1).
enum class NormKind { X, Y, Z };

double weighted_norm(const Trajectory& traj, NormKind kind, double p);

/// CSV `x,value` with 17 significant digits.
void write_csv(std::ostream& os, const GridFunction& f);
GridFunction read_csv(std::istream& is);

}  // namespace dwlab
