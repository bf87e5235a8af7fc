#pragma once

#include "dwlab/grid.hpp"

namespace dwlab {

/// Argument at which bessel_i0 switches from the power series to the
/// large-argument expansion.
inline constexpr double kBesselSeriesLimit = 20.0;

/// Modified Bessel function I_0(y), y >= 0, relative error ~1e-15.
double bessel_i0(double y);

/// Exponentially scaled e^{-y} I_0(y); finite for every y >= 0.
double bessel_i0_scaled(double y);

/// The two branches, exposed so the seam can be tested.
double bessel_i0_series(double y);
double bessel_i0_asymptotic(double y);

/// Principal branch W_0 on [0, inf): W e^W = z.
double lambert_w0(double z);

/// g^{(j)} for the heat profile g(x) = exp(-x^2/4), j = 0..3.
double gaussian_derivative_at(int j, double x);
GridFunction gaussian_derivative(int j, const GridSpec& spec);

}  // namespace dwlab
