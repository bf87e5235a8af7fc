#pragma once

#include <span>

namespace dwlab {

inline constexpr double kMinAcceptedR2 = 0.98;

/// Least-squares fit of log y = intercept + slope * log x.
struct ExponentFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double window_min = 0.0;
    double window_max = 0.0;
    bool accepted = false;  ///< r_squared >= kMinAcceptedR2

    double predict(double x) const;
};

/// Requires at least two points with positive x and y.
ExponentFit fit_power_law(std::span<const double> x, std::span<const double> y);

/// Two-parameter critical law T eps^{2/3} = A exp(2 W(B eps^{-1/2}) / 3),
/// fitted in log T.
struct LambertFit {
    double A = 0.0;
    double B = 0.0;
    double r_squared = 0.0;

    double predict(double eps) const;
};

LambertFit fit_lambert_law(std::span<const double> eps, std::span<const double> T);

}  // namespace dwlab
