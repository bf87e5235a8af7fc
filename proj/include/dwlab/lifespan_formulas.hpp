#pragma once

#include "dwlab/data_family.hpp"

#include <string>
#include <string_view>

namespace dwlab {

/// Lifespan regime selected by (p, moment class).
enum class LifespanRegime {
    classical,      ///< M0(f0+f1) != 0: T_p(c eps)
    subcritical_m1, ///< M0 = 0, M1 != 0, p < 3/2: c eps^{-(p-1)/(2-p)}
    critical_m1,    ///< M0 = 0, M1 != 0, p = 3/2: Lambert-W corrected law
    generic,        ///< M1 = 0 or p > 3/2: T_{1,p}(c eps^p)
};

std::string_view to_string(LifespanRegime r);

LifespanRegime classify_regime(double p, MomentClass moment_class);

/// Fit constants of the two-sided lifespan bounds; the theory only asserts
/// that they exist.
struct LifespanConstants {
    double c = 1.0;
    double C = 1.0;
};

struct LifespanPrediction {
    LifespanRegime regime;
    double value;  ///< evaluated with the lower constant c
    double upper;  ///< evaluated with the upper constant C
    std::string formula_text;
};

/// T_p(eta) = eta^{-2(p-1)/(3-p)} for 1 < p < 3, exp(eta^{-2}) for p = 3.
double fujita_lifespan(double p, double eta);

LifespanPrediction predict_lifespan(double p, double eps, MomentClass moment_class,
                                    LifespanConstants constants = {});

/// d log T / d log eps of the power-law regimes; NaN for the critical one.
double lifespan_exponent(double p, MomentClass moment_class);

/// Left side of the defining equation of the crossover time:
///   sqrt(T+1) * int_0^T (1+t)^{-(2p-1)/2} dt.
double crossover_lhs(double p, double T);

/// Root T > 1 of crossover_lhs(p, T) = C eps^{1-p}, by bisection.
/// Throws HorizonError when the root does not exceed 1.
double tilde_T2p(double p, double eps, double C = 1.0);

/// Leading-order closed forms of the same root:
///   p > 3/2: ((p-3/2) C eps^{1-p})^2,
///   p = 3/2: exp(2 W(C eps^{-1/2} / 2)) - 1 (exact),
///   p < 3/2: ((3/2-p) C eps^{1-p})^{1/(2-p)}.
double tilde_T2p_closed_form(double p, double eps, double C = 1.0);

}  // namespace dwlab
