#include "dwlab/lifespan_formulas.hpp"

#include "dwlab/error.hpp"
#include "dwlab/special_functions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dwlab {

namespace {
constexpr double kCriticalP = 1.5;

bool is_critical(double p) { return std::abs(p - kCriticalP) < 1e-12; }

void check_p(double p) {
    if (!(p > 1.0 && p <= 3.0)) throw std::invalid_argument("lifespan: p must lie in (1, 3]");
}
}  // namespace

std::string_view to_string(LifespanRegime r) {
    switch (r) {
    case LifespanRegime::classical: return "classical";
    case LifespanRegime::subcritical_m1: return "subcritical_M1";
    case LifespanRegime::critical_m1: return "critical_M1";
    case LifespanRegime::generic: return "generic";
    }
    return "unknown";
}

LifespanRegime classify_regime(double p, MomentClass moment_class) {
    check_p(p);
    switch (moment_class) {
    case MomentClass::m0_nonzero: return LifespanRegime::classical;
    case MomentClass::m0_zero_m1_nonzero:
        if (is_critical(p)) return LifespanRegime::critical_m1;
        return p < kCriticalP ? LifespanRegime::subcritical_m1 : LifespanRegime::generic;
    case MomentClass::m0_m1_zero:
    case MomentClass::zero_sum: return LifespanRegime::generic;
    }
    return LifespanRegime::generic;
}

double fujita_lifespan(double p, double eta) {
    check_p(p);
    if (!(eta > 0.0)) throw std::invalid_argument("fujita_lifespan: eta must be positive");
    if (p == 3.0) return std::exp(1.0 / (eta * eta));
    return std::pow(eta, -2.0 * (p - 1.0) / (3.0 - p));
}

namespace {
double evaluate(LifespanRegime regime, double p, double eps, double c) {
    switch (regime) {
    case LifespanRegime::classical: return fujita_lifespan(p, c * eps);
    case LifespanRegime::subcritical_m1: return c * std::pow(eps, -(p - 1.0) / (2.0 - p));
    case LifespanRegime::critical_m1:
        return c * std::pow(eps, -2.0 / 3.0) * std::exp(2.0 * lambert_w0(c / std::sqrt(eps)) / 3.0);
    case LifespanRegime::generic: return fujita_lifespan(p, c * std::pow(eps, p));
    }
    return std::numeric_limits<double>::quiet_NaN();
}

const char* formula(LifespanRegime regime) {
    switch (regime) {
    case LifespanRegime::classical: return "T_p(c*eps)";
    case LifespanRegime::subcritical_m1: return "c*eps^(-(p-1)/(2-p))";
    case LifespanRegime::critical_m1: return "c*eps^(-2/3)*exp(2*W(c*eps^(-1/2))/3)";
    case LifespanRegime::generic: return "T_p(c*eps^p)";
    }
    return "";
}
}  // namespace

LifespanPrediction predict_lifespan(double p, double eps, MomentClass moment_class,
                                    LifespanConstants constants) {
    check_p(p);
    if (!(eps > 0.0)) throw std::invalid_argument("predict_lifespan: eps must be positive");
    const LifespanRegime regime = classify_regime(p, moment_class);
    return LifespanPrediction{regime, evaluate(regime, p, eps, constants.c),
                              evaluate(regime, p, eps, constants.C), formula(regime)};
}

double lifespan_exponent(double p, MomentClass moment_class) {
    switch (classify_regime(p, moment_class)) {
    case LifespanRegime::classical: return -2.0 * (p - 1.0) / (3.0 - p);
    case LifespanRegime::subcritical_m1: return -(p - 1.0) / (2.0 - p);
    case LifespanRegime::critical_m1: return std::numeric_limits<double>::quiet_NaN();
    case LifespanRegime::generic: return -2.0 * p * (p - 1.0) / (3.0 - p);
    }
    return std::numeric_limits<double>::quiet_NaN();
}

double crossover_lhs(double p, double T) {
    if (!(p > 1.0)) throw std::invalid_argument("crossover_lhs: p must exceed 1");
    if (T < 0.0) throw std::invalid_argument("crossover_lhs: T must be non-negative");
    const double one_minus_a = 1.5 - p;  // 1 - (2p-1)/2
    const double log1 = std::log1p(T);
    const double integral =
        is_critical(p) ? log1 : std::expm1(one_minus_a * log1) / one_minus_a;
    return std::sqrt(1.0 + T) * integral;
}

double tilde_T2p(double p, double eps, double C) {
    if (!(p > 1.0 && p <= 3.0)) throw std::invalid_argument("tilde_T2p: p must lie in (1, 3]");
    if (!(eps > 0.0) || !(C > 0.0)) throw std::invalid_argument("tilde_T2p: eps, C must be positive");
    const double target = C * std::pow(eps, 1.0 - p);
    if (crossover_lhs(p, 1.0) >= target)
        throw HorizonError("tilde_T2p: root does not exceed 1 (eps too large)");
    double lo = 1.0, hi = 2.0;
    while (crossover_lhs(p, hi) < target) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) throw HorizonError("tilde_T2p: no root below 1e300");
    }
    for (int iter = 0; iter < 300 && hi - lo > 1e-15 * hi; ++iter) {
        const double mid = std::sqrt(lo * hi);
        (crossover_lhs(p, mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double tilde_T2p_closed_form(double p, double eps, double C) {
    if (!(p > 1.0 && p <= 3.0)) throw std::invalid_argument("tilde_T2p: p must lie in (1, 3]");
    const double rhs = C * std::pow(eps, 1.0 - p);
    if (is_critical(p)) return std::exp(2.0 * lambert_w0(0.5 * rhs)) - 1.0;
    if (p > kCriticalP) return std::pow((p - kCriticalP) * rhs, 2.0);
    return std::pow((kCriticalP - p) * rhs, 1.0 / (2.0 - p));
}

}  // namespace dwlab
