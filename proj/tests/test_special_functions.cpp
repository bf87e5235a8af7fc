#include "dwlab/data_family.hpp"
#include "dwlab/error.hpp"
#include "dwlab/fit.hpp"
#include "dwlab/lifespan_formulas.hpp"
#include "dwlab/quadrature.hpp"
#include "dwlab/special_functions.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace dwlab;

namespace {

const double kPi = std::acos(-1.0);

// Power series of I0 in long double, summed until the terms stop mattering.
long double i0_series_ld(long double y) {
    long double term = 1.0L, sum = 1.0L;
    const long double q = y * y / 4.0L;
    for (int k = 1; k < 400; ++k) {
        term *= q / (static_cast<long double>(k) * k);
        sum += term;
        if (term < sum * 1e-21L) break;
    }
    return sum;
}

// Root of x e^x = z by plain bisection.
double w_bisect(double z) {
    double lo = 0.0, hi = std::max(1.0, std::log1p(z) + 1.0);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (mid * std::exp(mid) < z ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Five-point central difference.
double d1(double (*f)(int, double), int j, double x) {
    const double h = 1e-3;
    return (-f(j, x + 2 * h) + 8 * f(j, x + h) - 8 * f(j, x - h) + f(j, x - 2 * h)) / (12 * h);
}

double slope_of(const std::vector<double>& x, const std::vector<double>& y) {
    return fit_power_law(x, y).slope;
}

}  // namespace

TEST_CASE("bessel_i0 values") {
    CHECK(bessel_i0(0.0) == 1.0);
    double thirty = 0.0, term = 1.0;
    for (int k = 0; k < 30; ++k) {
        if (k > 0) term *= 0.25 / (static_cast<double>(k) * k);
        thirty += term;
    }
    CHECK(std::abs(bessel_i0(1.0) - thirty) < 1e-10);
    CHECK(std::abs(bessel_i0(1.0) - 1.2660658777520) < 1e-10);
    CHECK_THROWS_AS(bessel_i0(-1.0), std::domain_error);

    for (double y : {0.5, 3.0, 10.0, 19.9, 20.5, 35.0, 50.0, 120.0}) {
        const double ref = static_cast<double>(i0_series_ld(y));
        CHECK(bessel_i0(y) == doctest::Approx(ref).epsilon(1e-12));
        CHECK(bessel_i0_scaled(y) == doctest::Approx(ref * std::exp(-y)).epsilon(1e-12));
    }
    CHECK(std::isfinite(bessel_i0_scaled(1e5)));
}

TEST_CASE("bessel_i0 large-argument ratio at y = 50") {
    // The ratio to the leading asymptotic term is 1 + 1/(8y) + 9/(128 y^2) + ...,
    // about 1.00253 at y = 50.
    const double ratio = bessel_i0(50.0) * std::sqrt(2.0 * kPi * 50.0) * std::exp(-50.0);
    const double ref = static_cast<double>(i0_series_ld(50.0L) * std::sqrt(2.0L * 3.14159265358979323846L * 50.0L) *
                                           std::exp(-50.0L));
    CHECK(ratio == doctest::Approx(ref).epsilon(1e-12));
    CHECK(std::abs(ratio - (1.0 + 1.0 / 400.0 + 9.0 / (128.0 * 2500.0))) < 1e-6);
}

TEST_CASE("bessel_i0 seam and monotonicity") {
    const double s = bessel_i0_series(kBesselSeriesLimit), a = bessel_i0_asymptotic(kBesselSeriesLimit);
    CHECK(std::abs(s - a) / bessel_i0(kBesselSeriesLimit) <= 1e-9);
    double prev = bessel_i0(0.0);
    for (double y = 0.05; y < 80.0; y += 0.05) {
        const double v = bessel_i0(y);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("lambert_w0") {
    CHECK(lambert_w0(0.0) == 0.0);
    CHECK(lambert_w0(std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(lambert_w0(1.0) - w_bisect(1.0)) < 1e-9);
    CHECK(std::abs(lambert_w0(1.0) - 0.5671432904) < 1e-9);
    CHECK(std::abs(lambert_w0(10.0) - w_bisect(10.0)) < 1e-12);
    CHECK_THROWS_AS(lambert_w0(-0.1), std::domain_error);

    int bad = 0;
    for (int i = 0; i < 1000; ++i) {
        const double z = std::pow(10.0, -8.0 + 16.0 * i / 999.0);
        const double w = lambert_w0(z);
        if (std::abs(w * std::exp(w) - z) / std::max(1.0, z) > 1e-13) ++bad;
    }
    CHECK(bad == 0);
}

TEST_CASE("gaussian derivatives") {
    CHECK(gaussian_derivative_at(0, 0.0) == 1.0);
    for (int j = 1; j <= 3; ++j)
        for (double x : {-3.1, -0.7, 0.0, 0.4, 2.5})
            CHECK(gaussian_derivative_at(j, x) == doctest::Approx(d1(gaussian_derivative_at, j - 1, x)).epsilon(1e-8).scale(1.0));
    CHECK_THROWS_AS(gaussian_derivative_at(4, 0.0), std::invalid_argument);

    const auto g = make_grid(100.0, 4096);
    CHECK(std::abs(moment(gaussian_derivative(1, g), 0)) < 1e-10);
    const auto g2 = gaussian_derivative(2, g);
    CHECK(std::abs(moment(g2, 0)) < 1e-8);
    CHECK(std::abs(moment(g2, 1)) < 1e-8);
}

TEST_CASE("data families") {
    const auto g = make_grid(100.0, 4096);
    const double m0 = 2.0 * std::sqrt(kPi);

    auto d = make_data_family(MomentClass::m0_zero_m1_nonzero, 0.1, g);
    const auto sum = d.f0 + d.f1;
    CHECK(std::abs(moment(sum, 0)) < 1e-8 * lp_norm(sum, 1.0));
    CHECK(moment(sum, 1) == doctest::Approx(-m0).epsilon(1e-8));
    CHECK(d.u0().max_abs() == doctest::Approx(0.1 * d.f0.max_abs()));

    auto d0 = make_data_family(MomentClass::m0_nonzero, 1.0, g);
    CHECK(moment(d0.f0 + d0.f1, 0) == doctest::Approx(m0).epsilon(1e-8));

    auto d2 = make_data_family(MomentClass::m0_m1_zero, 1.0, g);
    CHECK(std::abs(moment(d2.f0 + d2.f1, 1)) < 1e-8);

    auto dz = make_data_family(MomentClass::zero_sum, 1.0, g);
    CHECK((dz.f0 + dz.f1).max_abs() == 0.0);

    auto deg = make_data_family(MomentClass::m0_nonzero, 0.0, g);
    CHECK(deg.degenerate);
    CHECK(deg.u0().max_abs() == 0.0);

    for (auto c : {MomentClass::m0_nonzero, MomentClass::m0_zero_m1_nonzero, MomentClass::m0_m1_zero,
                   MomentClass::zero_sum})
        CHECK(parse_moment_class(to_string(c)) == c);
    CHECK_THROWS_AS(parse_moment_class("M2"), std::invalid_argument);
}

TEST_CASE("predict_lifespan examples") {
    auto p1 = predict_lifespan(1.25, 0.1, MomentClass::m0_zero_m1_nonzero);
    CHECK(p1.regime == LifespanRegime::subcritical_m1);
    CHECK(p1.value == doctest::Approx(std::pow(0.1, -1.0 / 3.0)).epsilon(1e-14));

    auto p3 = predict_lifespan(2.0, 0.1, MomentClass::m0_zero_m1_nonzero);
    CHECK(p3.regime == LifespanRegime::generic);
    CHECK(p3.value == doctest::Approx(1e4).epsilon(1e-12));

    auto p2 = predict_lifespan(1.5, 0.01, MomentClass::m0_zero_m1_nonzero);
    CHECK(p2.regime == LifespanRegime::critical_m1);
    const double w10 = w_bisect(10.0);
    CHECK(p2.value == doctest::Approx(std::pow(0.01, -2.0 / 3.0) * std::exp(2.0 * w10 / 3.0)).epsilon(1e-10));
    CHECK(p2.value == doctest::Approx(69.0).epsilon(2e-3));

    // M0 != 0 falls back to the classical law T_p(c eps).
    CHECK(predict_lifespan(3.0, 0.5, MomentClass::m0_nonzero).value == doctest::Approx(std::exp(4.0)));
    CHECK(predict_lifespan(1.25, 0.1, MomentClass::m0_m1_zero).regime == LifespanRegime::generic);
    CHECK(predict_lifespan(1.25, 0.1, MomentClass::zero_sum).regime == LifespanRegime::generic);

    // Upper constant enters the upper value only.
    auto pc = predict_lifespan(1.25, 0.1, MomentClass::m0_zero_m1_nonzero, {1.0, 2.0});
    CHECK(pc.upper == doctest::Approx(2.0 * pc.value));

    CHECK_THROWS_AS(predict_lifespan(1.0, 0.1, MomentClass::m0_nonzero), std::invalid_argument);
    CHECK_THROWS_AS(predict_lifespan(3.5, 0.1, MomentClass::m0_nonzero), std::invalid_argument);
    CHECK_THROWS_AS(predict_lifespan(2.0, 0.0, MomentClass::m0_nonzero), std::invalid_argument);
}

TEST_CASE("regime exponents meet at p = 3/2") {
    CHECK(lifespan_exponent(1.5 - 1e-3, MomentClass::m0_zero_m1_nonzero) == doctest::Approx(-1.0).epsilon(1e-2));
    CHECK(lifespan_exponent(1.5 + 1e-3, MomentClass::m0_zero_m1_nonzero) == doctest::Approx(-1.0).epsilon(1e-2));
    CHECK(std::isnan(lifespan_exponent(1.5, MomentClass::m0_zero_m1_nonzero)));
    CHECK(lifespan_exponent(2.0, MomentClass::m0_zero_m1_nonzero) == -4.0);
}

TEST_CASE("small-eps ordering: M1 != 0 gives the shortest predicted lifespan") {
    for (double eps : {1e-2, 1e-3, 1e-4}) {
        const double t1 = predict_lifespan(1.25, eps, MomentClass::m0_zero_m1_nonzero).value;
        const double t3 = predict_lifespan(1.25, eps, MomentClass::m0_m1_zero).value;
        CHECK(t1 < t3);
    }
}

TEST_CASE("tilde_T2p root finder") {
    // p = 2: lhs = 2 (sqrt(T+1) - 1), so T = (1 + eps^{-1}/2)^2 - 1 exactly.
    for (double eps : {1e-2, 1e-3}) {
        const double exact = std::pow(1.0 + 0.5 / eps, 2) - 1.0;
        CHECK(tilde_T2p(2.0, eps) == doctest::Approx(exact).epsilon(1e-12));
    }
    std::vector<double> eps, roots;
    for (int i = 0; i <= 8; ++i) {
        eps.push_back(std::pow(10.0, -4.0 + 0.25 * i));
        roots.push_back(tilde_T2p(2.0, eps.back()));
    }
    CHECK(slope_of(eps, roots) == doctest::Approx(-2.0).epsilon(0.02));

    // p = 3/2: sqrt(T+1) log(T+1) = 10 gives T + 1 = exp(2 W(5)).
    const double r = tilde_T2p(1.5, 0.01);
    CHECK(r + 1.0 == doctest::Approx(std::exp(2.0 * w_bisect(5.0))).epsilon(1e-10));
    CHECK(std::sqrt(r + 1.0) * std::log(r + 1.0) == doctest::Approx(10.0).epsilon(1e-12));

    // At p = 2 and eps = 1 the root is still (3/2)^2 - 1 > 1; larger eps has none.
    CHECK(tilde_T2p(2.0, 1.0) == doctest::Approx(1.25).epsilon(1e-12));
    CHECK_THROWS_AS(tilde_T2p(2.0, 2.0), HorizonError);
    CHECK_THROWS_AS(tilde_T2p(1.5, 2.0), HorizonError);
    CHECK_THROWS_AS(tilde_T2p(2.0, 5.0), HorizonError);
    CHECK_THROWS_AS(tilde_T2p(0.9, 0.1), std::invalid_argument);
}

TEST_CASE("tilde_T2p agrees with the closed forms in log-log slope") {
    struct Case {
        double p, lo;
    };
    // The subcritical closed form is leading order only; its slope is reached
    // for very small eps when p is close to 1.
    for (Case c : {Case{1.2, -30.0}, Case{1.5, -6.0}, Case{2.0, -6.0}}) {
        std::vector<double> eps, root, closed;
        for (int i = 0; i <= 8; ++i) {
            eps.push_back(std::pow(10.0, c.lo + 0.25 * i));
            root.push_back(tilde_T2p(c.p, eps.back()));
            closed.push_back(tilde_T2p_closed_form(c.p, eps.back()));
        }
        const double s_root = slope_of(eps, root), s_closed = slope_of(eps, closed);
        CHECK(std::abs(s_root - s_closed) <= 0.02 * std::abs(s_closed));
    }
}

TEST_CASE("fit_power_law") {
    std::vector<double> x{1, 2, 4, 8, 16}, y;
    for (double v : x) y.push_back(3.0 * std::pow(v, -1.5));
    auto f = fit_power_law(x, y);
    CHECK(f.slope == doctest::Approx(-1.5).epsilon(1e-13));
    CHECK(std::exp(f.intercept) == doctest::Approx(3.0).epsilon(1e-13));
    CHECK(f.r_squared == doctest::Approx(1.0));
    CHECK(f.accepted);
    CHECK(f.predict(32.0) == doctest::Approx(3.0 * std::pow(32.0, -1.5)));

    std::mt19937 rng(3);
    std::normal_distribution<double> noise(0.0, 0.5);
    std::vector<double> yn;
    for (double v : x) yn.push_back(std::exp(noise(rng)) * v);
    auto fn = fit_power_law(x, yn);
    CHECK(fn.r_squared >= 0.0);
    CHECK(fn.r_squared <= 1.0);

    std::vector<double> one{1.0};
    CHECK_THROWS_AS(fit_power_law(one, one), std::invalid_argument);
    std::vector<double> pos{1.0, 2.0}, neg{1.0, -1.0};
    CHECK_THROWS_AS(fit_power_law(pos, neg), std::invalid_argument);
}

TEST_CASE("fit_lambert_law recovers synthetic constants") {
    const double A = 2.5, B = 0.7;
    std::vector<double> eps, T;
    for (double e : {0.4, 0.2, 0.1, 0.05, 0.02}) {
        eps.push_back(e);
        T.push_back(A * std::pow(e, -2.0 / 3.0) * std::exp(2.0 * w_bisect(B / std::sqrt(e)) / 3.0));
    }
    auto f = fit_lambert_law(eps, T);
    CHECK(f.A == doctest::Approx(A).epsilon(1e-4));
    CHECK(f.B == doctest::Approx(B).epsilon(1e-4));
    CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(f.predict(0.01) ==
          doctest::Approx(A * std::pow(0.01, -2.0 / 3.0) * std::exp(2.0 * w_bisect(B * 10.0) / 3.0)).epsilon(1e-4));
}

TEST_CASE("gauss_legendre integrates polynomials exactly") {
    auto r = gauss_legendre(8, 0.0, 2.0);
    double s = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], 15);
    CHECK(s == doctest::Approx(std::pow(2.0, 16) / 16.0).epsilon(1e-13));
}
