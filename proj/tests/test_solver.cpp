#include "dwlab/data_family.hpp"
#include "dwlab/duhamel.hpp"
#include "dwlab/error.hpp"
#include "dwlab/propagators.hpp"
#include "dwlab/solver.hpp"
#include "dwlab/special_functions.hpp"

#include "ode_oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace dwlab;

namespace {

GridFunction constant(const GridSpec& g, double a) {
    return GridFunction::sample(g, [a](double) { return a; });
}

SolverControl torus_control() {
    SolverControl c;
    c.check_boundary = false;
    return c;
}

}  // namespace

TEST_CASE("oracle sanity: blow-up time of the scalar equation") {
    // u' = u^2 without damping has T = 1/a; the damped equation must be slower.
    const double T = oracle::ode_blowup_time(2.0, 1.0);
    CHECK(T > 1.0);
    CHECK(T < 10.0);
    const auto near = oracle::ode_state(2.0, 1.0, T * 0.999);
    CHECK(near[0] > 1e3);
}

TEST_CASE("zero data stays zero") {
    const auto g = make_grid(32.0, 256);
    auto s = initial_state(GridFunction::zeros(g), GridFunction::zeros(g), 0.1);
    for (int i = 0; i < 5; ++i) {
        auto next = step(s, 1.5, 0.1);
        REQUIRE(next);
        s = *next;
    }
    CHECK(s.u.max_abs() == 0.0);
    CHECK(s.v.max_abs() == 0.0);
    CHECK(s.t == doctest::Approx(0.5));
}

TEST_CASE("linear step reproduces the propagator pair") {
    const auto g = make_grid(40.0, 512);
    const auto u0 = gaussian_derivative(0, g), u1 = gaussian_derivative(1, g);
    const auto s = step(initial_state(u0, u1, 0.2), 2.0, 0.2, true);
    REQUIRE(s);
    const auto [u, v] = propagate_linear(0.2, u0, u1);
    CHECK((s->u - u).max_abs() <= 1e-12);
    CHECK((s->v - v).max_abs() <= 1e-12);
    const auto via_s = apply_S(0.2, u0 + u1) + apply_dtS(0.2, u0);
    CHECK((s->u - via_s).max_abs() <= 1e-12);
}

TEST_CASE("torus constant follows the scalar ODE") {
    const auto g = make_grid(16.0, 64);
    const double a = 1.0, p = 2.0;
    const double T = oracle::ode_blowup_time(p, a);
    std::vector<double> times;
    for (int i = 1; i <= 8; ++i) times.push_back(0.5 * T * i / 8.0);
    SolverControl c = torus_control();
    c.dt_max = 0.005;
    c.adaptive = false;
    const auto tr = integrate_to(constant(g, a), GridFunction::zeros(g), p, times, c);
    for (std::size_t i = 1; i < tr.size(); ++i) {
        const auto ref = oracle::ode_state(p, a, tr.times()[i]);
        CHECK(std::abs(tr.u(i)[7] - ref[0]) <= 1e-8);
        CHECK(std::abs(tr.ut(i)[7] - ref[1]) <= 1e-8);
        CHECK(tr.u(i).max_abs() - tr.u(i)[0] <= 1e-12);
    }
}

TEST_CASE("torus blow-up bracket matches the ODE blow-up time") {
    const auto g = make_grid(16.0, 64);
    for (double a : {1.0, 0.5}) {
        const double T = oracle::ode_blowup_time(2.0, a);
        const auto r = solve_lifespan(constant(g, a), GridFunction::zeros(g), 2.0, a, 100.0, torus_control());
        CHECK(r.estimate.status == LifespanStatus::blown_up);
        CHECK(r.estimate.T_low <= r.estimate.T_high);
        CHECK(std::abs(r.estimate.T_high - T) <= 0.01 * T);
        CHECK(r.estimate.T_low <= T * 1.001);
    }
}

TEST_CASE("eps = 0 survives the horizon") {
    const auto g = make_grid(64.0, 512);
    const auto d = make_data_family(MomentClass::m0_nonzero, 0.0, g);
    const auto r = solve_lifespan(d, 2.0, 20.0);
    CHECK(r.estimate.status == LifespanStatus::survived_horizon);
    CHECK(r.estimate.T_low == doctest::Approx(20.0));
}

TEST_CASE("lifespan grows as eps shrinks, with a tight bracket") {
    const auto g = make_grid(128.0, 4096);
    double prev = 0.0;
    for (double eps : {0.4, 0.2, 0.1}) {
        const auto r = solve_lifespan(make_data_family(MomentClass::m0_zero_m1_nonzero, eps, g), 1.25, 5000.0);
        REQUIRE(r.estimate.status == LifespanStatus::blown_up);
        const auto& e = r.estimate;
        CHECK(e.T_low <= e.T_high);
        CHECK(e.T_high - e.T_low <= 0.01 * e.T_high);
        CHECK(e.T_high > prev);
        CHECK(e.grid == g);
        prev = e.T_high;
    }
}

TEST_CASE("blow-up time is insensitive to threshold and resolution") {
    const auto g = make_grid(64.0, 1024);
    const auto d = make_data_family(MomentClass::m0_nonzero, 0.5, g);
    SolverControl lo, hi;
    lo.blowup_threshold = 1e4;
    hi.blowup_threshold = 1e6;
    const auto e_lo = solve_lifespan(d, 2.0, 500.0, lo).estimate;
    const auto e_hi = solve_lifespan(d, 2.0, 500.0, hi).estimate;
    REQUIRE(e_lo.status == LifespanStatus::blown_up);
    REQUIRE(e_hi.status == LifespanStatus::blown_up);
    const double t_lo = e_lo.T_high;
    const double t_hi = e_hi.T_high;
    CHECK(std::abs(t_lo - t_hi) <= 0.01 * t_lo);

    const auto fine = make_grid(64.0, 2048);
    SolverControl half;
    half.dt_max *= 0.5;
    half.dt_initial *= 0.5;
    const auto e_fine = solve_lifespan(make_data_family(MomentClass::m0_nonzero, 0.5, fine), 2.0, 500.0, half).estimate;
    REQUIRE(e_fine.status == LifespanStatus::blown_up);
    const double t_fine = e_fine.T_high;
    CHECK(std::abs(t_fine - t_lo) <= 0.02 * t_lo);
}

TEST_CASE("comparison: larger nonnegative data blows up no later") {
    const auto g = make_grid(128.0, 2048);
    const auto base = gaussian_derivative(0, g);
    const auto zero = GridFunction::zeros(g);
    double prev = 1e300;
    for (double a : {0.5, 0.7, 1.0}) {
        const auto r = solve_lifespan(a * base, zero, 2.0, a, 1000.0);
        REQUIRE(r.estimate.status == LifespanStatus::blown_up);
        CHECK(r.estimate.T_high <= prev);
        prev = r.estimate.T_high;
    }
    // A wider bump dominating the narrow one pointwise.
    const auto wide = GridFunction::sample(g, [](double x) { return 0.5 * std::exp(-x * x / 8.0); });
    const auto rw = solve_lifespan(wide, zero, 2.0, 0.5, 1000.0);
    const auto rn = solve_lifespan(0.5 * base, zero, 2.0, 0.5, 1000.0);
    REQUIRE(rw.estimate.status == LifespanStatus::blown_up);
    CHECK(rw.estimate.T_high <= rn.estimate.T_high);
}

TEST_CASE("linear regime: L2 norm does not grow after t = 1") {
    const auto g = make_grid(128.0, 2048);
    SolverControl c;
    c.linear_only = true;
    c.adaptive = false;
    c.dt_max = 0.1;
    std::vector<double> times;
    for (int i = 1; i <= 60; ++i) times.push_back(0.5 * i);
    for (int k = 0; k < 3; ++k) {
        const auto tr = integrate_to(gaussian_derivative(k, g), GridFunction::zeros(g), 2.0, times, c);
        double prev = 1e300;
        for (std::size_t i = 0; i < tr.size(); ++i) {
            if (tr.times()[i] < 1.0) continue;
            const double n = lp_norm(tr.u(i), 2.0);
            CHECK(n <= prev + 1e-10);
            prev = n;
        }
    }
}

TEST_CASE("truncation abort when the domain is too small") {
    const auto g = make_grid(12.0, 256);
    const auto r = solve_lifespan(make_data_family(MomentClass::m0_zero_m1_nonzero, 0.1, g), 1.25, 200.0);
    CHECK(r.estimate.status == LifespanStatus::truncation_abort);
}

TEST_CASE("Duhamel residual") {
    const auto g = make_grid(64.0, 1024);
    const GridFunction u0 = 0.5 * gaussian_derivative(0, g);
    const GridFunction u1 = 0.2 * gaussian_derivative(1, g);
    std::vector<double> cps{1.0, 2.0};
    const auto ts = duhamel_sample_times(cps);
    CHECK(ts.size() == 2 * kMinDuhamelNodes + 2);

    SolverControl lin;
    lin.linear_only = true;
    const auto tl = integrate_to(u0, u1, 2.0, ts, lin);
    CHECK(duhamel_residual(tl, 2.0, cps, kMinDuhamelNodes, true) <= 1e-10);

    const auto tn = integrate_to(u0, u1, 2.0, ts);
    for (std::size_t i = 0; i < tn.size(); ++i) CHECK(tn.u(i).max_abs() <= 10 * 0.5);
    CHECK(duhamel_residual(tn, 2.0, cps) <= 1e-4);

    // Refinement: quartering the step cuts the residual by more than 8.
    std::vector<double> far{16.0};
    const auto tf = duhamel_sample_times(far);
    SolverControl coarse, fine;
    coarse.adaptive = fine.adaptive = false;
    coarse.dt_max = 0.4;
    fine.dt_max = 0.1;
    const GridFunction small = 0.3 * gaussian_derivative(0, g);
    const double rc = duhamel_residual(integrate_to(small, GridFunction::zeros(g), 3.0, tf, coarse), 3.0, far);
    const double rf = duhamel_residual(integrate_to(small, GridFunction::zeros(g), 3.0, tf, fine), 3.0, far);
    CHECK(rc / rf >= 8.0);

    const auto flat = integrate_to(constant(g, 0.1), GridFunction::zeros(g), 2.0, ts, torus_control());
    CHECK_THROWS_AS(duhamel_residual(flat, 2.0, cps), TruncationError);
    CHECK_THROWS_AS(duhamel_residual(tn, 2.0, cps, 32), std::invalid_argument);
    std::vector<double> missing{1.5};
    CHECK_THROWS_AS(duhamel_residual(tn, 2.0, missing), std::invalid_argument);
    std::vector<double> sparse_times{1.0, 2.0};
    const auto sparse = integrate_to(u0, u1, 2.0, sparse_times);
    CHECK_THROWS_AS(duhamel_residual(sparse, 2.0, cps), std::invalid_argument);
}

TEST_CASE("integrate_to preconditions") {
    const auto g = make_grid(32.0, 256);
    const auto z = GridFunction::zeros(g);
    std::vector<double> bad{1.0, 0.5};
    CHECK_THROWS_AS(integrate_to(z, z, 2.0, bad), std::invalid_argument);
    std::vector<double> ok{0.5, 1.0};
    const auto tr = integrate_to(z, z, 2.0, ok);
    CHECK(tr.size() == 3);
    CHECK(tr.times()[0] == 0.0);
    CHECK(tr.times()[2] == 1.0);
}

TEST_CASE("corridor functionals") {
    const auto g = make_grid(32.0, 256);
    SolverState s = initial_state(GridFunction::zeros(g), GridFunction::zeros(g), 0.1);
    s.t = 16.0;
    auto f = track_functionals(s);
    CHECK(f.U == 0.0);
    CHECK(f.w_plus == 0.0);
    CHECK(f.w_minus == 0.0);

    s.u = constant(g, 1.0);
    f = track_functionals(s);
    CHECK(f.U == doctest::Approx(4.0));
    CHECK(f.w_plus == doctest::Approx(16.0));
    CHECK(f.w_minus == doctest::Approx(16.0));

    s.t = 3.0;
    CHECK_THROWS_AS(track_functionals(s), std::domain_error);
}

TEST_CASE("corridor signs follow the first moment") {
    // Data eps (g', 0): M1 = -2 sqrt(pi) eps < 0. The heat profile of g' is
    // negative on x > 0 and positive on x < 0.
    const auto g = make_grid(256.0, 4096);
    const auto d = make_data_family(MomentClass::m0_zero_m1_nonzero, 0.1, g);
    const double m1 = moment(d.u0() + d.u1(), 1);
    REQUIRE(m1 < 0.0);
    const auto [u, v] = propagate_linear(100.0, d.u0(), d.u1());
    SolverState s = initial_state(u, v, 0.1);
    s.t = 100.0;
    const auto f = track_functionals(s);
    CHECK(std::signbit(f.w_plus) == std::signbit(m1));
    CHECK(std::signbit(f.w_minus) != std::signbit(m1));
}

TEST_CASE("region_infimum refines sparse regions") {
    const auto g = make_grid(8.0, 32);  // h = 0.5
    const auto u = GridFunction::sample(g, [](double x) { return (x - 0.3) * (x - 0.3); });
    const double node_min = 0.04;  // at x = 0.5
    const double inf = region_infimum(u, 0.0, 1.0, false);
    CHECK(inf < node_min);
    CHECK(inf > -1e-3);
    CHECK_THROWS_AS(region_infimum(u, 1.0, 1.0, true), std::invalid_argument);
}

TEST_CASE("functional trace CSV") {
    FunctionalTrace tr{{4.0, 5.0}, {1.0, 2.0}, {3.0, 4.0}, {5.0, 6.0}};
    std::ostringstream os;
    write_csv(os, tr);
    CHECK(os.str().rfind("t,U,w_plus,w_minus\n4,1,3,5\n", 0) == 0);
}

TEST_CASE("recorded functionals start at t0 and stay aligned") {
    const auto g = make_grid(128.0, 2048);
    const auto r = solve_lifespan(make_data_family(MomentClass::m0_nonzero, 0.3, g), 2.0, 200.0);
    REQUIRE(!r.trace.times.empty());
    CHECK(r.trace.times.front() >= kCorridorStart);
    CHECK(r.trace.U.size() == r.trace.times.size());
    CHECK(r.trace.w_plus.size() == r.trace.times.size());
    CHECK(r.trace.w_minus.size() == r.trace.times.size());
}
