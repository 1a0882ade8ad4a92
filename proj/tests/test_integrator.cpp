#include <doctest.h>

#include <array>
#include <cmath>
#include <complex>
#include <limits>

#include "dhw/dynamics.hpp"
#include "dhw/integrator.hpp"
#include "dhw/observables.hpp"

using dhw::IntegrationError;
using dhw::IntegratorConfig;
using cplx = std::complex<double>;
using Osc = std::array<cplx, 1>;

namespace {

IntegratorConfig tol(double rtol, double atol = 1e-14) {
    IntegratorConfig c;
    c.rel_tol = rtol;
    c.abs_tol = atol;
    return c;
}

// y' = i w y on [0, t1]
double oscillator_error(double w, double t1, const IntegratorConfig& cfg) {
    auto rhs = [w](double, const Osc& y) { return Osc{cplx{0.0, w} * y[0]}; };
    const auto sol = dhw::integrate(rhs, Osc{1.0}, 0.0, t1, cfg);
    return std::abs(sol.y[0] - std::exp(cplx{0.0, w * t1}));
}

}  // namespace

TEST_CASE("zero right-hand side leaves the state unchanged") {
    auto rhs = [](double, const std::array<double, 3>&) { return std::array<double, 3>{}; };
    const std::array<double, 3> y0{1.5, -2.25, 1e-300};
    const auto sol = dhw::integrate(rhs, y0, 0.0, 10.0, IntegratorConfig{});
    CHECK(sol.y == y0);
}

TEST_CASE("oscillator matches the closed-form solution") {
    for (double rtol : {1e-6, 1e-8, 1e-10}) {
        CAPTURE(rtol);
        CHECK(oscillator_error(1.0, 20.0, tol(rtol)) < 10 * rtol);
        CHECK(oscillator_error(3.7, 5.0, tol(rtol)) < 10 * rtol);
    }
}

TEST_CASE("fixed-step error falls with the fifth power of the step") {
    const double w = 2.0, t1 = 10.0;
    auto rhs = [w](double, const Osc& y) { return Osc{cplx{0.0, w} * y[0]}; };
    const cplx exact = std::exp(cplx{0.0, w * t1});
    double prev = 0.0;
    for (std::size_t n : {100, 200, 400}) {
        const double err = std::abs(dhw::integrate_fixed_step(rhs, Osc{1.0}, 0.0, t1, n)[0] - exact);
        if (prev > 0.0) {
            CAPTURE(n);
            CHECK(prev / err > 16.0);
        }
        prev = err;
    }
}

TEST_CASE("tightening the tolerance sixteenfold cuts the error at least fourfold") {
    for (double rtol : {1e-6, 1e-7, 1e-8}) {
        const double coarse = oscillator_error(2.0, 30.0, tol(rtol));
        const double fine = oscillator_error(2.0, 30.0, tol(rtol / 16));
        CAPTURE(rtol);
        CHECK(coarse / fine >= 4.0);
    }
}

TEST_CASE("zero field keeps the two-level system in the vacuum") {
    const dhw::PulseConfig cfg{0.0, 1.0, 3};
    const IntegratorConfig icfg;
    auto rhs = [&](double t, const dhw::TwoLevelState& s) { return dhw::two_level_rhs(s, {0.3, 0.4}, cfg, t); };
    const auto sol = dhw::integrate(rhs, dhw::TwoLevelState::vacuum(), 0.0, cfg.duration(), icfg);
    CHECK(std::abs(sol.y.c2()) <= icfg.abs_tol);
    CHECK(std::abs(std::norm(sol.y.c1()) - 1.0) < 100 * icfg.rel_tol);
}

TEST_CASE("norm drift on a unitary system stays within 100 rtol") {
    const dhw::PulseConfig cfg{0.5, 1.0, 3};
    for (double rtol : {1e-8, 1e-10}) {
        const IntegratorConfig icfg = tol(rtol, 1e-12);
        double drift = 0.0;
        auto rhs = [&](double t, const dhw::TwoLevelState& s) { return dhw::two_level_rhs(s, {0.2, 0.6}, cfg, t); };
        auto watch = [&](double, const dhw::TwoLevelState& s) { drift = std::max(drift, std::abs(s.norm2() - 1.0)); };
        dhw::integrate(rhs, dhw::TwoLevelState::vacuum(), 0.0, cfg.duration(), icfg, watch);
        CAPTURE(rtol);
        CHECK(drift < 100 * rtol);
    }
}

TEST_CASE("dense output hits equally spaced times including both ends") {
    IntegratorConfig cfg = tol(1e-10);
    cfg.dense_samples = 11;
    const double w = 1.3;
    auto rhs = [w](double, const Osc& y) { return Osc{cplx{0.0, w} * y[0]}; };
    const auto sol = dhw::integrate(rhs, Osc{1.0}, 1.0, 6.0, cfg);
    REQUIRE(sol.dense);
    REQUIRE(sol.dense->t.size() == 11);
    REQUIRE(sol.dense->y.size() == 11);
    CHECK(sol.dense->t.front() == 1.0);
    CHECK(sol.dense->t.back() == 6.0);
    CHECK(sol.dense->y.back()[0] == sol.y[0]);
    for (std::size_t k = 0; k < 11; ++k) {
        CHECK(sol.dense->t[k] == doctest::Approx(1.0 + 0.5 * k));
        CHECK(std::abs(sol.dense->y[k][0] - std::exp(cplx{0.0, w * (sol.dense->t[k] - 1.0)})) < 1e-8);
    }
}

TEST_CASE("observer sees the start and every accepted step") {
    std::size_t calls = 0;
    double last_t = -1.0;
    auto rhs = [](double, const Osc& y) { return Osc{cplx{0.0, 1.0} * y[0]}; };
    const auto sol = dhw::integrate(rhs, Osc{1.0}, 0.0, 3.0, tol(1e-8), [&](double t, const Osc&) {
        CHECK(t > last_t);
        last_t = t;
        ++calls;
    });
    CHECK(calls == sol.stats.accepted + 1);
    CHECK(last_t == 3.0);
}

TEST_CASE("max_step bounds every step") {
    IntegratorConfig cfg = tol(1e-6);
    cfg.max_step = 0.01;
    double prev = 0.0, widest = 0.0;
    auto rhs = [](double, const Osc& y) { return Osc{cplx{0.0, 1.0} * y[0]}; };
    dhw::integrate(rhs, Osc{1.0}, 0.0, 1.0, cfg, [&](double t, const Osc&) {
        widest = std::max(widest, t - prev);
        prev = t;
    });
    CHECK(widest <= 0.01 * (1 + 1e-12));
}

TEST_CASE("integration is deterministic") {
    const dhw::PulseConfig cfg{0.1, 1.0, 3};
    const IntegratorConfig icfg;
    const auto a = dhw::solve_two_level({0.37, -0.81}, cfg, icfg);
    const auto b = dhw::solve_two_level({0.37, -0.81}, cfg, icfg);
    CHECK(a == b);
}

TEST_CASE("failures are reported with their kind") {
    auto blowup = [](double t, const Osc&) {
        return Osc{t > 0.5 ? cplx{std::numeric_limits<double>::quiet_NaN(), 0.0} : cplx{1.0, 0.0}};
    };
    try {
        dhw::integrate(blowup, Osc{1.0}, 0.0, 1.0, tol(1e-8));
        FAIL("expected an IntegrationError");
    } catch (const IntegrationError& e) {
        CHECK(e.kind() == IntegrationError::Kind::non_finite);
    }

    auto ok = [](double, const Osc& y) { return y; };
    try {
        dhw::integrate(ok, Osc{1.0}, 1.0, 1.0, tol(1e-8));
        FAIL("expected an IntegrationError");
    } catch (const IntegrationError& e) {
        CHECK(e.kind() == IntegrationError::Kind::bad_interval);
    }

    IntegratorConfig few = tol(1e-10);
    few.max_steps = 5;
    try {
        dhw::integrate([](double, const Osc& y) { return Osc{cplx{0.0, 50.0} * y[0]}; }, Osc{1.0}, 0.0, 10.0, few);
        FAIL("expected an IntegrationError");
    } catch (const IntegrationError& e) {
        CHECK(e.kind() == IntegrationError::Kind::too_many_steps);
    }

    // y' = y^2 from y = 1 blows up at t = 1
    try {
        dhw::integrate([](double, const std::array<double, 1>& y) { return std::array<double, 1>{y[0] * y[0]}; },
                       std::array<double, 1>{1.0}, 0.0, 2.0, tol(1e-8));
        FAIL("expected an IntegrationError");
    } catch (const IntegrationError& e) {
        CHECK((e.kind() == IntegrationError::Kind::step_underflow || e.kind() == IntegrationError::Kind::non_finite));
        CHECK(e.time() == doctest::Approx(1.0).epsilon(1e-3));
    }
}

TEST_CASE("tolerance bounds are enforced") {
    CHECK_THROWS_AS(tol(0.0).validate(), std::invalid_argument);
    CHECK_THROWS_AS(tol(1e-3).validate(), std::invalid_argument);
    CHECK_THROWS_AS(tol(1e-8, 1e-5).validate(), std::invalid_argument);
    CHECK_THROWS_AS(tol(1e-8, 0.0).validate(), std::invalid_argument);
    CHECK_NOTHROW(tol(1e-4, 1e-6).validate());
    IntegratorConfig c;
    c.dense_samples = 1;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}
