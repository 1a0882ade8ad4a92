// integrator.hpp - embedded Dormand-Prince 5(4) Runge-Kutta with step-size
// control and the standard fourth-order continuous extension.
//
// States are fixed-size containers exposing size() and operator[] with
// double or std::complex<double> elements (std::array and the domain types
// in dynamics.hpp). The right-hand side is called as rhs(t, y) -> State.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dhw {

struct IntegratorConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = std::numeric_limits<double>::infinity();
    std::optional<std::size_t> dense_samples;  // equally spaced outputs incl. both ends
    std::size_t max_steps = 10'000'000;

    /// Throws std::invalid_argument when a tolerance is outside
    /// (0, 1e-4] (relative) or (0, 1e-6] (absolute), or max_step <= 0.
    void validate() const {
        if (!(rel_tol > 0.0 && rel_tol <= 1e-4))
            throw std::invalid_argument("integrator: rel_tol must lie in (0, 1e-4]");
        if (!(abs_tol > 0.0 && abs_tol <= 1e-6))
            throw std::invalid_argument("integrator: abs_tol must lie in (0, 1e-6]");
        if (!(max_step > 0.0))
            throw std::invalid_argument("integrator: max_step must be positive");
        if (dense_samples && *dense_samples < 2)
            throw std::invalid_argument("integrator: dense_samples needs at least 2 points");
    }
};

class IntegrationError : public std::runtime_error {
public:
    enum class Kind { step_underflow, non_finite, too_many_steps, bad_interval };

    IntegrationError(Kind kind, double t, const std::string& what)
        : std::runtime_error(what), kind_(kind), t_(t) {}

    Kind kind() const { return kind_; }
    double time() const { return t_; }

private:
    Kind kind_;
    double t_;
};

struct IntegrationStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t rhs_calls = 0;
};

template <class State>
struct Trajectory {
    std::vector<double> t;
    std::vector<State> y;
};

template <class State>
struct Solution {
    State y;
    std::optional<Trajectory<State>> dense;
    IntegrationStats stats;
};

/// Observer that does nothing; the default for integrate().
struct NoObserver {
    template <class State>
    void operator()(double, const State&) const {}
};

namespace detail {

// Dormand & Prince (1980), with Hairer's dense-output coefficients.
namespace dp5 {
inline constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
inline constexpr double a21 = 1.0 / 5.0;
inline constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
inline constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
inline constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                        a54 = -212.0 / 729.0;
inline constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                        a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
inline constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                        a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
// fifth-order minus embedded fourth-order weights
inline constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                        e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
inline constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                        d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                        d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
}  // namespace dp5

template <class T>
inline bool finite(const T& x) {
    if constexpr (std::is_same_v<T, std::complex<double>>)
        return std::isfinite(x.real()) && std::isfinite(x.imag());
    else
        return std::isfinite(x);
}

template <class State>
inline bool all_finite(const State& y) {
    for (std::size_t i = 0; i < y.size(); ++i)
        if (!finite(y[i])) return false;
    return true;
}

// y + h * sum_j w_j k_j, written out per stage count to keep the inner loops flat
template <class State>
inline State axpy(const State& y, double h, double w1, const State& k1) {
    State r = y;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += h * (w1 * k1[i]);
    return r;
}
template <class State>
inline State axpy(const State& y, double h, double w1, const State& k1, double w2, const State& k2) {
    State r = y;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += h * (w1 * k1[i] + w2 * k2[i]);
    return r;
}
template <class State>
inline State axpy(const State& y, double h, double w1, const State& k1, double w2, const State& k2,
                  double w3, const State& k3) {
    State r = y;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += h * (w1 * k1[i] + w2 * k2[i] + w3 * k3[i]);
    return r;
}
template <class State>
inline State axpy(const State& y, double h, double w1, const State& k1, double w2, const State& k2,
                  double w3, const State& k3, double w4, const State& k4) {
    State r = y;
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] += h * (w1 * k1[i] + w2 * k2[i] + w3 * k3[i] + w4 * k4[i]);
    return r;
}
template <class State>
inline State axpy(const State& y, double h, double w1, const State& k1, double w2, const State& k2,
                  double w3, const State& k3, double w4, const State& k4, double w5, const State& k5) {
    State r = y;
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] += h * (w1 * k1[i] + w2 * k2[i] + w3 * k3[i] + w4 * k4[i] + w5 * k5[i]);
    return r;
}

template <class State>
struct Step {
    State y_new;
    State k7;  // rhs at the new point (first-same-as-last)
    State k[6];
};

template <class State, class Rhs>
inline Step<State> dp5_step(Rhs& rhs, double t, const State& y, const State& k1, double h,
                            IntegrationStats& stats) {
    using namespace dp5;
    Step<State> s;
    s.k[0] = k1;
    s.k[1] = rhs(t + c2 * h, axpy(y, h, a21, k1));
    s.k[2] = rhs(t + c3 * h, axpy(y, h, a31, k1, a32, s.k[1]));
    s.k[3] = rhs(t + c4 * h, axpy(y, h, a41, k1, a42, s.k[1], a43, s.k[2]));
    s.k[4] = rhs(t + c5 * h, axpy(y, h, a51, k1, a52, s.k[1], a53, s.k[2], a54, s.k[3]));
    s.k[5] = rhs(t + h, axpy(y, h, a61, k1, a62, s.k[1], a63, s.k[2], a64, s.k[3], a65, s.k[4]));
    s.y_new = axpy(y, h, a71, k1, a73, s.k[2], a74, s.k[3], a75, s.k[4], a76, s.k[5]);
    s.k7 = rhs(t + h, s.y_new);
    stats.rhs_calls += 6;
    return s;
}

// Hairer's continuous extension, theta in [0, 1]
template <class State>
inline State dense_eval(const State& y0, const Step<State>& s, double h, double theta) {
    using namespace dp5;
    State r = y0;
    const double th1 = 1.0 - theta;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const auto dy = s.y_new[i] - y0[i];
        const auto bspl = h * s.k[0][i] - dy;
        const auto r4 = dy - h * s.k7[i] - bspl;
        const auto r5 = h * (d1 * s.k[0][i] + d3 * s.k[2][i] + d4 * s.k[3][i] + d5 * s.k[4][i] +
                             d6 * s.k[5][i] + d7 * s.k7[i]);
        r[i] = y0[i] + theta * (dy + th1 * (bspl + theta * (r4 + th1 * r5)));
    }
    return r;
}

template <class State>
inline double error_norm(const State& y, const State& y_new, const Step<State>& s, double h,
                         const IntegratorConfig& cfg) {
    using namespace dp5;
    double acc = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const auto err = h * (e1 * s.k[0][i] + e3 * s.k[2][i] + e4 * s.k[3][i] + e5 * s.k[4][i] +
                              e6 * s.k[5][i] + e7 * s.k7[i]);
        const double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
        const double q = std::abs(err) / sc;
        acc += q * q;
    }
    return std::sqrt(acc / static_cast<double>(y.size()));
}

template <class State>
inline double scaled_norm(const State& v, const State& y, const IntegratorConfig& cfg) {
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double q = std::abs(v[i]) / (cfg.abs_tol + cfg.rel_tol * std::abs(y[i]));
        acc += q * q;
    }
    return std::sqrt(acc / static_cast<double>(v.size()));
}

template <class State, class Rhs>
inline State checked_rhs(Rhs& rhs, double t, const State& y) {
    State k = rhs(t, y);
    if (!all_finite(k))
        throw IntegrationError(IntegrationError::Kind::non_finite, t,
                               "integrator: non-finite right-hand side at t=" + std::to_string(t));
    return k;
}

}  // namespace detail

/// Integrates y' = rhs(t, y) from t0 to t1 (t1 > t0) with local error control.
/// The observer is called once at t0 and after every accepted step with the
/// new (t, y). Throws IntegrationError on step underflow, non-finite values or
/// when cfg.max_steps is exceeded. Deterministic for fixed inputs.
template <class State, class Rhs, class Observer = NoObserver>
Solution<State> integrate(Rhs&& rhs, const State& y0, double t0, double t1,
                          const IntegratorConfig& cfg, Observer&& observer = {}) {
    using detail::Step;
    cfg.validate();
    if (!(t1 > t0) || !std::isfinite(t0) || !std::isfinite(t1))
        throw IntegrationError(IntegrationError::Kind::bad_interval, t0,
                               "integrator: need finite t1 > t0");
    if (!detail::all_finite(y0))
        throw IntegrationError(IntegrationError::Kind::non_finite, t0,
                               "integrator: non-finite initial state");

    auto checked = [&rhs](double t, const State& y) { return detail::checked_rhs(rhs, t, y); };

    Solution<State> sol;
    IntegrationStats& stats = sol.stats;

    std::vector<double> sample_times;
    std::size_t next_sample = 0;
    if (cfg.dense_samples) {
        const std::size_t n = *cfg.dense_samples;
        sample_times.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            sample_times[i] = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n - 1);
        sample_times.back() = t1;
        sol.dense.emplace();
        sol.dense->t = sample_times;
        sol.dense->y.reserve(n);
        sol.dense->y.push_back(y0);
        next_sample = 1;
    }

    State y = y0;
    double t = t0;
    State k1 = checked(t, y);
    ++stats.rhs_calls;
    observer(t, y);

    const double span = t1 - t0;
    const double h_cap = std::min(cfg.max_step, span);

    // initial step (Hairer, Norsett & Wanner, II.4)
    double h;
    {
        const double d0 = detail::scaled_norm(y, y, cfg);
        const double d1 = detail::scaled_norm(k1, y, cfg);
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h0 = std::min(h0, h_cap);
        const State y1 = detail::axpy(y, h0, 1.0, k1);
        const State k2 = checked(t + h0, y1);
        ++stats.rhs_calls;
        State diff = k2;
        for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= k1[i];
        const double d2 = detail::scaled_norm(diff, y, cfg) / h0;
        const double dm = std::max(d1, d2);
        const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
        h = std::min({100.0 * h0, h1, h_cap});
    }

    constexpr double safety = 0.9, fac_min = 0.2, fac_max = 10.0;
    bool last_rejected = false;
    std::size_t steps = 0;

    while (t < t1) {
        if (++steps > cfg.max_steps)
            throw IntegrationError(IntegrationError::Kind::too_many_steps, t,
                                   "integrator: exceeded max_steps at t=" + std::to_string(t));
        bool final_step = false;
        if (t + 1.01 * h >= t1) {  // also absorbs a sliver of a last step
            h = t1 - t;
            final_step = true;
        }
        if (h <= 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), 1.0))
            throw IntegrationError(IntegrationError::Kind::step_underflow, t,
                                   "integrator: step size underflow at t=" + std::to_string(t) +
                                       " (problem may be stiff)");

        const Step<State> s = detail::dp5_step(checked, t, y, k1, h, stats);
        const double err = detail::error_norm(y, s.y_new, s, h, cfg);
        if (!std::isfinite(err))
            throw IntegrationError(IntegrationError::Kind::non_finite, t,
                                   "integrator: non-finite error estimate at t=" + std::to_string(t));

        if (err <= 1.0) {
            const double t_new = final_step ? t1 : t + h;
            if (sol.dense) {
                while (next_sample < sample_times.size() && sample_times[next_sample] <= t_new) {
                    const double ts = sample_times[next_sample];
                    sol.dense->y.push_back(ts == t_new ? s.y_new
                                                       : detail::dense_eval(y, s, h, (ts - t) / h));
                    ++next_sample;
                }
            }
            y = s.y_new;
            k1 = s.k7;
            t = t_new;
            ++stats.accepted;
            observer(t, y);
            double fac = err == 0.0 ? fac_max : safety * std::pow(err, -0.2);
            fac = std::clamp(fac, fac_min, last_rejected ? 1.0 : fac_max);
            h = std::min(h * fac, h_cap);
            last_rejected = false;
        } else {
            ++stats.rejected;
            const double fac = std::max(fac_min, safety * std::pow(err, -0.2));
            h *= fac;
            last_rejected = true;
        }
    }

    sol.y = y;
    return sol;
}

/// Fixed-step Dormand-Prince 5 (no error control), used for order checks.
template <class State, class Rhs>
State integrate_fixed_step(Rhs&& rhs, const State& y0, double t0, double t1, std::size_t n_steps) {
    if (n_steps == 0) throw std::invalid_argument("integrate_fixed_step: n_steps must be positive");
    IntegrationStats stats;
    const double h = (t1 - t0) / static_cast<double>(n_steps);
    State y = y0;
    State k1 = rhs(t0, y);
    for (std::size_t n = 0; n < n_steps; ++n) {
        const double t = t0 + h * static_cast<double>(n);
        const auto s = detail::dp5_step(rhs, t, y, k1, h, stats);
        y = s.y_new;
        k1 = s.k7;
    }
    return y;
}

}  // namespace dhw
