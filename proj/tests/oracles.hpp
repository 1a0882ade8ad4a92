// Independent reference computations shared by the unit and acceptance tests.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "dhw/field_pulse.hpp"
#include "dhw/sweep.hpp"

namespace oracle {

using cplx = std::complex<double>;

// Classical fixed-step RK4 on the two-level equations, written out from the
// closed-form coefficients. Returns (c1, c2) at pulse end.
inline std::array<cplx, 2> rk4_two_level(double p_par, double p_perp, const dhw::PulseConfig& cfg,
                                         std::size_t n_steps) {
    const cplx I{0.0, 1.0};
    auto rhs = [&](double t, const std::array<cplx, 2>& c) {
        const double k3 = p_par - dhw::vector_potential(cfg, t);
        const double eps2 = 1.0 + p_perp * p_perp;
        const double w = std::sqrt(eps2 + k3 * k3);
        // coupling with the electron charge e = -|e|
        const double rabi = -dhw::electric_field(cfg, t) * std::sqrt(eps2) / (2.0 * w * w);
        return std::array<cplx, 2>{-I * (w * c[0] + I * rabi * c[1]), -I * (-I * rabi * c[0] - w * c[1])};
    };
    const double T = cfg.duration();
    const double h = T / static_cast<double>(n_steps);
    std::array<cplx, 2> c{1.0, 0.0};
    auto add = [](const std::array<cplx, 2>& a, double s, const std::array<cplx, 2>& b) {
        return std::array<cplx, 2>{a[0] + s * b[0], a[1] + s * b[1]};
    };
    for (std::size_t n = 0; n < n_steps; ++n) {
        const double t = h * static_cast<double>(n);
        const auto k1 = rhs(t, c);
        const auto k2 = rhs(t + h / 2, add(c, h / 2, k1));
        const auto k3 = rhs(t + h / 2, add(c, h / 2, k2));
        const auto k4 = rhs(t + h, add(c, h, k3));
        for (int i = 0; i < 2; ++i) c[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return c;
}

// Grid whose amplitude is an arbitrary function of (p_par, p_perp).
inline dhw::DistributionGrid synthetic_grid(const dhw::GridSpec& spec, const std::function<cplx(double, double)>& c2) {
    std::vector<cplx> v(spec.size());
    for (std::size_t i = 0; i < spec.n_par; ++i)
        for (std::size_t j = 0; j < spec.n_perp; ++j) v[spec.index(i, j)] = c2(spec.p_par(i), spec.p_perp(j));
    return dhw::DistributionGrid::from_amplitudes(spec, v);
}

// Canonical vortex of charge +1 (or -1 when conjugated) centred at (a, b).
inline std::function<cplx(double, double)> vortex(double a, double b, int charge = 1) {
    return [=](double x, double y) {
        const cplx z{x - a, y - b};
        return charge > 0 ? z : std::conj(z);
    };
}

}  // namespace oracle
