// Potential from adaptive Gauss-Kronrod quadrature of the field, one
// half-period panel at a time.

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "dhw/field_pulse.hpp"

namespace oracle {

inline double potential_by_quadrature(const dhw::PulseConfig& cfg, double t) {
    if (t <= 0.0) return 0.0;
    const double end = std::min(t, cfg.duration());
    const double panel = std::numbers::pi / cfg.omega;
    auto field = [&](double s) { return dhw::electric_field(cfg, s); };
    double sum = 0.0;
    for (double a = 0.0; a < end; a += panel) {
        const double b = std::min(a + panel, end);
        sum += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(field, a, b, 10, 1e-13);
    }
    return sum;
}

}  // namespace oracle
