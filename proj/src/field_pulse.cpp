#include "dhw/field_pulse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dhw {

void PulseConfig::validate() const {
    if (n_cycles < 3)
        throw std::invalid_argument("pulse: n_cycles must be >= 3, got " + std::to_string(n_cycles));
    if (!(omega > 0.0) || !std::isfinite(omega))
        throw std::invalid_argument("pulse: omega must be positive and finite");
    if (!(e0_ratio >= 0.0) || !std::isfinite(e0_ratio))
        throw std::invalid_argument("pulse: e0_ratio must be non-negative and finite");
}

namespace {

// sin^4(phi/2N) cos(phi) = 1/8 [3 cos(phi) - 2 cos(k1 phi) - 2 cos(k2 phi)
//                               + 1/2 cos(k3 phi) + 1/2 cos(k4 phi)]
struct Harmonics {
    double k[5];
    double w[5];
};

Harmonics harmonics(int n) {
    const double inv = 1.0 / n;
    return {{1.0, 1.0 + inv, 1.0 - inv, 1.0 + 2.0 * inv, 1.0 - 2.0 * inv},
            {3.0, -2.0, -2.0, 0.5, 0.5}};
}

// int_0^phi of the bracket above, d(phi) units
double bracket_antiderivative(int n, double phi) {
    const Harmonics h = harmonics(n);
    double sum = 0.0;
    for (int m = 0; m < 5; ++m) {
        // k4 = 0 only for N = 2, which validate() rejects; keep the limit anyway
        sum += h.k[m] == 0.0 ? h.w[m] * phi : h.w[m] * std::sin(h.k[m] * phi) / h.k[m];
    }
    return sum;
}

}  // namespace

double electric_field(const PulseConfig& cfg, double t) {
    const double phi = cfg.omega * t;
    const double phi_end = 2.0 * std::numbers::pi * cfg.n_cycles;
    if (phi < 0.0 || phi > phi_end) return 0.0;
    const double s = std::sin(phi / (2.0 * cfg.n_cycles));
    const double s2 = s * s;
    return cfg.e0_ratio * s2 * s2 * std::cos(phi);
}

double vector_potential(const PulseConfig& cfg, double t) {
    if (t <= 0.0) return 0.0;
    const double phi_end = 2.0 * std::numbers::pi * cfg.n_cycles;
    const double phi = std::min(cfg.omega * t, phi_end);
    return cfg.e0_ratio / (8.0 * cfg.omega) * bracket_antiderivative(cfg.n_cycles, phi);
}

double net_impulse(const PulseConfig& cfg) {
    // int e E dt with e = -|e|
    return -vector_potential(cfg, cfg.duration());
}

}  // namespace dhw
