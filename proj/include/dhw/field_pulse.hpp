// field_pulse.hpp - linearly polarized sin^4-enveloped electric field pulse
//
// Unit convention used by every interface in this library: hbar = c = m = 1.
// Momenta are in mc, time in hbar/mc^2, energies in mc^2 and field strengths
// in the Sauter-Schwinger field E_S = m^2 c^3 / |e|. The electron charge is
// signed, e = -|e|, and only the combination e*A/(mc) is ever exposed.

#pragma once

#include <numbers>

namespace dhw {

/// Driving pulse E(t) = e0_ratio * sin^4(phi / 2N) * cos(phi), phi = omega*t,
/// supported on phi in [0, 2 pi N].
struct PulseConfig {
    double e0_ratio = 0.1;  // E_0 / E_S
    double omega = 1.0;     // carrier frequency, mc^2/hbar
    int n_cycles = 3;

    /// Throws std::invalid_argument unless n_cycles >= 3, omega > 0 and
    /// e0_ratio >= 0. A zero amplitude is accepted as the field-free limit.
    void validate() const;

    /// End of the pulse support, 2 pi N / omega.
    double duration() const { return 2.0 * std::numbers::pi * n_cycles / omega; }
};

/// Field strength in units of E_S. Exactly zero outside [0, duration()].
double electric_field(const PulseConfig& cfg, double t);

/// Dimensionless potential a(t) = e A(t) / (mc) with A(t) = -int_{-inf}^t E.
/// Since e < 0 this is +int_0^t E(tau) dtau, evaluated in closed form from
/// the product-to-sum expansion of the envelope. Zero for t <= 0 and
/// constant (zero up to rounding) for t >= duration().
double vector_potential(const PulseConfig& cfg, double t);

/// Full-pulse impulse int e E dt / (mc). Zero for n_cycles >= 3.
double net_impulse(const PulseConfig& cfg);

}  // namespace dhw
