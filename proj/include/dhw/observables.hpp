// observables.hpp - pair distribution, amplitude phase, energy density and
// the map from two-level amplitudes back to the DHW vector.

#pragma once

#include <array>
#include <vector>

#include "dhw/bispinor.hpp"
#include "dhw/dynamics.hpp"
#include "dhw/integrator.hpp"

namespace dhw {

/// Below this |c2| the phase of c2 is reported as undefined.
inline constexpr double kPhaseUndefinedBelow = 1e-14;

struct PairAmplitude {
    cplx c2_final;
    double f = 0.0;      // 2 |c2|^2
    double phase = 0.0;  // arg c2 in (-pi, pi]; NaN when !phase_defined
    bool phase_defined = false;

    static PairAmplitude from_c2(cplx c2);
};

/// E1, E2, E3 for polarization axis n = e_3.
struct BasisTriple {
    DhwVector e1, e2, e3;
};

enum class TwoLevelPicture {
    lab,       // integrate the amplitudes as given
    rotating,  // integrate with the dynamical phase factored out
};

/// Two-level amplitudes at the end of the pulse, starting from (1, 0) at t = 0.
TwoLevelState solve_two_level(const MomentumPoint& p, const PulseConfig& cfg, const IntegratorConfig& icfg,
                              TwoLevelPicture picture = TwoLevelPicture::lab);

/// f = 2|c2|^2 and arg c2 at the end of the pulse.
PairAmplitude pair_density(const MomentumPoint& p, const PulseConfig& cfg, const IntegratorConfig& icfg,
                           TwoLevelPicture picture = TwoLevelPicture::lab);

/// Two-level trajectory sampled at icfg.dense_samples equally spaced times
/// (at least 2) over the pulse. Values inside the pulse are not asymptotic
/// pair numbers.
Trajectory<TwoLevelState> transient_two_level(const MomentumPoint& p, const PulseConfig& cfg,
                                              const IntegratorConfig& icfg);

/// DHW vector at the end of the pulse, starting from the vacuum.
DhwVector solve_dhw(const MomentumPoint& p, const PulseConfig& cfg, const IntegratorConfig& icfg);

/// Bispinor pair at the end of the pulse, starting from the negative-energy states.
BispinorPair solve_bispinor(const MomentumPoint& p, const PulseConfig& cfg, const IntegratorConfig& icfg,
                            const DiracRepresentation& rep = DiracRepresentation::dirac());

BasisTriple basis_triple(const Vec3& k);

/// W = -2 (u1 E1 + u2 E2 + u3 E3) at kinetic momentum k.
DhwVector reconstruct_W(const BlochVector& u, const Vec3& k);

/// eps = k . h1 + h3.
double energy_density(const DhwVector& v, const Vec3& k);

/// f = eps / (2 E_p) + 1, for a vector taken where a = 0 (pulse end).
double distribution_from_dhw(const DhwVector& v_final, const MomentumPoint& p);

}  // namespace dhw
