// dynamics.hpp - right-hand sides and initial values for the two-level
// amplitudes, the 10-component DHW vector and the Bloch (precession) vector.
// The Dirac-bispinor formulation lives in bispinor.hpp.
//
// Frame: the field is polarized along axis 3 and the transverse momentum is
// put on axis 1, so the kinetic momentum is (p_perp, 0, p_par - a(t)).

#pragma once

#include <array>
#include <complex>

#include "dhw/field_pulse.hpp"

namespace dhw {

using cplx = std::complex<double>;
using Vec3 = std::array<double, 3>;

/// Asymptotic momentum in units of mc. Only p_perp^2 enters the kinematics.
struct MomentumPoint {
    double p_par = 0.0;
    double p_perp = 0.0;
};

/// Amplitudes (c1, c2) of the two-level system; vacuum is (1, 0).
struct TwoLevelState : std::array<cplx, 2> {
    cplx& c1() { return (*this)[0]; }
    cplx& c2() { return (*this)[1]; }
    const cplx& c1() const { return (*this)[0]; }
    const cplx& c2() const { return (*this)[1]; }
    double norm2() const { return std::norm((*this)[0]) + std::norm((*this)[1]); }

    static TwoLevelState vacuum() { return TwoLevelState{{cplx{1.0, 0.0}, cplx{0.0, 0.0}}}; }
};

/// V = [h3, h0, h1, h2] packed as 10 reals.
struct DhwVector : std::array<double, 10> {
    static constexpr std::size_t kH3 = 0, kH0 = 1, kH1 = 4, kH2 = 7;

    double h3() const { return (*this)[kH3]; }
    Vec3 h0() const { return block(kH0); }
    Vec3 h1() const { return block(kH1); }
    Vec3 h2() const { return block(kH2); }
    void set_h0(const Vec3& v) { set_block(kH0, v); }
    void set_h1(const Vec3& v) { set_block(kH1, v); }
    void set_h2(const Vec3& v) { set_block(kH2, v); }
    double norm() const;

private:
    Vec3 block(std::size_t off) const { return {(*this)[off], (*this)[off + 1], (*this)[off + 2]}; }
    void set_block(std::size_t off, const Vec3& v) {
        for (std::size_t i = 0; i < 3; ++i) (*this)[off + i] = v[i];
    }
};

struct BlochVector : std::array<double, 3> {
    double norm() const;
};

using Matrix10 = std::array<std::array<double, 10>, 10>;

/// p(t) = p - e A(t) = (p_perp, 0, p_par - a(t)).
Vec3 kinetic_momentum(const MomentumPoint& p, const PulseConfig& cfg, double t);

/// Free energy sqrt(1 + |k|^2) at kinetic momentum k.
double free_energy(const Vec3& k);

/// Instantaneous energy omega_p(t) = sqrt(p_perp^2 + (p_par - a)^2 + 1).
double omega_eff(const MomentumPoint& p, const PulseConfig& cfg, double t);

/// Coupling Omega_p(t) = e E(t) eps_perp / (2 omega_p^2) with e = -|e|,
/// i.e. -E(t) * sqrt(p_perp^2 + 1) / (2 omega_p(t)^2) in E_S units.
double rabi_eff(const MomentumPoint& p, const PulseConfig& cfg, double t);

/// i d/dt (c1, c2) = [[w, i W], [-i W, -w]] (c1, c2).
TwoLevelState two_level_rhs(const TwoLevelState& c, const MomentumPoint& p, const PulseConfig& cfg,
                            double t);

/// Amplitudes with the dynamical phase taken out:
/// s[0] = c1 exp(+i theta), s[1] = c2 exp(-i theta), s[2] = theta (real part),
/// theta(t) = int_0^t omega_p. Removes the fast carrier from the state.
struct RotatingTwoLevelState : std::array<cplx, 3> {
    static RotatingTwoLevelState vacuum() {
        return RotatingTwoLevelState{{cplx{1.0, 0.0}, cplx{0.0, 0.0}, cplx{0.0, 0.0}}};
    }
    /// Back to the lab-picture amplitudes.
    TwoLevelState lab() const;
};

RotatingTwoLevelState rotating_two_level_rhs(const RotatingTwoLevelState& s, const MomentumPoint& p,
                                             const PulseConfig& cfg, double t);

/// 10x10 antisymmetric generator M(k) for mc = 1.
Matrix10 dhw_matrix(const Vec3& k);

/// Matrix-free M(k) v.
DhwVector dhw_apply(const Vec3& k, const DhwVector& v);

/// dV/dt = M(p(t)) V.
DhwVector dhw_rhs(const DhwVector& v, const MomentumPoint& p, const PulseConfig& cfg, double t);

/// Vacuum values h3 = -2/E_p, h1 = -2 p / E_p, h0 = h2 = 0 at the
/// asymptotic momentum.
DhwVector dhw_vacuum(const MomentumPoint& p);

/// Same, at an arbitrary kinetic momentum.
DhwVector dhw_vacuum(const Vec3& k);

/// u = chi^dagger sigma chi with chi = (c1, c2).
BlochVector bloch_from_amplitudes(const TwoLevelState& c);

/// du/dt = a x u, a = (0, -2 Omega_p, 2 omega_p).
BlochVector precession_rhs(const BlochVector& u, const MomentumPoint& p, const PulseConfig& cfg,
                           double t);

}  // namespace dhw
