// bispinor.hpp - direct Dirac-equation oracle for the homogeneous-field
// problem. Two bispinors (one per spin label) are evolved with
// H_D(t) = alpha . p(t) + gamma^0 and folded into the ten bilinears
// S_3..S_12 = sum_r Phi_r^dagger Gamma_a Phi_r, which must coincide with the
// DHW vector [h3, h0, h1, h2].

#pragma once

#include <array>
#include <string_view>

#include "dhw/dynamics.hpp"

namespace dhw {

using Spinor = std::array<cplx, 4>;
using Matrix4c = std::array<std::array<cplx, 4>, 4>;

/// A concrete choice of gamma matrices. The bilinears do not depend on it.
struct DiracRepresentation {
    std::string_view name;
    std::array<Matrix4c, 3> alpha;
    Matrix4c beta;  // gamma^0
    Matrix4c gamma5;
    Matrix4c to_dirac;  // unitary U with psi_dirac = U psi

    static const DiracRepresentation& dirac();
    static const DiracRepresentation& weyl();
};

/// Phi_{r=1} in slots 0..3, Phi_{r=2} in slots 4..7.
struct BispinorPair : std::array<cplx, 8> {
    Spinor spinor(int r) const;
    void set_spinor(int r, const Spinor& s);
    double norm2(int r) const;
    /// Phi_1^dagger Phi_2
    cplx overlap() const;
};

/// The two negative-energy eigenspinors of alpha . p + beta at the asymptotic
/// momentum, each with w^dagger w = 1 (Feynman in-state).
BispinorPair negative_energy_init(const MomentumPoint& p,
                                  const DiracRepresentation& rep = DiracRepresentation::dirac());

/// dPhi/dt = -i H_D(t) Phi for both spin labels.
BispinorPair dirac_rhs(const BispinorPair& b, const MomentumPoint& p, const PulseConfig& cfg, double t,
                       const DiracRepresentation& rep = DiracRepresentation::dirac());

/// H_D at kinetic momentum k.
Matrix4c dirac_hamiltonian(const Vec3& k, const DiracRepresentation& rep = DiracRepresentation::dirac());

/// S_3..S_12 packed as [h3, h0, h1, h2]. Gamma_3 = gamma^0, Gamma_{j+3} = Sigma^j,
/// Gamma_{j+6} = alpha^j, Gamma_{j+9} = -i gamma^j.
DhwVector bilinears(const BispinorPair& b, const DiracRepresentation& rep = DiracRepresentation::dirac());

/// sum_r |P_+ Phi_r|^2 with P_+ = (1 + H_D(k)/E)/2, the positive-energy
/// content of both spinors at kinetic momentum k. At pulse end this is the
/// pair density f.
double positive_energy_occupation(const BispinorPair& b, const Vec3& k,
                                  const DiracRepresentation& rep = DiracRepresentation::dirac());

}  // namespace dhw
