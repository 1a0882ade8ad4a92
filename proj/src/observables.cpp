#include "dhw/observables.hpp"

#include <cmath>
#include <limits>

namespace dhw {

PairAmplitude PairAmplitude::from_c2(cplx c2) {
    PairAmplitude a;
    a.c2_final = c2;
    a.f = 2.0 * std::norm(c2);
    a.phase_defined = std::abs(c2) >= kPhaseUndefinedBelow;
    a.phase = a.phase_defined ? std::arg(c2) : std::numeric_limits<double>::quiet_NaN();
    // std::arg returns [-pi, pi]; fold -pi onto +pi
    if (a.phase_defined && a.phase == -std::numbers::pi) a.phase = std::numbers::pi;
    return a;
}

TwoLevelState solve_two_level(const MomentumPoint& p, const PulseConfig& cfg, const IntegratorConfig& icfg,
                              TwoLevelPicture picture) {
    cfg.validate();
    const double t1 = cfg.duration();
    if (picture == TwoLevelPicture::rotating) {
        auto rhs = [&](double t, const RotatingTwoLevelState& s) {
            return rotating_two_level_rhs(s, p, cfg, t);
        };
        return integrate(rhs, RotatingTwoLevelState::vacuum(), 0.0, t1, icfg).y.lab();
    }
    auto rhs = [&](double t, const TwoLevelState& c) { return two_level_rhs(c, p, cfg, t); };
    return integrate(rhs, TwoLevelState::vacuum(), 0.0, t1, icfg).y;
}

PairAmplitude pair_density(const MomentumPoint& p, const PulseConfig& cfg, const IntegratorConfig& icfg,
                           TwoLevelPicture picture) {
    return PairAmplitude::from_c2(solve_two_level(p, cfg, icfg, picture).c2());
}

Trajectory<TwoLevelState> transient_two_level(const MomentumPoint& p, const PulseConfig& cfg,
                                              const IntegratorConfig& icfg) {
    cfg.validate();
    IntegratorConfig dense = icfg;
    if (!dense.dense_samples) dense.dense_samples = 2;
    auto rhs = [&](double t, const TwoLevelState& c) { return two_level_rhs(c, p, cfg, t); };
    return *integrate(rhs, TwoLevelState::vacuum(), 0.0, cfg.duration(), dense).dense;
}

DhwVector solve_dhw(const MomentumPoint& p, const PulseConfig& cfg, const IntegratorConfig& icfg) {
    cfg.validate();
    auto rhs = [&](double t, const DhwVector& v) { return dhw_rhs(v, p, cfg, t); };
    return integrate(rhs, dhw_vacuum(p), 0.0, cfg.duration(), icfg).y;
}

BispinorPair solve_bispinor(const MomentumPoint& p, const PulseConfig& cfg, const IntegratorConfig& icfg,
                            const DiracRepresentation& rep) {
    cfg.validate();
    auto rhs = [&](double t, const BispinorPair& b) { return dirac_rhs(b, p, cfg, t, rep); };
    return integrate(rhs, negative_energy_init(p, rep), 0.0, cfg.duration(), icfg).y;
}

BasisTriple basis_triple(const Vec3& k) {
    const double e = free_energy(k);
    const double eps_perp = std::sqrt(1.0 + k[0] * k[0] + k[1] * k[1]);
    BasisTriple b{};

    const double s1 = 1.0 / (e * eps_perp);
    b.e1[DhwVector::kH3] = -k[2] * s1;
    b.e1.set_h1({-k[2] * k[0] * s1, -k[2] * k[1] * s1, (e * e - k[2] * k[2]) * s1});

    // k x n with n = e_3
    b.e2.set_h0({k[1] / eps_perp, -k[0] / eps_perp, 0.0});
    b.e2.set_h2({0.0, 0.0, 1.0 / eps_perp});

    b.e3[DhwVector::kH3] = 1.0 / e;
    b.e3.set_h1({k[0] / e, k[1] / e, k[2] / e});
    return b;
}

DhwVector reconstruct_W(const BlochVector& u, const Vec3& k) {
    const BasisTriple b = basis_triple(k);
    DhwVector w;
    for (std::size_t i = 0; i < w.size(); ++i)
        w[i] = -2.0 * (u[0] * b.e1[i] + u[1] * b.e2[i] + u[2] * b.e3[i]);
    return w;
}

double energy_density(const DhwVector& v, const Vec3& k) {
    const Vec3 h1 = v.h1();
    return k[0] * h1[0] + k[1] * h1[1] + k[2] * h1[2] + v.h3();
}

double distribution_from_dhw(const DhwVector& v_final, const MomentumPoint& p) {
    const Vec3 k{p.p_perp, 0.0, p.p_par};
    return energy_density(v_final, k) / (2.0 * free_energy(k)) + 1.0;
}

}  // namespace dhw
