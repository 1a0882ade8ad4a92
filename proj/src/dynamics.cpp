#include "dhw/dynamics.hpp"

#include <cmath>

namespace dhw {

double DhwVector::norm() const {
    double s = 0.0;
    for (double x : *this) s += x * x;
    return std::sqrt(s);
}

double BlochVector::norm() const {
    const auto& u = *this;
    return std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
}

Vec3 kinetic_momentum(const MomentumPoint& p, const PulseConfig& cfg, double t) {
    return {p.p_perp, 0.0, p.p_par - vector_potential(cfg, t)};
}

double free_energy(const Vec3& k) {
    return std::sqrt(1.0 + k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
}

double omega_eff(const MomentumPoint& p, const PulseConfig& cfg, double t) {
    return free_energy(kinetic_momentum(p, cfg, t));
}

namespace {

struct Coefficients {
    double w;
    double rabi;
};

// one potential and one field evaluation per call
Coefficients coefficients(const MomentumPoint& p, const PulseConfig& cfg, double t) {
    const double kz = p.p_par - vector_potential(cfg, t);
    const double eps2 = 1.0 + p.p_perp * p.p_perp;
    const double w2 = eps2 + kz * kz;
    const double field = electric_field(cfg, t);
    return {std::sqrt(w2), field == 0.0 ? 0.0 : -field * std::sqrt(eps2) / (2.0 * w2)};
}

Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

}  // namespace

double rabi_eff(const MomentumPoint& p, const PulseConfig& cfg, double t) {
    return coefficients(p, cfg, t).rabi;
}

TwoLevelState two_level_rhs(const TwoLevelState& c, const MomentumPoint& p, const PulseConfig& cfg,
                            double t) {
    const auto [w, rabi] = coefficients(p, cfg, t);
    const cplx i{0.0, 1.0};
    // -i H c with H = [[w, i rabi], [-i rabi, -w]]
    return TwoLevelState{{-i * w * c[0] + rabi * c[1], -rabi * c[0] + i * w * c[1]}};
}

TwoLevelState RotatingTwoLevelState::lab() const {
    const double theta = (*this)[2].real();
    const cplx rot = std::polar(1.0, theta);
    return TwoLevelState{{(*this)[0] * std::conj(rot), (*this)[1] * rot}};
}

RotatingTwoLevelState rotating_two_level_rhs(const RotatingTwoLevelState& s, const MomentumPoint& p,
                                             const PulseConfig& cfg, double t) {
    const auto [w, rabi] = coefficients(p, cfg, t);
    const cplx rot2 = std::polar(1.0, 2.0 * s[2].real());
    return RotatingTwoLevelState{{rabi * s[1] * rot2, -rabi * s[0] * std::conj(rot2), cplx{w, 0.0}}};
}

Matrix10 dhw_matrix(const Vec3& k) {
    Matrix10 m{};
    constexpr std::size_t h3 = DhwVector::kH3, h0 = DhwVector::kH0, h1 = DhwVector::kH1,
                          h2 = DhwVector::kH2;
    // 2 k x (.) as a matrix
    const double cross[3][3] = {{0.0, -k[2], k[1]}, {k[2], 0.0, -k[0]}, {-k[1], k[0], 0.0}};
    for (std::size_t a = 0; a < 3; ++a) {
        m[h3][h2 + a] = 2.0 * k[a];
        m[h2 + a][h3] = -2.0 * k[a];
        m[h1 + a][h2 + a] = -2.0;
        m[h2 + a][h1 + a] = 2.0;
        for (std::size_t b = 0; b < 3; ++b) {
            m[h0 + a][h1 + b] = 2.0 * cross[a][b];
            m[h1 + a][h0 + b] = 2.0 * cross[a][b];
        }
    }
    return m;
}

DhwVector dhw_apply(const Vec3& k, const DhwVector& v) {
    const Vec3 h0 = v.h0(), h1 = v.h1(), h2 = v.h2();
    const Vec3 kxh1 = cross(k, h1), kxh0 = cross(k, h0);
    DhwVector out;
    out[DhwVector::kH3] = 2.0 * (k[0] * h2[0] + k[1] * h2[1] + k[2] * h2[2]);
    for (std::size_t a = 0; a < 3; ++a) {
        out[DhwVector::kH0 + a] = 2.0 * kxh1[a];
        out[DhwVector::kH1 + a] = 2.0 * kxh0[a] - 2.0 * h2[a];
        out[DhwVector::kH2 + a] = -2.0 * k[a] * v.h3() + 2.0 * h1[a];
    }
    return out;
}

DhwVector dhw_rhs(const DhwVector& v, const MomentumPoint& p, const PulseConfig& cfg, double t) {
    return dhw_apply(kinetic_momentum(p, cfg, t), v);
}

DhwVector dhw_vacuum(const Vec3& k) {
    const double e = free_energy(k);
    DhwVector v{};
    v[DhwVector::kH3] = -2.0 / e;
    v.set_h1({-2.0 * k[0] / e, -2.0 * k[1] / e, -2.0 * k[2] / e});
    return v;
}

DhwVector dhw_vacuum(const MomentumPoint& p) { return dhw_vacuum(Vec3{p.p_perp, 0.0, p.p_par}); }

BlochVector bloch_from_amplitudes(const TwoLevelState& c) {
    // chi^dagger sigma chi
    const cplx cross_term = std::conj(c[0]) * c[1];
    return BlochVector{{2.0 * cross_term.real(), 2.0 * cross_term.imag(),
                        std::norm(c[0]) - std::norm(c[1])}};
}

BlochVector precession_rhs(const BlochVector& u, const MomentumPoint& p, const PulseConfig& cfg,
                           double t) {
    const auto [w, rabi] = coefficients(p, cfg, t);
    const Vec3 a{0.0, -2.0 * rabi, 2.0 * w};
    const Vec3 r = cross(a, Vec3{u[0], u[1], u[2]});
    return BlochVector{{r[0], r[1], r[2]}};
}

}  // namespace dhw
