#include "dhw/bispinor.hpp"

#include <cmath>

namespace dhw {

namespace {

const cplx I{0.0, 1.0};

using Matrix2c = std::array<std::array<cplx, 2>, 2>;

Matrix2c mat2(cplx a, cplx b, cplx c, cplx d) {
    Matrix2c m;
    m[0][0] = a;
    m[0][1] = b;
    m[1][0] = c;
    m[1][1] = d;
    return m;
}

const std::array<Matrix2c, 3> kPauli = {mat2(0.0, 1.0, 1.0, 0.0), mat2(0.0, -I, I, 0.0),
                                        mat2(1.0, 0.0, 0.0, -1.0)};
const Matrix2c kId2 = mat2(1.0, 0.0, 0.0, 1.0);
const Matrix2c kZero2 = mat2(0.0, 0.0, 0.0, 0.0);

// [[a, b], [c, d]] from 2x2 blocks
Matrix4c blocks(const Matrix2c& a, const Matrix2c& b, const Matrix2c& c, const Matrix2c& d,
                double scale = 1.0) {
    Matrix4c m{};
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            m[i][j] = scale * a[i][j];
            m[i][j + 2] = scale * b[i][j];
            m[i + 2][j] = scale * c[i][j];
            m[i + 2][j + 2] = scale * d[i][j];
        }
    return m;
}

Matrix2c neg(const Matrix2c& a) {
    Matrix2c r = a;
    for (auto& row : r)
        for (auto& x : row) x = -x;
    return r;
}

Matrix4c mul(const Matrix4c& a, const Matrix4c& b) {
    Matrix4c r{};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t k = 0; k < 4; ++k)
            for (std::size_t j = 0; j < 4; ++j) r[i][j] += a[i][k] * b[k][j];
    return r;
}

Spinor apply(const Matrix4c& m, const Spinor& v) {
    Spinor r{};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) r[i] += m[i][j] * v[j];
    return r;
}

// v^dagger m v, real for Hermitian m
double expectation(const Matrix4c& m, const Spinor& v) {
    const Spinor mv = apply(m, v);
    cplx s{};
    for (std::size_t i = 0; i < 4; ++i) s += std::conj(v[i]) * mv[i];
    return s.real();
}

DiracRepresentation make_dirac() {
    DiracRepresentation r;
    r.name = "dirac";
    for (std::size_t j = 0; j < 3; ++j) r.alpha[j] = blocks(kZero2, kPauli[j], kPauli[j], kZero2);
    r.beta = blocks(kId2, kZero2, kZero2, neg(kId2));
    r.gamma5 = blocks(kZero2, kId2, kId2, kZero2);
    r.to_dirac = blocks(kId2, kZero2, kZero2, kId2);
    return r;
}

DiracRepresentation make_weyl() {
    DiracRepresentation r;
    r.name = "weyl";
    for (std::size_t j = 0; j < 3; ++j) r.alpha[j] = blocks(neg(kPauli[j]), kZero2, kZero2, kPauli[j]);
    r.beta = blocks(kZero2, kId2, kId2, kZero2);
    r.gamma5 = blocks(neg(kId2), kZero2, kZero2, kId2);
    r.to_dirac = blocks(kId2, kId2, neg(kId2), kId2, 1.0 / std::sqrt(2.0));
    return r;
}

// Gamma_3..Gamma_12 for a representation
struct GammaSet {
    std::array<Matrix4c, 10> g;
};

GammaSet gamma_set(const DiracRepresentation& rep) {
    GammaSet s;
    s.g[0] = rep.beta;
    for (std::size_t j = 0; j < 3; ++j) {
        s.g[1 + j] = mul(rep.gamma5, rep.alpha[j]);  // Sigma^j
        s.g[4 + j] = rep.alpha[j];
        Matrix4c m = mul(rep.beta, rep.alpha[j]);  // gamma^j
        for (auto& row : m)
            for (auto& x : row) x *= -I;
        s.g[7 + j] = m;
    }
    return s;
}

GammaSet cached_gamma_set(const DiracRepresentation& rep) {
    static const GammaSet dirac = gamma_set(DiracRepresentation::dirac());
    static const GammaSet weyl = gamma_set(DiracRepresentation::weyl());
    if (&rep == &DiracRepresentation::dirac()) return dirac;
    if (&rep == &DiracRepresentation::weyl()) return weyl;
    return gamma_set(rep);
}

}  // namespace

const DiracRepresentation& DiracRepresentation::dirac() {
    static const DiracRepresentation r = make_dirac();
    return r;
}

const DiracRepresentation& DiracRepresentation::weyl() {
    static const DiracRepresentation r = make_weyl();
    return r;
}

Spinor BispinorPair::spinor(int r) const {
    const std::size_t off = r == 1 ? 0 : 4;
    return {(*this)[off], (*this)[off + 1], (*this)[off + 2], (*this)[off + 3]};
}

void BispinorPair::set_spinor(int r, const Spinor& s) {
    const std::size_t off = r == 1 ? 0 : 4;
    for (std::size_t i = 0; i < 4; ++i) (*this)[off + i] = s[i];
}

double BispinorPair::norm2(int r) const {
    double s = 0.0;
    for (const cplx& x : spinor(r)) s += std::norm(x);
    return s;
}

cplx BispinorPair::overlap() const {
    cplx s{};
    const Spinor a = spinor(1), b = spinor(2);
    for (std::size_t i = 0; i < 4; ++i) s += std::conj(a[i]) * b[i];
    return s;
}

BispinorPair negative_energy_init(const MomentumPoint& p, const DiracRepresentation& rep) {
    // Dirac representation: w = N [ -sigma.k xi / (E + 1) ; xi ], N^2 = (E + 1) / (2E)
    const Vec3 k{p.p_perp, 0.0, p.p_par};
    const double e = free_energy(k);
    const double norm = std::sqrt((e + 1.0) / (2.0 * e));
    Matrix2c sk{};
    for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t a = 0; a < 2; ++a)
            for (std::size_t b = 0; b < 2; ++b) sk[a][b] += k[j] * kPauli[j][a][b];

    // psi_rep = U^dagger psi_dirac
    Matrix4c u_dag{};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) u_dag[i][j] = std::conj(rep.to_dirac[j][i]);

    BispinorPair pair{};
    for (int s = 0; s < 2; ++s) {
        Spinor w{};
        w[2 + s] = norm;
        for (std::size_t a = 0; a < 2; ++a) w[a] = -norm * sk[a][s] / (e + 1.0);
        pair.set_spinor(s + 1, apply(u_dag, w));
    }
    return pair;
}

Matrix4c dirac_hamiltonian(const Vec3& k, const DiracRepresentation& rep) {
    Matrix4c h = rep.beta;
    for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t a = 0; a < 4; ++a)
            for (std::size_t b = 0; b < 4; ++b) h[a][b] += k[j] * rep.alpha[j][a][b];
    return h;
}

BispinorPair dirac_rhs(const BispinorPair& b, const MomentumPoint& p, const PulseConfig& cfg, double t,
                       const DiracRepresentation& rep) {
    const Matrix4c h = dirac_hamiltonian(kinetic_momentum(p, cfg, t), rep);
    BispinorPair out;
    for (int r = 1; r <= 2; ++r) {
        Spinor hv = apply(h, b.spinor(r));
        for (auto& x : hv) x *= -I;
        out.set_spinor(r, hv);
    }
    return out;
}

DhwVector bilinears(const BispinorPair& b, const DiracRepresentation& rep) {
    const GammaSet gs = cached_gamma_set(rep);
    DhwVector v{};
    for (int r = 1; r <= 2; ++r) {
        const Spinor s = b.spinor(r);
        for (std::size_t a = 0; a < 10; ++a) v[a] += expectation(gs.g[a], s);
    }
    return v;
}

double positive_energy_occupation(const BispinorPair& b, const Vec3& k, const DiracRepresentation& rep) {
    const Matrix4c h = dirac_hamiltonian(k, rep);
    const double e = free_energy(k);
    double sum = 0.0;
    for (int r = 1; r <= 2; ++r) {
        const Spinor s = b.spinor(r);
        const Spinor hs = apply(h, s);
        // (1 + H/E)/2 applied componentwise; squaring after the subtraction
        // keeps small occupations accurate
        for (std::size_t i = 0; i < 4; ++i) sum += std::norm(0.5 * (s[i] + hs[i] / e));
    }
    return sum;
}

}  // namespace dhw
