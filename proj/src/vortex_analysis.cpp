#include "dhw/vortex_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>

#include <json.hpp>

namespace dhw {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// within one lattice spacing of zero, with slack for rounding in the nodes
bool within_cell(double x, double cell) { return std::abs(x) <= cell * (1.0 + 1e-9); }

}  // namespace

double wrap_angle(double x) {
    double r = std::remainder(x, kTwoPi);
    if (r <= -std::numbers::pi) r += kTwoPi;
    return r;
}

double PhaseGradient::magnitude(std::size_t i, std::size_t j) const {
    const std::size_t k = index(i, j);
    return std::hypot(d_par[k], d_perp[k]);
}

PhaseGradient phase_gradient(const DistributionGrid& grid) {
    const GridSpec& s = grid.spec;
    PhaseGradient g;
    g.n_par = s.n_par;
    g.n_perp = s.n_perp;
    g.d_par.assign(s.size(), kNaN);
    g.d_perp.assign(s.size(), kNaN);
    g.flagged.assign(s.size(), false);

    // derivative along one axis from the wrapped forward/backward differences
    auto derivative = [&](std::size_t i, std::size_t j, bool along_par, bool& flag) {
        const std::size_t n = along_par ? s.n_par : s.n_perp;
        const std::size_t m = along_par ? i : j;
        const double h = along_par ? s.d_par() : s.d_perp();
        auto phase = [&](std::size_t idx) {
            return along_par ? grid.phase_at(idx, j) : grid.phase_at(i, idx);
        };
        const double here = phase(m);
        if (std::isnan(here)) {
            flag = true;
            return kNaN;
        }
        double sum = 0.0;
        int terms = 0;
        if (m + 1 < n) {
            const double next = phase(m + 1);
            if (std::isnan(next)) flag = true;
            sum += wrap_angle(next - here);
            ++terms;
        }
        if (m > 0) {
            const double prev = phase(m - 1);
            if (std::isnan(prev)) flag = true;
            sum += wrap_angle(here - prev);
            ++terms;
        }
        return flag ? kNaN : sum / (terms * h);
    };

    for (std::size_t i = 0; i < s.n_par; ++i)
        for (std::size_t j = 0; j < s.n_perp; ++j) {
            bool flag = false;
            const double dp = derivative(i, j, true, flag);
            const double dq = derivative(i, j, false, flag);
            const std::size_t k = g.index(i, j);
            g.flagged[k] = flag;
            if (!flag) {
                g.d_par[k] = dp;
                g.d_perp[k] = dq;
            }
        }
    return g;
}

std::vector<LatticeNode> rectangle_loop(std::size_t i0, std::size_t j0, std::size_t i1, std::size_t j1) {
    if (i1 <= i0 || j1 <= j0) throw std::invalid_argument("rectangle_loop: need i1 > i0 and j1 > j0");
    std::vector<LatticeNode> loop;
    loop.reserve(2 * ((i1 - i0) + (j1 - j0)));
    for (std::size_t i = i0; i < i1; ++i) loop.emplace_back(i, j0);
    for (std::size_t j = j0; j < j1; ++j) loop.emplace_back(i1, j);
    for (std::size_t i = i1; i > i0; --i) loop.emplace_back(i, j1);
    for (std::size_t j = j1; j > j0; --j) loop.emplace_back(i0, j);
    return loop;
}

double winding_sum(const DistributionGrid& grid, const std::vector<LatticeNode>& loop) {
    if (loop.size() < 3) throw WindingError("winding: loop needs at least 3 nodes");
    const GridSpec& s = grid.spec;
    double sum = 0.0;
    for (std::size_t n = 0; n < loop.size(); ++n) {
        const auto [i, j] = loop[n];
        const auto [i2, j2] = loop[(n + 1) % loop.size()];
        if (i >= s.n_par || j >= s.n_perp) throw WindingError("winding: node outside the grid");
        const std::size_t di = i > i2 ? i - i2 : i2 - i;
        const std::size_t dj = j > j2 ? j - j2 : j2 - j;
        if (di + dj != 1) throw WindingError("winding: consecutive nodes are not lattice neighbours");
        const double a = grid.phase_at(i, j), b = grid.phase_at(i2, j2);
        if (std::isnan(a) || std::isnan(b))
            throw WindingError("winding: loop passes through an undefined phase (singularity) at p_par=" +
                               std::to_string(s.p_par(std::isnan(a) ? i : i2)) + " p_perp=" +
                               std::to_string(s.p_perp(std::isnan(a) ? j : j2)));
        sum += wrap_angle(b - a);
    }
    return sum / kTwoPi;
}

int winding_number(const DistributionGrid& grid, const std::vector<LatticeNode>& loop) {
    return static_cast<int>(std::lround(winding_sum(grid, loop)));
}

std::vector<VortexPoint> locate_vortices(const DistributionGrid& grid) {
    const GridSpec& s = grid.spec;
    const std::size_t np = s.n_par - 1, nq = s.n_perp - 1;  // plaquettes per axis
    std::vector<int> charge(np * nq, 0);
    auto pid = [nq](std::size_t i, std::size_t j) { return i * nq + j; };

    for (std::size_t i = 0; i < np; ++i)
        for (std::size_t j = 0; j < nq; ++j) {
            if (!grid.phase_defined(i, j) || !grid.phase_defined(i + 1, j) ||
                !grid.phase_defined(i + 1, j + 1) || !grid.phase_defined(i, j + 1))
                continue;
            const double a = grid.phase_at(i, j), b = grid.phase_at(i + 1, j);
            const double c = grid.phase_at(i + 1, j + 1), d = grid.phase_at(i, j + 1);
            const double w = (wrap_angle(b - a) + wrap_angle(c - b) + wrap_angle(d - c) + wrap_angle(a - d)) / kTwoPi;
            charge[pid(i, j)] = static_cast<int>(std::lround(w));
        }

    std::vector<VortexPoint> out;
    std::vector<bool> seen(charge.size(), false);
    std::vector<std::pair<std::size_t, std::size_t>> stack;
    for (std::size_t i = 0; i < np; ++i)
        for (std::size_t j = 0; j < nq; ++j) {
            const int q = charge[pid(i, j)];
            if (q == 0 || seen[pid(i, j)]) continue;
            // flood fill over equal-charge neighbours
            double sum_par = 0.0, sum_perp = 0.0;
            std::size_t count = 0;
            int total = 0;
            stack.assign(1, {i, j});
            seen[pid(i, j)] = true;
            while (!stack.empty()) {
                const auto [a, b] = stack.back();
                stack.pop_back();
                sum_par += 0.5 * (s.p_par(a) + s.p_par(a + 1));
                sum_perp += 0.5 * (s.p_perp(b) + s.p_perp(b + 1));
                total += charge[pid(a, b)];
                ++count;
                for (int da = -1; da <= 1; ++da)
                    for (int db = -1; db <= 1; ++db) {
                        const long na = static_cast<long>(a) + da, nb = static_cast<long>(b) + db;
                        if (na < 0 || nb < 0 || na >= static_cast<long>(np) || nb >= static_cast<long>(nq)) continue;
                        const std::size_t k = pid(static_cast<std::size_t>(na), static_cast<std::size_t>(nb));
                        if (!seen[k] && charge[k] == q) {
                            seen[k] = true;
                            stack.emplace_back(static_cast<std::size_t>(na), static_cast<std::size_t>(nb));
                        }
                    }
            }
            VortexPoint v;
            v.p_par = sum_par / static_cast<double>(count);
            v.p_perp = sum_perp / static_cast<double>(count);
            v.charge = total;
            v.i = i;
            v.j = j;
            out.push_back(v);
        }

    // exact zeros sitting on a node
    for (std::size_t i = 1; i + 1 < s.n_par; ++i)
        for (std::size_t j = 1; j + 1 < s.n_perp; ++j) {
            if (grid.phase_defined(i, j)) continue;
            const auto ring = rectangle_loop(i - 1, j - 1, i + 1, j + 1);
            const bool clean = std::all_of(ring.begin(), ring.end(),
                                           [&](const LatticeNode& n) { return grid.phase_defined(n.first, n.second); });
            if (!clean) continue;
            const int q = winding_number(grid, ring);
            if (q == 0) continue;
            VortexPoint v;
            v.p_par = s.p_par(i);
            v.p_perp = s.p_perp(j);
            v.charge = q;
            v.i = i;
            v.j = j;
            out.push_back(v);
        }
    return out;
}

VortexPoint refine_vortex(const DistributionGrid& grid, const VortexPoint& v) {
    const GridSpec& s = grid.spec;
    if (v.i + 1 >= s.n_par || v.j + 1 >= s.n_perp) return v;
    const cplx z00 = grid.c2(v.i, v.j), z10 = grid.c2(v.i + 1, v.j);
    const cplx z01 = grid.c2(v.i, v.j + 1), z11 = grid.c2(v.i + 1, v.j + 1);
    // z(x, y) = z00 + x (z10 - z00) + y (z01 - z00) + x y (z11 - z10 - z01 + z00), x, y in [0, 1]
    const cplx a = z10 - z00, b = z01 - z00, c = z11 - z10 - z01 + z00;
    double x = 0.5, y = 0.5;
    for (int it = 0; it < 30; ++it) {
        const cplx z = z00 + x * a + y * b + x * y * c;
        const cplx zx = a + y * c, zy = b + x * c;
        const double det = zx.real() * zy.imag() - zy.real() * zx.imag();
        if (det == 0.0) return v;
        const double dx = (z.real() * zy.imag() - zy.real() * z.imag()) / det;
        const double dy = (zx.real() * z.imag() - z.real() * zx.imag()) / det;
        x -= dx;
        y -= dy;
        if (std::abs(dx) + std::abs(dy) < 1e-14) break;
    }
    if (!(x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0)) return v;
    VortexPoint r = v;
    r.p_par = s.p_par(v.i) + x * (s.p_par(v.i + 1) - s.p_par(v.i));
    r.p_perp = s.p_perp(v.j) + y * (s.p_perp(v.j + 1) - s.p_perp(v.j));
    r.refined = true;
    return r;
}

RingCount ring_count(const DistributionGrid& grid, const std::vector<VortexPoint>& vortices) {
    const double tol_par = grid.spec.d_par() * 1.01, tol_perp = grid.spec.d_perp() * 1.01;
    RingCount rc;
    std::vector<const VortexPoint*> upper, lower;
    for (const auto& v : vortices) {
        if (v.p_perp > 0.0)
            upper.push_back(&v);
        else if (v.p_perp < 0.0)
            lower.push_back(&v);
        else
            rc.unpaired.push_back(v);
    }
    std::vector<bool> used(lower.size(), false);
    for (const VortexPoint* u : upper) {
        std::size_t best = lower.size();
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < lower.size(); ++k) {
            const VortexPoint* l = lower[k];
            if (used[k] || l->charge != -u->charge) continue;
            const double dpar = std::abs(l->p_par - u->p_par), dperp = std::abs(l->p_perp + u->p_perp);
            if (dpar > tol_par || dperp > tol_perp) continue;
            const double d = std::hypot(dpar, dperp);
            if (d < best_d) {
                best_d = d;
                best = k;
            }
        }
        if (best == lower.size()) {
            rc.unpaired.push_back(*u);
        } else {
            used[best] = true;
            rc.pairs.emplace_back(*u, *lower[best]);
        }
    }
    for (std::size_t k = 0; k < lower.size(); ++k)
        if (!used[k]) rc.unpaired.push_back(*lower[k]);
    rc.rings = rc.pairs.size();
    return rc;
}

RingCount ring_count(const DistributionGrid& grid) { return ring_count(grid, locate_vortices(grid)); }

namespace {

void find_increments(ThresholdTable& table) {
    for (std::size_t k = 1; k < table.rows.size(); ++k) {
        const auto& a = table.rows[k - 1];
        const auto& b = table.rows[k];
        if (b.omega < a.omega) throw std::invalid_argument("threshold scan: frequencies must be ascending");
        if (b.rings > a.rings) table.increments.push_back({a.omega, b.omega, a.rings, b.rings});
        if (b.rings < a.rings) table.monotone = false;
    }
}

}  // namespace

ThresholdTable threshold_table(const std::vector<DistributionGrid>& grids) {
    ThresholdTable table;
    for (const auto& g : grids) {
        const RingCount rc = ring_count(g);
        table.rows.push_back({g.meta.pulse.omega, rc.rings, rc.anomaly()});
    }
    find_increments(table);
    return table;
}

ThresholdTable threshold_scan(const PulseConfig& cfg_base, const std::vector<double>& omegas,
                              const GridSpec& spec, const IntegratorConfig& icfg, std::size_t workers) {
    if (!std::is_sorted(omegas.begin(), omegas.end()))
        throw std::invalid_argument("threshold scan: frequencies must be ascending");
    ThresholdTable table;
    for (double w : omegas) {
        PulseConfig cfg = cfg_base;
        cfg.omega = w;
        const RingCount rc = ring_count(run_sweep(cfg, spec, icfg, workers));
        table.rows.push_back({w, rc.rings, rc.anomaly()});
    }
    find_increments(table);
    return table;
}

const char* to_string(Sharing s) {
    switch (s) {
        case Sharing::on_axis: return "on-axis";
        case Sharing::origin: return "origin";
        case Sharing::torus: return "torus";
        case Sharing::oblique: return "oblique";
        case Sharing::degenerate: return "degenerate";
    }
    return "unknown";
}

double SharingReport::argmax_angle() const { return std::atan2(std::abs(argmax_p_perp), std::abs(argmax_p_par)); }

SharingReport sharing_report(const DistributionGrid& grid) {
    const GridSpec& s = grid.spec;
    SharingReport r;
    r.marginal_par.assign(s.n_par, 0.0);
    r.marginal_perp.assign(s.n_perp, 0.0);

    std::size_t best_i = 0, best_j = 0;
    double best = -std::numeric_limits<double>::infinity();
    const double cell = s.d_par() * s.d_perp();
    for (std::size_t i = 0; i < s.n_par; ++i)
        for (std::size_t j = 0; j < s.n_perp; ++j) {
            const double f = grid.f_at(i, j);
            r.marginal_par[i] += f;
            r.marginal_perp[j] += f;
            if (s.p_perp(j) >= 0.0) r.yield += f * std::abs(s.p_perp(j)) * cell;
            if (f > best) {
                best = f;
                best_i = i;
                best_j = j;
            }
        }
    r.yield *= 2.0 * std::numbers::pi;

    r.f_max = best;
    r.argmax_p_par = s.p_par(best_i);
    r.argmax_p_perp = s.p_perp(best_j);
    if (!(best > 0.0)) {
        r.classification = Sharing::degenerate;
        return r;
    }
    const bool par_near_zero = within_cell(r.argmax_p_par, s.d_par());
    const bool perp_near_zero = within_cell(r.argmax_p_perp, s.d_perp());
    if (perp_near_zero && par_near_zero)
        r.classification = Sharing::origin;
    else if (perp_near_zero)
        r.classification = Sharing::on_axis;
    else if (par_near_zero)
        r.classification = Sharing::torus;
    else
        r.classification = Sharing::oblique;
    return r;
}

std::string sharing_report_json(const SharingReport& r) {
    nlohmann::ordered_json j;
    j["classification"] = to_string(r.classification);
    j["degenerate"] = r.classification == Sharing::degenerate;
    j["argmax"] = {{"p_par", r.argmax_p_par}, {"p_perp", r.argmax_p_perp}};
    j["f_max"] = r.f_max;
    j["yield"] = r.yield;
    j["marginal_par"] = r.marginal_par;
    j["marginal_perp"] = r.marginal_perp;
    return j.dump(2);
}

}  // namespace dhw
