#include <doctest.h>

#include <cmath>
#include <numbers>

#include <json.hpp>

#include "dhw/vortex_analysis.hpp"
#include "oracles.hpp"

using namespace dhw;
using oracle::cplx;
using oracle::synthetic_grid;
using oracle::vortex;

namespace {

constexpr double kPi = std::numbers::pi;

// 41 x 41 nodes on [-1, 1]^2, spacing 0.05
const GridSpec kSpec = GridSpec::square(-1, 1, 41);

std::function<cplx(double, double)> product(std::function<cplx(double, double)> a,
                                            std::function<cplx(double, double)> b) {
    return [=](double x, double y) { return a(x, y) * b(x, y); };
}

// Mirror pair: -1 at (a, +b), +1 at (a, -b)
std::function<cplx(double, double)> ring(double a, double b) { return product(vortex(a, b, -1), vortex(a, -b, +1)); }

int total_charge(const std::vector<VortexPoint>& vs) {
    int q = 0;
    for (const auto& v : vs) q += v.charge;
    return q;
}

}  // namespace

TEST_CASE("angle wrapping") {
    CHECK(wrap_angle(0.1) == doctest::Approx(0.1));
    CHECK(wrap_angle(kPi) == kPi);
    CHECK(wrap_angle(-kPi) == kPi);
    CHECK(wrap_angle(3 * kPi) == doctest::Approx(kPi));
    CHECK(wrap_angle(2 * kPi + 0.1) == doctest::Approx(0.1));
    CHECK(wrap_angle(-2 * kPi - 0.1) == doctest::Approx(-0.1));
    for (double x = -20; x < 20; x += 0.37) {
        const double w = wrap_angle(x);
        CHECK(w > -kPi);
        CHECK(w <= kPi);
        CHECK(std::abs(std::remainder(x - w, 2 * kPi)) < 1e-12);
    }
}

TEST_CASE("phase gradient of a constant phase is zero") {
    const auto g = phase_gradient(synthetic_grid(kSpec, [](double, double) { return cplx{0.3, 0.4}; }));
    for (std::size_t k = 0; k < kSpec.size(); ++k) {
        CHECK_FALSE(g.flagged[k]);
        CHECK(g.d_par[k] == 0.0);
        CHECK(g.d_perp[k] == 0.0);
    }
}

TEST_CASE("phase gradient circulates about a vortex and falls like 1/r") {
    const double a = 0.012, b = -0.031;
    const DistributionGrid grid = synthetic_grid(kSpec, vortex(a, b));
    const auto g = phase_gradient(grid);
    for (std::size_t i = 0; i < kSpec.n_par; ++i)
        for (std::size_t j = 0; j < kSpec.n_perp; ++j) {
            const double x = kSpec.p_par(i) - a, y = kSpec.p_perp(j) - b;
            const double r = std::hypot(x, y);
            if (r < 0.3) continue;
            const std::size_t k = g.index(i, j);
            // counter-clockwise: grad arg = (-y, x) / r^2
            const double cross = x * g.d_perp[k] - y * g.d_par[k];
            CHECK(cross > 0.0);
            CHECK(std::abs(x * g.d_par[k] + y * g.d_perp[k]) < 0.05 * r * g.magnitude(i, j));
        }

    // log-log slope of |grad| along the ray p_perp = b towards the core
    const GridSpec fine = GridSpec::square(-1, 1, 401);
    const auto gf = phase_gradient(synthetic_grid(fine, vortex(0.0, 0.0005)));
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 210; i < 400; i += 3) {
        const double r = std::hypot(fine.p_par(i), 0.0005);
        const double lx = std::log(r), ly = std::log(gf.magnitude(i, 200));
        sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
        ++n;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope == doctest::Approx(-1.0).epsilon(0.1));
}

TEST_CASE("phase gradient flags nodes next to an undefined phase") {
    const DistributionGrid grid = synthetic_grid(kSpec, vortex(0.0, 0.0));
    const auto g = phase_gradient(grid);
    CHECK(std::isnan(grid.phase_at(20, 20)));
    CHECK(g.flagged[g.index(20, 20)]);
    CHECK(g.flagged[g.index(21, 20)]);
    CHECK(g.flagged[g.index(20, 19)]);
    CHECK(std::isnan(g.d_par[g.index(19, 20)]));
    CHECK_FALSE(g.flagged[g.index(22, 22)]);
    CHECK_FALSE(g.flagged[g.index(21, 21)]);
}

TEST_CASE("winding numbers of synthetic fields") {
    const auto loop = rectangle_loop(5, 5, 35, 35);
    CHECK(winding_number(synthetic_grid(kSpec, [](double, double) { return cplx{1.0, -1.0}; }), loop) == 0);
    CHECK(winding_number(synthetic_grid(kSpec, vortex(0.013, 0.021, +1)), loop) == 1);
    CHECK(winding_number(synthetic_grid(kSpec, vortex(0.013, 0.021, -1)), loop) == -1);
    const auto pair = synthetic_grid(kSpec, product(vortex(-0.3, 0.11, +1), vortex(0.3, 0.11, -1)));
    CHECK(winding_number(pair, loop) == 0);
    CHECK(winding_number(pair, rectangle_loop(2, 2, 20, 30)) == 1);
    CHECK(winding_number(pair, rectangle_loop(21, 2, 38, 30)) == -1);
    CHECK(winding_number(synthetic_grid(kSpec, product(vortex(0.01, 0.02), vortex(0.01, 0.02))), loop) == 2);
}

TEST_CASE("winding is integer valued and invariant under loop deformation") {
    const auto grid = synthetic_grid(kSpec, [](double x, double y) {
        return cplx{x - 0.11, y + 0.07} * std::exp(cplx{0.0, 3.0 * x * y + x});
    });
    CHECK(std::abs(winding_sum(grid, rectangle_loop(10, 10, 30, 30)) - 1.0) < 1e-12);
    for (std::size_t m = 1; m <= 17; m += 4)
        CHECK(winding_number(grid, rectangle_loop(m, m + 1, 40 - m, 39 - m)) == 1);
    CHECK(winding_number(grid, rectangle_loop(0, 0, 12, 40)) == 0);
}

TEST_CASE("winding rejects bad loops") {
    const auto grid = synthetic_grid(kSpec, vortex(0.0, 0.0));
    CHECK_THROWS_AS(winding_number(grid, rectangle_loop(20, 20, 25, 25)), WindingError);
    CHECK_THROWS_AS(winding_number(grid, {{1, 1}, {3, 1}, {3, 3}}), WindingError);
    CHECK_THROWS_AS(winding_number(grid, {{1, 1}, {2, 1}}), WindingError);
    CHECK_THROWS_AS(winding_number(grid, {{39, 39}, {40, 39}, {41, 39}, {41, 40}}), WindingError);
    CHECK_THROWS_AS(rectangle_loop(3, 3, 3, 5), std::invalid_argument);
    CHECK(winding_number(grid, rectangle_loop(19, 19, 21, 21)) == 1);
}

TEST_CASE("locate single vortices at plaquette centres") {
    for (int q : {+1, -1}) {
        const auto vs = locate_vortices(synthetic_grid(kSpec, vortex(0.113, -0.262, q)));
        REQUIRE(vs.size() == 1);
        CHECK(vs[0].charge == q);
        CHECK(vs[0].p_par == doctest::Approx(0.125));
        CHECK(vs[0].p_perp == doctest::Approx(-0.275));
        CHECK_FALSE(vs[0].refined);
    }
    CHECK(locate_vortices(synthetic_grid(kSpec, [](double, double) { return cplx{0.0, 0.0}; })).empty());
    CHECK(locate_vortices(synthetic_grid(kSpec, [](double x, double) { return std::exp(cplx{0.0, 2 * x}); })).empty());
}

TEST_CASE("a vortex sitting on a node is found through its neighbours") {
    const auto vs = locate_vortices(synthetic_grid(kSpec, vortex(0.25, -0.5, -1)));
    REQUIRE(vs.size() == 1);
    CHECK(vs[0].charge == -1);
    CHECK(vs[0].p_par == 0.25);
    CHECK(vs[0].p_perp == -0.5);
}

TEST_CASE("neighbouring plaquettes of equal charge merge") {
    const auto vs = locate_vortices(synthetic_grid(kSpec, product(vortex(0.025, 0.025), vortex(0.075, 0.025))));
    REQUIRE(vs.size() == 1);
    CHECK(vs[0].charge == 2);
    CHECK(vs[0].p_par == doctest::Approx(0.05));
    CHECK(vs[0].p_perp == doctest::Approx(0.025));
}

TEST_CASE("bilinear refinement recovers the zero of a linear field") {
    const DistributionGrid grid = synthetic_grid(kSpec, [](double x, double y) {
        return cplx{0.7 * (x - 0.113) + 0.2 * (y + 0.262), -0.3 * (x - 0.113) + 1.1 * (y + 0.262)};
    });
    const auto vs = locate_vortices(grid);
    REQUIRE(vs.size() == 1);
    const VortexPoint r = refine_vortex(grid, vs[0]);
    CHECK(r.refined);
    CHECK(r.charge == vs[0].charge);
    CHECK(r.p_par == doctest::Approx(0.113).epsilon(1e-12));
    CHECK(r.p_perp == doctest::Approx(-0.262).epsilon(1e-12));
}

TEST_CASE("ring count pairs mirror images") {
    const DistributionGrid one = synthetic_grid(kSpec, ring(0.012, 0.51));
    const auto vs = locate_vortices(one);
    CHECK(vs.size() == 2);
    CHECK(total_charge(vs) == 0);
    const RingCount rc = ring_count(one);
    CHECK(rc.rings == 1);
    CHECK_FALSE(rc.anomaly());
    REQUIRE(rc.pairs.size() == 1);
    CHECK(rc.pairs[0].first.p_perp > 0);
    CHECK(rc.pairs[0].first.charge == -1);
    CHECK(rc.pairs[0].second.charge == +1);

    const DistributionGrid two = synthetic_grid(kSpec, product(ring(0.012, 0.51), [](double x, double y) {
        return std::conj(cplx{x + 0.3, y - 0.13}) * cplx{x + 0.3, y + 0.13};
    }));
    CHECK(ring_count(two).rings == 2);
    CHECK_FALSE(ring_count(two).anomaly());

    const RingCount lone = ring_count(synthetic_grid(kSpec, vortex(0.01, 0.33)));
    CHECK(lone.rings == 0);
    CHECK(lone.anomaly());

    // same charge on both sides is not a ring
    const RingCount bad = ring_count(synthetic_grid(kSpec, product(vortex(0.01, 0.33), vortex(0.01, -0.33))));
    CHECK(bad.rings == 0);
    CHECK(bad.unpaired.size() == 2);
}

TEST_CASE("threshold table from precomputed grids") {
    std::vector<DistributionGrid> grids;
    for (auto [w, f] : std::vector<std::pair<double, std::function<cplx(double, double)>>>{
             {1.0, ring(0.01, 0.5)}, {1.1, ring(0.01, 0.6)}, {1.2, product(ring(0.01, 0.5), ring(0.21, 0.13))}}) {
        grids.push_back(synthetic_grid(kSpec, f));
        grids.back().meta.pulse.omega = w;
    }
    const ThresholdTable t = threshold_table(grids);
    REQUIRE(t.rows.size() == 3);
    CHECK(t.rows[0].rings == 1);
    CHECK(t.rows[2].rings == 2);
    CHECK(t.monotone);
    REQUIRE(t.increments.size() == 1);
    CHECK(t.increments[0].omega_lo == 1.1);
    CHECK(t.increments[0].omega_hi == 1.2);

    std::swap(grids[0], grids[2]);
    grids[0].meta.pulse.omega = 1.0;
    grids[2].meta.pulse.omega = 1.2;
    CHECK_FALSE(threshold_table(grids).monotone);
}

TEST_CASE("threshold scan over a single frequency") {
    const ThresholdTable t = threshold_scan({0.1, 1.0, 3}, {0.99}, GridSpec::square(-1, 1, 11), IntegratorConfig{});
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0].omega == 0.99);
    CHECK(t.increments.empty());
    CHECK_THROWS_AS(threshold_scan({0.1, 1.0, 3}, {1.0, 0.9}, GridSpec::square(-1, 1, 5), IntegratorConfig{}),
                    std::invalid_argument);
}

TEST_CASE("sharing classification") {
    auto lobe = [](double a, double b) {
        return [=](double x, double y) { return cplx{0.1 * std::exp(-((x - a) * (x - a) + (y - b) * (y - b)) / 0.02), 0.0}; };
    };
    auto sum = [](auto f, auto g) { return [=](double x, double y) { return f(x, y) + g(x, y); }; };

    const SharingReport axis = sharing_report(synthetic_grid(kSpec, sum(lobe(-0.5, 0.0), lobe(0.5, 0.0))));
    CHECK(axis.classification == Sharing::on_axis);
    CHECK(std::abs(axis.argmax_p_par) == doctest::Approx(0.5));
    CHECK(axis.argmax_angle() == doctest::Approx(0.0));

    const SharingReport torus = sharing_report(synthetic_grid(kSpec, sum(lobe(0.0, 0.6), lobe(0.0, -0.6))));
    CHECK(torus.classification == Sharing::torus);
    CHECK(torus.argmax_angle() == doctest::Approx(kPi / 2));

    CHECK(sharing_report(synthetic_grid(kSpec, lobe(0.04, -0.03))).classification == Sharing::origin);
    CHECK(sharing_report(synthetic_grid(kSpec, lobe(0.4, 0.4))).classification == Sharing::oblique);

    const SharingReport none = sharing_report(synthetic_grid(kSpec, [](double, double) { return cplx{}; }));
    CHECK(none.classification == Sharing::degenerate);
    CHECK(none.yield == 0.0);
    CHECK(std::string(to_string(Sharing::on_axis)) == "on-axis");
}

TEST_CASE("sharing marginals and yield") {
    const GridSpec s = GridSpec::square(-1, 1, 5);
    const DistributionGrid g = synthetic_grid(s, [](double, double) { return cplx{0.5, 0.0}; });  // f = 0.5
    const SharingReport r = sharing_report(g);
    REQUIRE(r.marginal_par.size() == 5);
    REQUIRE(r.marginal_perp.size() == 5);
    for (double m : r.marginal_par) CHECK(m == doctest::Approx(2.5));
    for (double m : r.marginal_perp) CHECK(m == doctest::Approx(2.5));
    // p_perp in {0, 0.5, 1}, five p_par nodes each, cell 0.25
    CHECK(r.yield == doctest::Approx(2 * kPi * 0.5 * 5 * (0.0 + 0.5 + 1.0) * 0.25));
    CHECK(r.f_max == 0.5);
    CHECK(r.argmax_p_par == -1.0);

    const auto j = nlohmann::json::parse(sharing_report_json(r));
    CHECK(j["classification"] == "oblique");
    CHECK(j["argmax"]["p_par"] == -1.0);
    CHECK(j["marginal_par"].size() == 5);
    CHECK(j.contains("yield"));
    CHECK(j["degenerate"] == false);
}

TEST_CASE("charge neutrality and mirror antisymmetry on a symmetric field") {
    const auto f = product(ring(0.05, 0.41), ring(-0.35, 0.77));
    const GridSpec s = GridSpec::square(-1, 1, 81);
    const DistributionGrid g = synthetic_grid(s, f);
    const auto vs = locate_vortices(g);
    CHECK(vs.size() == 4);
    CHECK(total_charge(vs) == 0);
    for (const auto& v : vs) {
        int mirrors = 0;
        for (const auto& w : vs)
            if (std::abs(w.p_par - v.p_par) < 1e-12 && std::abs(w.p_perp + v.p_perp) < 1e-12 && w.charge == -v.charge)
                ++mirrors;
        CHECK(mirrors == 1);
    }
}
