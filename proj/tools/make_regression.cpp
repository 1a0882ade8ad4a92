// Regenerates tests/data/oracle_regression.json: the pair density at the
// origin of momentum space for the default pulse, from the Dirac-bispinor
// oracle at tight tolerance.
//
// usage: make_regression [output.json]

#include <fstream>
#include <iostream>

#include <json.hpp>

#include "dhw/grid_io.hpp"
#include "dhw/observables.hpp"
#include "dhw/sweep.hpp"

int main(int argc, char** argv) {
    const std::string out_path = argc > 1 ? argv[1] : "oracle_regression.json";
    const dhw::PulseConfig cfg{0.1, 1.0, 3};
    const dhw::MomentumPoint p{0.0, 0.0};
    dhw::IntegratorConfig icfg;
    icfg.rel_tol = 1e-13;
    icfg.abs_tol = 1e-15;

    const dhw::BispinorPair b = dhw::solve_bispinor(p, cfg, icfg);
    const double f = dhw::positive_energy_occupation(b, dhw::kinetic_momentum(p, cfg, cfg.duration()));

    nlohmann::ordered_json j;
    j["quantity"] = "f = 2|c2|^2 at pulse end";
    j["e0_ratio"] = cfg.e0_ratio;
    j["omega"] = cfg.omega;
    j["n_cycles"] = cfg.n_cycles;
    j["p_par"] = p.p_par;
    j["p_perp"] = p.p_perp;
    j["f"] = f;
    j["f_text"] = dhw::format_double(f);
    j["method"] = "Dirac bispinor pair, Dormand-Prince 5(4), Dirac representation";
    j["rtol"] = icfg.rel_tol;
    j["atol"] = icfg.abs_tol;
    j["generator"] = "tools/make_regression";
    j["version"] = dhw::library_version();
    j["created"] = dhw::utc_timestamp();

    std::ofstream out(out_path);
    if (!out) {
        std::cerr << "cannot write " << out_path << '\n';
        return 1;
    }
    out << j.dump(2) << '\n';
    std::cout << "f=" << dhw::format_double(f) << " -> " << out_path << '\n';
    return 0;
}
