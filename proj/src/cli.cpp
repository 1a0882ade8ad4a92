#include "dhw/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "dhw/field_pulse.hpp"
#include "dhw/grid_io.hpp"
#include "dhw/observables.hpp"
#include "dhw/sweep.hpp"
#include "dhw/vortex_analysis.hpp"

namespace dhw::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

unsigned default_workers() {
    if (const char* env = std::getenv("DHW_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The fully resolved invocation, recorded in the manifest and replayable.
class Resolved {
public:
    explicit Resolved(std::string sub) : sub_(std::move(sub)) { argv_.push_back(sub_); }

    void add(const std::string& flag, double v) {
        argv_.insert(argv_.end(), {"--" + flag, format_double(v)});
        params_[flag] = v;
    }
    void add(const std::string& flag, long long v) {
        argv_.insert(argv_.end(), {"--" + flag, std::to_string(v)});
        params_[flag] = v;
    }
    void add(const std::string& flag, const std::string& v) {
        argv_.insert(argv_.end(), {"--" + flag, v});
        params_[flag] = v;
    }
    void add_flag(const std::string& flag, bool on) {
        if (on) argv_.push_back("--" + flag);
        params_[flag] = on;
    }
    void add_list(const std::string& flag, const std::vector<double>& v) {
        std::string joined;
        for (std::size_t k = 0; k < v.size(); ++k) joined += (k ? "," : "") + format_double(v[k]);
        argv_.insert(argv_.end(), {"--" + flag, joined});
        params_[flag] = v;
    }

    const std::string& subcommand() const { return sub_; }
    const std::vector<std::string>& argv() const { return argv_; }
    const json& params() const { return params_; }

private:
    std::string sub_;
    std::vector<std::string> argv_;
    json params_ = json::object();
};

std::string absolute(const std::string& p) { return fs::absolute(p).lexically_normal().string(); }

void write_manifest(const fs::path& path, const Resolved& r, const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs, double wall_seconds) {
    json m;
    m["subcommand"] = r.subcommand();
    m["parameters"] = r.params();
    m["argv"] = r.argv();
    m["inputs"] = inputs;
    m["outputs"] = outputs;
    m["version"] = library_version();
    m["created"] = utc_timestamp();
    m["wall_time_s"] = wall_seconds;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write manifest " + path.string());
    out << m.dump(2) << '\n';
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct PulseOpts {
    double e0 = 0.1;
    double omega = 1.0;
    int cycles = 3;

    void attach(CLI::App* sub, bool with_omega = true) {
        sub->add_option("--e0", e0, "peak field E0/E_S")->capture_default_str();
        if (with_omega) sub->add_option("--omega", omega, "carrier frequency in mc^2")->capture_default_str();
        sub->add_option("--cycles", cycles, "number of carrier cycles N (>= 3)")->capture_default_str();
    }
    PulseConfig config() const { return {e0, omega, cycles}; }
    void record(Resolved& r, bool with_omega = true) const {
        r.add("e0", e0);
        if (with_omega) r.add("omega", omega);
        r.add("cycles", static_cast<long long>(cycles));
    }
};

struct SolverOpts {
    double rtol = 1e-10;
    double atol = 1e-12;
    std::size_t max_steps = IntegratorConfig{}.max_steps;
    bool rotating = false;

    void attach(CLI::App* sub) {
        sub->add_option("--rtol", rtol, "relative tolerance")->capture_default_str();
        sub->add_option("--atol", atol, "absolute tolerance")->capture_default_str();
        sub->add_option("--max-steps", max_steps, "step budget per momentum point")->capture_default_str();
        sub->add_flag("--rotating", rotating, "integrate with the dynamical phase factored out");
    }
    IntegratorConfig config() const {
        IntegratorConfig c;
        c.rel_tol = rtol;
        c.abs_tol = atol;
        c.max_steps = max_steps;
        return c;
    }
    TwoLevelPicture picture() const { return rotating ? TwoLevelPicture::rotating : TwoLevelPicture::lab; }
    void record(Resolved& r) const {
        r.add("rtol", rtol);
        r.add("atol", atol);
        r.add("max-steps", static_cast<long long>(max_steps));
        r.add_flag("rotating", rotating);
    }
};

struct GridOpts {
    double pmin = -1.0;
    double pmax = 1.0;
    std::size_t n = 201;
    std::size_t workers = 0;

    void attach(CLI::App* sub) {
        sub->add_option("--pmin", pmin, "lower momentum bound on both axes")->capture_default_str();
        sub->add_option("--pmax", pmax, "upper momentum bound on both axes")->capture_default_str();
        sub->add_option("--n", n, "points per axis")->capture_default_str();
        sub->add_option("--workers", workers, "worker threads (default: DHW_WORKERS or core count)");
    }
    GridSpec spec() const { return GridSpec::square(pmin, pmax, n); }
    std::size_t worker_count() const { return workers > 0 ? workers : default_workers(); }
    // worker count is left out on purpose: output does not depend on it
    void record(Resolved& r) const {
        r.add("pmin", pmin);
        r.add("pmax", pmax);
        r.add("n", static_cast<long long>(n));
    }
};

// Appends key=value pairs from the --config file for every flag that is
// not already on the command line.
std::vector<std::string> merge_config(std::vector<std::string> args) {
    std::string path;
    for (std::size_t k = 0; k < args.size(); ++k) {
        if (args[k] == "--config") {
            if (k + 1 >= args.size()) throw UsageError("--config needs a file name");
            path = args[k + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(k), args.begin() + static_cast<std::ptrdiff_t>(k + 2));
            break;
        }
        if (args[k].rfind("--config=", 0) == 0) {
            path = args[k].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(k));
            break;
        }
    }
    if (path.empty()) return args;

    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file " + path);
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    auto present = [&](const std::string& flag) {
        for (const auto& a : args)
            if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
        return false;
    };
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError(path + ":" + std::to_string(line_no) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        while (!key.empty() && key[0] == '-') key.erase(0, 1);
        const std::string flag = "--" + key;
        if (key.empty() || present(flag)) continue;
        if (value == "true" || value == "yes" || value == "on") {
            args.push_back(flag);
        } else if (value == "false" || value == "no" || value == "off") {
            continue;
        } else {
            args.push_back(flag);
            args.push_back(value);
        }
    }
    return args;
}

int run_field(const PulseOpts& po, std::size_t samples, const std::string& out_path, std::ostream& out,
              std::ostream& err) {
    const auto t0 = std::chrono::steady_clock::now();
    const PulseConfig cfg = po.config();
    cfg.validate();
    if (samples < 2) throw std::invalid_argument("--samples must be at least 2");

    std::ostringstream csv;
    csv << "t,E_over_ES,eA_over_mc\n";
    const double T = cfg.duration();
    double e_max = 0.0;
    for (std::size_t k = 0; k < samples; ++k) {
        const double t = k + 1 == samples ? T : T * static_cast<double>(k) / static_cast<double>(samples - 1);
        const double e = electric_field(cfg, t);
        e_max = std::max(e_max, std::abs(e));
        csv << format_double(t) << ',' << format_double(e) << ',' << format_double(vector_potential(cfg, t)) << '\n';
    }
    std::ostringstream summary;
    summary << "field: " << samples << " samples over [0, " << format_double(T) << "], max |E| = "
            << format_double(e_max) << ", a(T) = " << format_double(vector_potential(cfg, T));
    if (out_path.empty()) {
        out << csv.str();
        err << summary.str() << '\n';
        return kExitOk;
    }
    auto file = open_output(out_path);
    file << csv.str();
    Resolved r("field");
    po.record(r);
    r.add("samples", static_cast<long long>(samples));
    r.add("out", absolute(out_path));
    write_manifest(out_path + ".manifest.json", r, {}, {absolute(out_path)}, seconds_since(t0));
    out << summary.str() << ", wrote " << out_path << '\n';
    return kExitOk;
}

int run_solve(const PulseOpts& po, const SolverOpts& so, double ppar, double pperp, bool transient,
              std::size_t samples, const std::string& out_path, std::ostream& out, std::ostream& err) {
    const auto t0 = std::chrono::steady_clock::now();
    const PulseConfig cfg = po.config();
    cfg.validate();
    IntegratorConfig icfg = so.config();
    icfg.validate();
    const MomentumPoint p{ppar, pperp};
    auto context = [&](const std::exception& e) {
        return std::runtime_error("solve failed at p_par=" + format_double(ppar) + " p_perp=" + format_double(pperp) +
                                  " omega=" + format_double(cfg.omega) + ": " + e.what());
    };

    PairAmplitude a;
    try {
        a = pair_density(p, cfg, icfg, so.picture());
    } catch (const IntegrationError& e) {
        throw context(e);
    }
    std::ostringstream line;
    line << "f=" << format_double(a.f) << " |c2|=" << format_double(std::abs(a.c2_final))
         << " phase=" << format_double(a.phase);

    if (!transient) {
        out << line.str() << '\n';
        return kExitOk;
    }
    if (samples < 2) throw std::invalid_argument("--samples must be at least 2");
    if (so.rotating) throw std::invalid_argument("--transient is only available in the lab picture");
    icfg.dense_samples = samples;
    Trajectory<TwoLevelState> traj;
    try {
        traj = transient_two_level(p, cfg, icfg);
    } catch (const IntegrationError& e) {
        throw context(e);
    }
    // 2|c2(t)|^2 inside the pulse depends on the choice of instantaneous basis;
    // only the final row is the asymptotic pair density
    std::ostringstream csv;
    csv << "t,c1_re,c1_im,c2_re,c2_im,f_t\n";
    for (std::size_t k = 0; k < traj.t.size(); ++k) {
        const auto& y = traj.y[k];
        csv << format_double(traj.t[k]) << ',' << format_double(y.c1().real()) << ','
            << format_double(y.c1().imag()) << ',' << format_double(y.c2().real()) << ','
            << format_double(y.c2().imag()) << ',' << format_double(2.0 * std::norm(y.c2())) << '\n';
    }
    if (out_path.empty()) {
        out << csv.str();
        err << line.str() << '\n';
        return kExitOk;
    }
    auto file = open_output(out_path);
    file << csv.str();
    Resolved r("solve");
    po.record(r);
    so.record(r);
    r.add("ppar", ppar);
    r.add("pperp", pperp);
    r.add_flag("transient", true);
    r.add("samples", static_cast<long long>(samples));
    r.add("out", absolute(out_path));
    write_manifest(out_path + ".manifest.json", r, {}, {absolute(out_path)}, seconds_since(t0));
    out << line.str() << ", wrote " << out_path << '\n';
    return kExitOk;
}

int run_sweep_cmd(const PulseOpts& po, const SolverOpts& so, const GridOpts& go, const std::string& base,
                  std::ostream& out) {
    const auto t0 = std::chrono::steady_clock::now();
    const PulseConfig cfg = po.config();
    cfg.validate();
    const IntegratorConfig icfg = so.config();
    icfg.validate();
    const GridSpec spec = go.spec();
    spec.validate();

    const DistributionGrid grid = run_sweep(cfg, spec, icfg, go.worker_count(), so.picture());
    save_grid(grid, base);

    double f_max = 0.0;
    for (double f : grid.f) f_max = std::max(f_max, f);
    Resolved r("sweep");
    po.record(r);
    so.record(r);
    go.record(r);
    r.add("out", absolute(base));
    const double wall = seconds_since(t0);
    write_manifest(base + ".manifest.json", r, {},
                   {absolute(base + ".csv"), absolute(base + ".json"), absolute(base + ".bin")}, wall);
    out << "sweep: " << spec.n_par << "x" << spec.n_perp << " grid, omega=" << format_double(cfg.omega)
        << ", max f=" << format_double(f_max) << ", wrote " << base << ".csv in " << format_double(wall) << " s\n";
    return kExitOk;
}

int run_scan(const PulseOpts& po, const SolverOpts& so, const GridOpts& go, const std::vector<double>& omegas,
             const std::string& out_path, std::ostream& out, std::ostream& err) {
    const auto t0 = std::chrono::steady_clock::now();
    if (omegas.empty()) throw std::invalid_argument("--omegas needs at least one value");
    if (!std::is_sorted(omegas.begin(), omegas.end()))
        throw std::invalid_argument("--omegas must be in ascending order");
    PulseConfig cfg = po.config();
    for (double w : omegas) {
        cfg.omega = w;
        cfg.validate();
    }
    const IntegratorConfig icfg = so.config();
    icfg.validate();
    const GridSpec spec = go.spec();
    spec.validate();

    ThresholdTable table;
    for (double w : omegas) {
        cfg.omega = w;
        const RingCount rc = ring_count(run_sweep(cfg, spec, icfg, go.worker_count(), so.picture()));
        table.rows.push_back({w, rc.rings, rc.anomaly()});
        if (rc.anomaly())
            err << "scan: omega=" << format_double(w) << " has " << rc.unpaired.size()
                << " vortices without a mirror partner\n";
    }
    for (std::size_t k = 1; k < table.rows.size(); ++k)
        if (table.rows[k].rings > table.rows[k - 1].rings)
            table.increments.push_back(
                {table.rows[k - 1].omega, table.rows[k].omega, table.rows[k - 1].rings, table.rows[k].rings});

    std::ostringstream csv;
    csv << "omega,ring_count\n";
    for (const auto& row : table.rows) csv << format_double(row.omega) << ',' << row.rings << '\n';
    std::ostringstream summary;
    summary << "scan: " << table.rows.size() << " frequencies";
    for (const auto& b : table.increments)
        summary << ", rings " << b.rings_lo << "->" << b.rings_hi << " between omega " << format_double(b.omega_lo)
                << " and " << format_double(b.omega_hi);
    if (out_path.empty()) {
        out << csv.str();
        err << summary.str() << '\n';
        return kExitOk;
    }
    auto file = open_output(out_path);
    file << csv.str();
    Resolved r("scan");
    po.record(r, false);
    so.record(r);
    go.record(r);
    r.add_list("omegas", omegas);
    r.add("out", absolute(out_path));
    write_manifest(out_path + ".manifest.json", r, {}, {absolute(out_path)}, seconds_since(t0));
    out << summary.str() << ", wrote " << out_path << '\n';
    return kExitOk;
}

int run_vortices(const std::string& in_path, bool refine, const std::string& out_path, std::ostream& out,
                 std::ostream& err) {
    const auto t0 = std::chrono::steady_clock::now();
    const DistributionGrid grid = load_grid(in_path);
    std::vector<VortexPoint> vs = locate_vortices(grid);
    if (refine)
        for (auto& v : vs) v = refine_vortex(grid, v);
    const RingCount rc = ring_count(grid, vs);

    std::ostringstream csv;
    csv << (refine ? "p_par,p_perp,charge,refined\n" : "p_par,p_perp,charge\n");
    for (const auto& v : vs) {
        csv << format_double(v.p_par) << ',' << format_double(v.p_perp) << ',' << v.charge;
        if (refine) csv << ',' << (v.refined ? 1 : 0);
        csv << '\n';
    }
    std::ostringstream summary;
    summary << "vortices: " << vs.size() << " points, " << rc.rings << " rings, " << rc.unpaired.size()
            << " unpaired";
    if (out_path.empty()) {
        out << csv.str();
        err << summary.str() << '\n';
        return kExitOk;
    }
    auto file = open_output(out_path);
    file << csv.str();
    Resolved r("vortices");
    r.add("in", absolute(in_path));
    r.add_flag("refine", refine);
    r.add("out", absolute(out_path));
    write_manifest(out_path + ".manifest.json", r, {absolute(in_path)}, {absolute(out_path)}, seconds_since(t0));
    out << summary.str() << ", wrote " << out_path << '\n';
    return kExitOk;
}

int run_sharing(const std::string& in_path, const std::string& out_path, std::ostream& out, std::ostream& err) {
    const auto t0 = std::chrono::steady_clock::now();
    const DistributionGrid grid = load_grid(in_path);
    const SharingReport rep = sharing_report(grid);
    std::ostringstream summary;
    summary << "sharing: " << to_string(rep.classification) << ", argmax at (" << format_double(rep.argmax_p_par)
            << ", " << format_double(rep.argmax_p_perp) << "), f_max=" << format_double(rep.f_max)
            << ", yield=" << format_double(rep.yield);
    if (out_path.empty()) {
        out << sharing_report_json(rep) << '\n';
        err << summary.str() << '\n';
        return kExitOk;
    }
    auto file = open_output(out_path);
    file << sharing_report_json(rep) << '\n';
    Resolved r("sharing");
    r.add("in", absolute(in_path));
    r.add("out", absolute(out_path));
    write_manifest(out_path + ".manifest.json", r, {absolute(in_path)}, {absolute(out_path)}, seconds_since(t0));
    out << summary.str() << ", wrote " << out_path << '\n';
    return kExitOk;
}

std::vector<std::string> replay_args(const std::string& manifest_path, const std::string& out_override) {
    std::ifstream in(manifest_path);
    if (!in) throw UsageError("cannot read manifest " + manifest_path);
    json m;
    try {
        m = json::parse(in);
    } catch (const json::exception& e) {
        throw UsageError("manifest " + manifest_path + ": " + e.what());
    }
    if (!m.contains("argv") || !m["argv"].is_array()) throw UsageError("manifest " + manifest_path + " has no argv");
    auto args = m["argv"].get<std::vector<std::string>>();
    if (args.empty() || args[0] == "replay") throw UsageError("manifest " + manifest_path + " is not replayable");
    if (!out_override.empty()) {
        bool replaced = false;
        for (std::size_t k = 0; k + 1 < args.size(); ++k)
            if (args[k] == "--out") {
                args[k + 1] = out_override;
                replaced = true;
            }
        if (!replaced) args.insert(args.end(), {"--out", out_override});
    }
    return args;
}

}  // namespace

int dispatch(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Vacuum pair creation in a sin^4 pulse: two-level, DHW and vortex analysis", "dhwpair"};
    app.require_subcommand(1);
    app.set_version_flag("--version", library_version());

    PulseOpts po;
    SolverOpts so;
    GridOpts go;
    std::size_t samples = 0;
    std::string out_path, in_path, manifest_path;
    double ppar = 0.0, pperp = 0.0;
    bool transient = false, refine = false;
    std::vector<double> omegas;

    auto* field = app.add_subcommand("field", "sample E(t) and eA(t)/mc over the pulse");
    po.attach(field);
    field->add_option("--samples", samples, "number of time samples")->default_val(1001);
    field->add_option("--out", out_path, "CSV output (stdout if omitted)");

    auto* solve = app.add_subcommand("solve", "pair density at one momentum");
    po.attach(solve);
    so.attach(solve);
    solve->add_option("--ppar", ppar, "momentum along the field")->required();
    solve->add_option("--pperp", pperp, "momentum perpendicular to the field")->required();
    solve->add_flag("--transient", transient, "also write c1(t), c2(t) inside the pulse (basis dependent)");
    solve->add_option("--samples", samples, "time samples for --transient")->default_val(201);
    solve->add_option("--out", out_path, "CSV output for --transient");

    auto* sweep = app.add_subcommand("sweep", "pair amplitude over a square momentum grid");
    po.attach(sweep);
    so.attach(sweep);
    go.attach(sweep);
    sweep->add_option("--out", out_path, "output basename (.csv, .json, .bin)")->required();

    auto* scan = app.add_subcommand("scan", "vortex-ring count per frequency");
    po.attach(scan, false);
    so.attach(scan);
    go.attach(scan);
    scan->add_option("--omegas", omegas, "comma-separated ascending frequencies")->delimiter(',')->required();
    scan->add_option("--out", out_path, "CSV output (stdout if omitted)");

    auto* vort = app.add_subcommand("vortices", "phase singularities of c2 in a grid CSV");
    vort->add_option("--in", in_path, "grid CSV")->required()->check(CLI::ExistingFile);
    vort->add_flag("--refine", refine, "move each vortex to the bilinear zero inside its plaquette");
    vort->add_option("--out", out_path, "CSV output (stdout if omitted)");

    auto* share = app.add_subcommand("sharing", "argmax and marginals of f in a grid CSV");
    share->add_option("--in", in_path, "grid CSV")->required()->check(CLI::ExistingFile);
    share->add_option("--out", out_path, "JSON output (stdout if omitted)");

    auto* replay = app.add_subcommand("replay", "re-run the invocation recorded in a manifest");
    replay->add_option("--manifest", manifest_path, "manifest JSON")->required();
    replay->add_option("--out", out_path, "write to this output instead of the recorded one");

    try {
        std::vector<std::string> args = merge_config(raw_args);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (*field) return run_field(po, samples, out_path, out, err);
        if (*solve) return run_solve(po, so, ppar, pperp, transient, samples, out_path, out, err);
        if (*sweep) return run_sweep_cmd(po, so, go, out_path, out);
        if (*scan) return run_scan(po, so, go, omegas, out_path, out, err);
        if (*vort) return run_vortices(in_path, refine, out_path, out, err);
        if (*share) return run_sharing(in_path, out_path, out, err);
        if (*replay) return dispatch(replay_args(manifest_path, out_path), out, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

int dispatch(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return dispatch(args, std::cout, std::cerr);
}

}  // namespace dhw::cli
