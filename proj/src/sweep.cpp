#include "dhw/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <limits>
#include <optional>
#include <thread>

namespace dhw {

void GridSpec::validate() const {
    if (n_par < 2 || n_perp < 2) throw std::invalid_argument("grid: need at least 2 points per axis");
    if (!(p_par_max > p_par_min) || !(p_perp_max > p_perp_min))
        throw std::invalid_argument("grid: max must exceed min on both axes");
    if (!std::isfinite(p_par_min) || !std::isfinite(p_par_max) || !std::isfinite(p_perp_min) ||
        !std::isfinite(p_perp_max))
        throw std::invalid_argument("grid: bounds must be finite");
}

namespace {

// (lo (n-1-i) + hi i) / (n-1): on a symmetric range nodes i and n-1-i are
// exact negatives of each other; both ends are pinned exactly
double lattice_node(double lo, double hi, std::size_t n, std::size_t i) {
    if (i == 0) return lo;
    if (i + 1 == n) return hi;
    const double m = static_cast<double>(n - 1);
    return (lo * static_cast<double>(n - 1 - i) + hi * static_cast<double>(i)) / m;
}

}  // namespace

double GridSpec::p_par(std::size_t i) const { return lattice_node(p_par_min, p_par_max, n_par, i); }

double GridSpec::p_perp(std::size_t j) const { return lattice_node(p_perp_min, p_perp_max, n_perp, j); }

bool DistributionGrid::phase_defined(std::size_t i, std::size_t j) const {
    return !std::isnan(phase[spec.index(i, j)]);
}

DistributionGrid DistributionGrid::from_amplitudes(const GridSpec& spec, const std::vector<cplx>& c2,
                                                   GridMeta meta) {
    if (c2.size() != spec.size()) throw std::invalid_argument("grid: amplitude count does not match spec");
    DistributionGrid g;
    g.spec = spec;
    g.meta = std::move(meta);
    const std::size_t n = spec.size();
    g.c2_re.resize(n);
    g.c2_im.resize(n);
    g.f.resize(n);
    g.phase.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const PairAmplitude a = PairAmplitude::from_c2(c2[k]);
        g.c2_re[k] = c2[k].real();
        g.c2_im[k] = c2[k].imag();
        g.f[k] = a.f;
        g.phase[k] = a.phase;
    }
    return g;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string library_version() { return DHW_VERSION; }

DistributionGrid run_sweep(const PulseConfig& cfg, const GridSpec& spec, const IntegratorConfig& icfg,
                           std::size_t workers, TwoLevelPicture picture) {
    cfg.validate();
    spec.validate();
    icfg.validate();
    workers = std::clamp<std::size_t>(workers, 1, spec.n_par);

    std::vector<cplx> c2(spec.size());
    struct Failure {
        std::size_t index;
        std::string what;
    };
    std::vector<std::optional<Failure>> failures(workers);

    auto work = [&](std::size_t w) {
        const std::size_t row_begin = spec.n_par * w / workers;
        const std::size_t row_end = spec.n_par * (w + 1) / workers;
        for (std::size_t i = row_begin; i < row_end; ++i) {
            for (std::size_t j = 0; j < spec.n_perp; ++j) {
                const std::size_t k = spec.index(i, j);
                try {
                    c2[k] = solve_two_level({spec.p_par(i), spec.p_perp(j)}, cfg, icfg, picture).c2();
                } catch (const std::exception& e) {
                    failures[w] = Failure{k, e.what()};
                    return;
                }
            }
        }
    };

    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }

    const Failure* first = nullptr;
    for (const auto& f : failures)
        if (f && (!first || f->index < first->index)) first = &*f;
    if (first) {
        const MomentumPoint p{spec.p_par(first->index / spec.n_perp), spec.p_perp(first->index % spec.n_perp)};
        throw SweepError(p, cfg.omega,
                         "sweep failed at p_par=" + std::to_string(p.p_par) + " p_perp=" +
                             std::to_string(p.p_perp) + " omega=" + std::to_string(cfg.omega) + ": " +
                             first->what);
    }

    GridMeta meta;
    meta.pulse = cfg;
    meta.rtol = icfg.rel_tol;
    meta.atol = icfg.abs_tol;
    meta.picture = picture == TwoLevelPicture::lab ? "lab" : "rotating";
    meta.version = library_version();
    meta.created = utc_timestamp();
    return DistributionGrid::from_amplitudes(spec, c2, std::move(meta));
}

std::vector<DistributionGrid> frequency_scan(const PulseConfig& cfg_base, const std::vector<double>& omegas,
                                             const GridSpec& spec, const IntegratorConfig& icfg,
                                             std::size_t workers, TwoLevelPicture picture) {
    if (omegas.empty()) throw std::invalid_argument("frequency_scan: need at least one frequency");
    for (double w : omegas)
        if (!(w > 0.0)) throw std::invalid_argument("frequency_scan: frequencies must be positive");
    std::vector<DistributionGrid> out;
    out.reserve(omegas.size());
    for (double w : omegas) {
        PulseConfig cfg = cfg_base;
        cfg.omega = w;
        out.push_back(run_sweep(cfg, spec, icfg, workers, picture));
    }
    return out;
}

}  // namespace dhw
