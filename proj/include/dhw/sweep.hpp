// sweep.hpp - momentum grids and the parallel map of pair_density over them.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "dhw/observables.hpp"

namespace dhw {

/// Rectangular (p_par, p_perp) lattice, endpoints included.
struct GridSpec {
    double p_par_min = -1.0;
    double p_par_max = 1.0;
    double p_perp_min = -1.0;
    double p_perp_max = 1.0;
    std::size_t n_par = 201;
    std::size_t n_perp = 201;

    void validate() const;

    static GridSpec square(double pmin, double pmax, std::size_t n) { return {pmin, pmax, pmin, pmax, n, n}; }

    double d_par() const { return (p_par_max - p_par_min) / static_cast<double>(n_par - 1); }
    double d_perp() const { return (p_perp_max - p_perp_min) / static_cast<double>(n_perp - 1); }
    double p_par(std::size_t i) const;
    double p_perp(std::size_t j) const;
    std::size_t size() const { return n_par * n_perp; }
    /// Row-major with p_par as the outer index.
    std::size_t index(std::size_t i, std::size_t j) const { return i * n_perp + j; }
};

struct GridMeta {
    PulseConfig pulse;
    double rtol = 0.0;
    double atol = 0.0;
    std::string picture = "lab";
    std::string version;
    std::string created;  // ISO 8601, UTC
};

/// Final c2 over a GridSpec; arrays are row-major (p_par outer).
/// phase is NaN where |c2| < kPhaseUndefinedBelow.
struct DistributionGrid {
    GridSpec spec;
    std::vector<double> c2_re, c2_im, f, phase;
    GridMeta meta;

    cplx c2(std::size_t i, std::size_t j) const {
        const std::size_t k = spec.index(i, j);
        return {c2_re[k], c2_im[k]};
    }
    double phase_at(std::size_t i, std::size_t j) const { return phase[spec.index(i, j)]; }
    bool phase_defined(std::size_t i, std::size_t j) const;
    double f_at(std::size_t i, std::size_t j) const { return f[spec.index(i, j)]; }

    /// Builds every column from the complex amplitudes.
    static DistributionGrid from_amplitudes(const GridSpec& spec, const std::vector<cplx>& c2,
                                            GridMeta meta = {});
};

class SweepError : public std::runtime_error {
public:
    SweepError(const MomentumPoint& p, double omega, const std::string& what)
        : std::runtime_error(what), point_(p), omega_(omega) {}
    const MomentumPoint& point() const { return point_; }
    double omega() const { return omega_; }

private:
    MomentumPoint point_;
    double omega_;
};

/// Solves pair_density at every grid point. Rows are split into contiguous
/// chunks, one per worker, and results are stored by index, so the output is
/// bit-identical for any worker count. The first failing point (lowest
/// index) is rethrown as SweepError.
DistributionGrid run_sweep(const PulseConfig& cfg, const GridSpec& spec, const IntegratorConfig& icfg,
                           std::size_t workers, TwoLevelPicture picture = TwoLevelPicture::lab);

/// One run_sweep per frequency, sharing the grid.
std::vector<DistributionGrid> frequency_scan(const PulseConfig& cfg_base, const std::vector<double>& omegas,
                                             const GridSpec& spec, const IntegratorConfig& icfg,
                                             std::size_t workers,
                                             TwoLevelPicture picture = TwoLevelPicture::lab);

/// Current UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

std::string library_version();

}  // namespace dhw
