// vortex_analysis.hpp - topology of the c2 amplitude over a momentum grid.
//
// Orientation: lattice node (i, j) sits at (p_par(i), p_perp(j)); loops are
// counter-clockwise with p_par as the horizontal and p_perp as the vertical
// axis. A charge of +1 means the phase of c2 increases by 2 pi going once
// around the singular point counter-clockwise.

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dhw/sweep.hpp"

namespace dhw {

/// Wraps an angle difference onto (-pi, pi].
double wrap_angle(double x);

/// Gradient of arg c2 per node, from wrapped one-sided differences
/// (central in the interior). `flagged` marks nodes whose stencil touches an
/// undefined phase; their components are NaN.
struct PhaseGradient {
    std::size_t n_par = 0, n_perp = 0;
    std::vector<double> d_par, d_perp;
    std::vector<bool> flagged;

    std::size_t index(std::size_t i, std::size_t j) const { return i * n_perp + j; }
    double magnitude(std::size_t i, std::size_t j) const;
};

PhaseGradient phase_gradient(const DistributionGrid& grid);

using LatticeNode = std::pair<std::size_t, std::size_t>;

class WindingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Counter-clockwise boundary of the node rectangle [i0, i1] x [j0, j1].
std::vector<LatticeNode> rectangle_loop(std::size_t i0, std::size_t j0, std::size_t i1, std::size_t j1);

/// Sum of wrapped phase differences along the closed path (last node joins
/// the first), divided by 2 pi. Consecutive nodes must be lattice neighbours.
/// Throws WindingError when the path meets an undefined phase.
int winding_number(const DistributionGrid& grid, const std::vector<LatticeNode>& loop);

/// Same sum without rounding, for integrality checks.
double winding_sum(const DistributionGrid& grid, const std::vector<LatticeNode>& loop);

struct VortexPoint {
    double p_par = 0.0;
    double p_perp = 0.0;
    int charge = 0;
    std::size_t i = 0, j = 0;  // lower-left node of the (first) plaquette
    bool refined = false;      // position from the bilinear zero, not the plaquette centre
};

/// Winding of every elementary plaquette; nonzero ones become vortices.
/// Connected (8-neighbour) plaquettes of equal charge merge into one point at
/// their mean centre carrying the summed charge. A node with undefined phase is tested with the ring of
/// its eight neighbours instead.
std::vector<VortexPoint> locate_vortices(const DistributionGrid& grid);

/// Moves a plaquette-centre vortex to the common zero of the bilinear
/// interpolants of Re c2 and Im c2 when that zero lies inside the plaquette.
VortexPoint refine_vortex(const DistributionGrid& grid, const VortexPoint& v);

struct RingCount {
    std::size_t rings = 0;
    std::vector<std::pair<VortexPoint, VortexPoint>> pairs;  // (p_perp > 0, mirror)
    std::vector<VortexPoint> unpaired;
    bool anomaly() const { return !unpaired.empty(); }
};

/// Pairs each vortex with its mirror image under p_perp -> -p_perp (opposite
/// charge, within one grid cell). One pair is one vortex ring in 3D.
RingCount ring_count(const DistributionGrid& grid, const std::vector<VortexPoint>& vortices);
RingCount ring_count(const DistributionGrid& grid);

struct ThresholdRow {
    double omega = 0.0;
    std::size_t rings = 0;
    bool anomaly = false;
};

struct ThresholdBracket {
    double omega_lo = 0.0, omega_hi = 0.0;
    std::size_t rings_lo = 0, rings_hi = 0;
};

struct ThresholdTable {
    std::vector<ThresholdRow> rows;
    std::vector<ThresholdBracket> increments;  // consecutive rows where the count grows
    bool monotone = true;                      // count never decreases
};

/// Ring count per frequency (ascending) over a shared grid.
ThresholdTable threshold_scan(const PulseConfig& cfg_base, const std::vector<double>& omegas,
                              const GridSpec& spec, const IntegratorConfig& icfg, std::size_t workers = 1);

/// Same, from grids that were already computed (one per frequency, ascending).
ThresholdTable threshold_table(const std::vector<DistributionGrid>& grids);

enum class Sharing { on_axis, origin, torus, oblique, degenerate };

const char* to_string(Sharing s);

struct SharingReport {
    Sharing classification = Sharing::degenerate;
    double argmax_p_par = 0.0, argmax_p_perp = 0.0;
    double f_max = 0.0;
    std::vector<double> marginal_par;   // sum over p_perp, per p_par node
    std::vector<double> marginal_perp;  // sum over p_par, per p_perp node
    double yield = 0.0;                 // 2 pi sum f |p_perp| dp_par dp_perp over p_perp >= 0

    /// Polar angle of the argmax from the field axis, atan2(|p_perp|, |p_par|).
    double argmax_angle() const;
};

/// Argmax of f (first maximum in row-major order) and its classification:
/// on_axis when only p_perp is within one cell of 0, torus when only p_par
/// is, origin when both are, oblique when neither is.
SharingReport sharing_report(const DistributionGrid& grid);

std::string sharing_report_json(const SharingReport& r);

}  // namespace dhw
