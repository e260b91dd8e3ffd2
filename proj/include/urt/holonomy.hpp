#pragma once

#include <stdexcept>
#include <vector>

#include "urt/grid.hpp"
#include "urt/phantom.hpp"

namespace urt {

/// Sequence of rotations applied to the probe angles, each pi or 2*pi, totalling 2*pi.
struct ShiftPath {
    std::vector<double> steps;

    static ShiftPath full_turn();  ///< [2 pi]
    static ShiftPath half_turns(); ///< [pi, pi]
    void validate() const;
};

/// Probe window: tau > 0 and phi inside [0, pi/2].
struct ProbeWindow {
    TauGrid taus;
    AngularRange angles;

    /// n_tau samples on (tau_lo, tau_hi] and n_phi samples on [phi_lo, phi_hi).
    static ProbeWindow make(double tau_lo, double tau_hi, std::size_t n_tau, double phi_lo, double phi_hi,
                            std::size_t n_phi);
    /// Throws std::invalid_argument unless tau > 0 and the window lies within [0, pi/2].
    void validate() const;
};

struct PathStep {
    double shift = 0.0;                  ///< accumulated rotation, tracked on the real line
    std::vector<std::size_t> surviving;  ///< term indices kept after this step
    std::vector<double> term_peaks;      ///< max |column| per evaluated term
    Sinogram column;                     ///< sum of surviving term columns at the shifted angles
};

struct PathEvaluation {
    std::vector<std::size_t> surviving_terms;
    Sinogram final_column;
    std::vector<PathStep> steps;
};

struct HolonomyReport {
    double discrepancy_norm = 0.0;
    double threshold = 0.0;
    double leak_tol = 0.0;
    bool pass = false; ///< non-trivial holonomy detected
    PathEvaluation full_turn;
    PathEvaluation half_turns;
};

class UnsupportedAssumptionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// 1e-6 * peak |rasterized scene| * grid diameter.
double default_leak_tol(const CompositeScene& scene, const GridGeometry& geometry);

/// False when no point of the term's indicator region lies on <n_phi, x> = tau.
bool line_meets_region(RegionMask mask, double tau, double phi);

/// Numeric line integral of the rasterized masked scene; terms whose region misses the line give exactly 0.
cplx radon_masked(const CompositeScene& scene, double tau, double phi, const GridGeometry& geometry);

/// Radon image of every term over the probe window shifted by `shift`; terms collapse when masked and
/// their column stays within leak_tol. leak_tol <= 0 selects default_leak_tol.
PathEvaluation evaluate_path(const CompositeScene& scene, const ShiftPath& path, const ProbeWindow& probe,
                             const GridGeometry& geometry, double leak_tol = 0.0);

/// discrepancy = L2 norm (dtau dphi measure) of column([2 pi]) - column([pi, pi]);
/// pass iff it exceeds 10 * leak_tol.
HolonomyReport check_holonomy(const CompositeScene& scene, const ProbeWindow& probe, const GridGeometry& geometry,
                              double leak_tol = 0.0);

/// L2 norm of a probe-window sinogram under the dtau dphi measure.
double window_norm(const Sinogram& column);

/// Split of a scene of the form (g1 + g2) Theta_I + g2 Theta_III.
struct DefectDecomposition {
    CompositeScene defect;     ///< g1 Theta_I terms
    CompositeScene background; ///< g2 blobs (unmasked)
};

/// Identifies g2 as the blobs present under both indicators and g1 as the remaining Theta_I blobs.
/// Throws UnsupportedAssumptionError for unmasked terms, unmatched Theta_III terms, or a g2 that is
/// not centrally symmetric.
DefectDecomposition decompose_defect_scene(const CompositeScene& scene_tilde);

/// D(tau, phi) = R[G~](tau, phi) - R[G~](tau, phi + pi) over the probe window; under a centrally
/// symmetric background this isolates R[g1 Theta_I]. The grid must be symmetric about the origin.
Sinogram extract_defect(const CompositeScene& scene_tilde, const ProbeWindow& probe, const GridGeometry& geometry);

/// Discontinuity lim_{tau->0+} - lim_{tau->0-} of the column at phi, from quadratic extrapolation of
/// the three samples nearest zero on each side.
cplx boundary_jump(const Sinogram& sino, double phi);

} // namespace urt
