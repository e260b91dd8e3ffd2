#pragma once

#include "urt/grid.hpp"

namespace urt {

/// min(dx, dy) / 2.
double default_ray_step(const GridGeometry& geometry);

/// Line integral of the bilinear interpolant of img along <n_phi, x> = tau.
///
/// Composite midpoint rule in the arc-length parameter s of x = tau * n_phi + s * n_phi_perp,
/// n_phi_perp = (-sin phi, cos phi), over the chord of the grid's bounding circle. The midpoints
/// are placed symmetrically about the grid center's projection, so the sample set for
/// (tau, phi) and (-tau, phi + pi) coincides.
cplx radon_point(const ImageGrid2D& img, double tau, double phi, double ray_step);

/// Sinogram with values(t, m) = radon_point(img, tau_t, phi_m, ray_step).
Sinogram radon_transform(const ImageGrid2D& img, const TauGrid& taus, const AngularRange& angles, double ray_step);

/// Tau grid of spacing d_tau (default: min(dx, dy)) symmetric about zero, wide enough to cover
/// every projection of a centered grid.
TauGrid covering_tau_grid(const GridGeometry& geometry, double d_tau = 0.0);

} // namespace urt
