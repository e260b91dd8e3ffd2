#pragma once

#include <span>
#include <vector>

#include "urt/grid.hpp"
#include "urt/inversion.hpp"
#include "urt/phantom.hpp"

namespace urt {

/// start, start + step, ..., n values.
std::vector<double> uniform_positions(double start, double step, std::size_t n);

/// Rasterizes the transverse section at each x3 position.
VolumeStack make_slices(const CompositeScene3D& scene, const GridGeometry& geometry, std::span<const double> x3_positions);

/// Re-indexes an existing stack: picks the slice stored at each requested position.
VolumeStack make_slices(const VolumeStack& stack, std::span<const double> x3_positions);

/// k_m = 2 pi m / (N * spacing), m = 0..N-1, the discrete dual of N uniformly spaced positions.
/// Throws GeometryError for non-uniform positions.
std::vector<double> dual_k_grid(std::span<const double> x3_positions);

/// F~(x1, x2; k) = sum_n exp(-i k x3_n) f(x1, x2, x3_n).
HybridField hybrid_forward(const VolumeStack& stack, std::span<const double> k_values);

/// Closed-form continuous transform integral dx3 exp(-i k x3) f(x1, x2, x3) of a separable scene.
HybridField hybrid_continuous(const CompositeScene3D& scene, const GridGeometry& geometry,
                              std::span<const double> k_values);

/// f(x1, x2, x3_n) = (1/N) sum_m exp(+i k_m x3_n) F~(x1, x2; k_m). Requires series provenance and the
/// dual k grid of x3_positions.
VolumeStack hybrid_inverse_series(const HybridField& field, std::span<const double> x3_positions);

/// One complex sinogram per k.
std::vector<Sinogram> hybrid_radon(const HybridField& field, const TauGrid& taus, const AngularRange& angles,
                                   double ray_step);

struct VolumeReconstruction {
    VolumeStack stack;
    HybridField field;             ///< F_S + F_A per k
    std::vector<double> fa_norms;  ///< ||F_A||_2 per k
    std::vector<double> fs_norms;  ///< ||F_S||_2 per k
};

/// Universal inversion per k, then the inverse series over x3.
VolumeReconstruction reconstruct_volume(std::span<const Sinogram> sinograms, std::span<const double> k_values,
                                        const GridGeometry& geometry, const RegParams& params,
                                        std::span<const double> x3_positions);

} // namespace urt
