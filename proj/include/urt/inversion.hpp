#pragma once

#include <span>
#include <string>
#include <vector>

#include "urt/grid.hpp"

namespace urt {

enum class Backend {
    ramp_filter,   ///< band-limited |lambda| filter (Ram-Lak convolution) on the tau grid
    fp_quadrature, ///< Hadamard finite part of the 1/eta^2 integral by subtraction quadrature
};

const char* backend_name(Backend backend);
Backend parse_backend(const std::string& name);

/// Regularization controls of the universal inversion.
struct RegParams {
    double epsilon = 0.0; ///< regulator in 1/(eta - i epsilon), length units
    double fa_step = 0.0; ///< central-difference step of the eta derivative in F_A
    Backend backend = Backend::ramp_filter;

    /// epsilon = 2 d_tau, fa_step = d_tau, ramp_filter.
    static RegParams defaults(const TauGrid& taus);
    void validate(const TauGrid& taus) const;
};

struct PixelIndex {
    std::size_t i = 0;
    std::size_t j = 0;
    bool operator==(const PixelIndex&) const = default;
};

/// A reconstructed term plus the pixels whose projections leave the stored tau range.
struct InversionImage {
    ImageGrid2D image;
    std::vector<PixelIndex> flagged;
};

/// F_eps = F_S + F_A on a common geometry; f_total is their pointwise sum.
struct Reconstruction {
    ImageGrid2D f_s;
    ImageGrid2D f_a;
    ImageGrid2D f_total;
    std::vector<PixelIndex> flagged;

    /// ||f_a||_2 / ||f_s||_2 (0 when both vanish).
    [[nodiscard]] double fa_ratio() const;
};

/// 1 / (eta - i epsilon).
cplx delta_plus(double eta, double epsilon);

/// K(eta) = integral over [0, lambda_max] of lambda exp(-i lambda (eta - i epsilon)) d lambda, in closed
/// form. Tends to -1 / (eta - i epsilon)^2 as lambda_max grows.
cplx regularized_kernel(double eta, double epsilon, double lambda_max);

/// -FP integral of R(eta + tau_j) / eta^2 d eta at every tau node, via the band-limited ramp filter.
std::vector<cplx> ramp_filter_column(std::span<const cplx> column, double d_tau);

/// Same quantity by direct Hadamard finite-part quadrature on the symmetric eta grid eta_m = m d_tau,
/// |m| <= n_tau - 1: trapezoid of [g(eta) - g(0) - eta g'(0)] / eta^2 minus the boundary term 2 g(0) / A.
std::vector<cplx> finite_part_column(std::span<const cplx> column, double d_tau);

/// F_S(x) = -(1/4 pi^2) sum_phi dphi FP integral R(eta + <n_phi, x>, phi) / eta^2 d eta.
InversionImage invert_fs(const Sinogram& sino, const GridGeometry& geometry, const RegParams& params);

/// F_A(x) = -i pi (1/4 pi^2) sum_phi dphi d/d eta R(eta + <n_phi, x>, phi) at eta = 0.
InversionImage invert_fa(const Sinogram& sino, const GridGeometry& geometry, const RegParams& params);

Reconstruction invert_universal(const Sinogram& sino, const GridGeometry& geometry, const RegParams& params);

/// Independent path: (1/4 pi^2) sum_phi dphi integral R(eta + <n_phi, x>, phi) K(eta) d eta with the
/// closed-form kernel above. lambda_max <= 0 selects the Nyquist limit pi / d_tau.
ImageGrid2D epsilon_lambda_reconstruct(const Sinogram& sino, const GridGeometry& geometry, double epsilon,
                                       double lambda_max = 0.0);

/// (1/4 pi^2) dphi * sum over angles of filtered(<n_phi, x>, phi), filtered sampled on the sinogram's
/// tau grid and linearly interpolated. Pixels leaving the tau range are flagged.
InversionImage backproject(const Sinogram& filtered, const GridGeometry& geometry);

} // namespace urt
