#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "urt/grid.hpp"

namespace urt {

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// 1D Fourier data along the ray q = lambda * n_phi, lambda >= 0 and strictly increasing.
struct SpectralSlice {
    double phi = 0.0;
    std::vector<double> lambdas;
    std::vector<cplx> values;
};

struct FstReport {
    double phi = 0.0;
    std::vector<double> lambdas;
    std::vector<cplx> lhs;
    std::vector<cplx> rhs;
    std::vector<double> residuals; ///< |lhs - rhs| per lambda
    double max_rel_residual = 0.0; ///< max residual / max |lhs|
};

struct FstCheck {
    std::vector<FstReport> reports;
    double tolerance = 1e-3;
    bool pass = false;
    [[nodiscard]] double worst() const;
};

/// Grid trapezoid of the 2D transform  sum w_ij exp(-i lambda <n_phi, x_ij>) f_ij dx dy.
SpectralSlice fst_lhs(const ImageGrid2D& img, double phi, std::span<const double> lambdas);

/// Trapezoid over the stored tau range of  exp(-i lambda tau) R(tau, phi) dtau, using the
/// sinogram column nearest to phi (must lie within half an angular step).
SpectralSlice fst_rhs(const Sinogram& sino, double phi, std::span<const double> lambdas);

/// Index of the stored angle matching phi within half a step; throws DomainError otherwise.
std::size_t match_angle(const AngularRange& angles, double phi);

/// Both sides at each requested angle; pass iff every report stays within tolerance.
/// Throws GeometryError when the sinogram's tau range cannot hold the image's projections.
FstCheck fst_check(const ImageGrid2D& img, const Sinogram& sino, std::span<const double> angles,
                   std::span<const double> lambdas, double tolerance = 1e-3);
/// Same, at every stored sinogram angle.
FstCheck fst_check(const ImageGrid2D& img, const Sinogram& sino, std::span<const double> lambdas,
                   double tolerance = 1e-3);

/// lambda_k = k * lambda_max / (count - 1); lambda_max defaults to the tau-grid Nyquist pi / d_tau.
std::vector<double> lambda_grid(std::size_t count, double lambda_max);

} // namespace urt
