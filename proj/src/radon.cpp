#include "urt/radon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "urt/parallel.hpp"

namespace urt {

double default_ray_step(const GridGeometry& geometry) { return 0.5 * std::min(geometry.dx, geometry.dy); }

namespace {

// Range [lo, hi] of s for which a + s * b stays within [lo_x, hi_x]; empty if lo > hi.
void clip_axis(double a, double b, double lo_x, double hi_x, double& lo, double& hi) {
    if (b == 0.0) {
        if (a < lo_x || a > hi_x) {
            lo = std::numeric_limits<double>::infinity();
            hi = -std::numeric_limits<double>::infinity();
        }
        return;
    }
    double s0 = (lo_x - a) / b;
    double s1 = (hi_x - a) / b;
    if (s0 > s1)
        std::swap(s0, s1);
    lo = std::max(lo, s0);
    hi = std::min(hi, s1);
}

} // namespace

cplx radon_point(const ImageGrid2D& img, double tau, double phi, double ray_step) {
    if (!(ray_step > 0.0))
        throw GeometryError("ray_step must be positive");
    const auto& g = img.geometry();
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    const double radius = g.bounding_radius();
    const double s_center = -s * g.center_x() + c * g.center_y();
    const auto n = static_cast<long long>(std::ceil(2.0 * radius / ray_step));
    const double s_first = s_center + (0.5 - 0.5 * static_cast<double>(n)) * ray_step;

    // Only midpoints inside the rectangle contribute; the rest sample the zero padding.
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    clip_axis(tau * c, -s, g.x_min, g.x_max(), lo, hi);
    clip_axis(tau * s, c, g.y_min, g.y_max(), lo, hi);
    if (!(lo <= hi))
        return {0.0, 0.0};
    const auto k_lo = std::max<long long>(0, static_cast<long long>(std::floor((lo - s_first) / ray_step)) - 1);
    const auto k_hi = std::min<long long>(n - 1, static_cast<long long>(std::ceil((hi - s_first) / ray_step)) + 1);

    cplx acc{0.0, 0.0};
    for (long long k = k_lo; k <= k_hi; ++k) {
        const double sk = s_first + static_cast<double>(k) * ray_step;
        acc += bilinear_sample(img, tau * c - sk * s, tau * s + sk * c);
    }
    return acc * ray_step;
}

Sinogram radon_transform(const ImageGrid2D& img, const TauGrid& taus, const AngularRange& angles, double ray_step) {
    Sinogram sino(taus, angles);
    parallel_for(angles.n_phi, [&](std::size_t m) {
        const double phi = angles.angle(m);
        auto col = sino.column(m);
        for (std::size_t t = 0; t < taus.n_tau; ++t)
            col[t] = radon_point(img, taus.tau(t), phi, ray_step);
    });
    return sino;
}

TauGrid covering_tau_grid(const GridGeometry& geometry, double d_tau) {
    if (d_tau <= 0.0)
        d_tau = std::min(geometry.dx, geometry.dy);
    const double reach = std::hypot(std::max(std::abs(geometry.x_min), std::abs(geometry.x_max())),
                                    std::max(std::abs(geometry.y_min), std::abs(geometry.y_max())));
    return TauGrid::symmetric_covering(reach, d_tau);
}

} // namespace urt
