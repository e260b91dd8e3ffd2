#include "urt/fourier_slice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "urt/parallel.hpp"

namespace urt {

namespace {

void check_lambdas(std::span<const double> lambdas) {
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
        if (!(lambdas[k] >= 0.0))
            throw DomainError("lambda must be non-negative");
        if (k > 0 && !(lambdas[k] > lambdas[k - 1]))
            throw DomainError("lambda samples must be strictly increasing");
    }
}

double trapezoid_weight(std::size_t i, std::size_t n) { return (i == 0 || i + 1 == n) ? 0.5 : 1.0; }

} // namespace

double FstCheck::worst() const {
    double w = 0.0;
    for (const auto& r : reports)
        w = std::max(w, r.max_rel_residual);
    return w;
}

SpectralSlice fst_lhs(const ImageGrid2D& img, double phi, std::span<const double> lambdas) {
    check_lambdas(lambdas);
    const auto& g = img.geometry();
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    SpectralSlice out{phi, {lambdas.begin(), lambdas.end()}, std::vector<cplx>(lambdas.size())};
    std::vector<cplx> ex(g.nx), ey(g.ny);
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
        // The kernel factorizes over the axes, so each row costs nx multiplies.
        for (std::size_t i = 0; i < g.nx; ++i)
            ex[i] = trapezoid_weight(i, g.nx) * std::polar(1.0, -lambdas[k] * c * g.x(i));
        for (std::size_t j = 0; j < g.ny; ++j)
            ey[j] = trapezoid_weight(j, g.ny) * std::polar(1.0, -lambdas[k] * s * g.y(j));
        cplx acc{0.0, 0.0};
        for (std::size_t j = 0; j < g.ny; ++j) {
            cplx row{0.0, 0.0};
            for (std::size_t i = 0; i < g.nx; ++i)
                row += ex[i] * img.at(i, j);
            acc += ey[j] * row;
        }
        out.values[k] = acc * (g.dx * g.dy);
    }
    return out;
}

std::size_t match_angle(const AngularRange& angles, double phi) {
    const double step = angles.step();
    double offset = phi - angles.phi_min;
    if (angles.is_full())
        offset -= 2.0 * std::numbers::pi * std::floor((offset + 0.5 * step) / (2.0 * std::numbers::pi));
    const double idx = std::round(offset / step);
    if (idx < 0.0 || idx > static_cast<double>(angles.n_phi - 1) ||
        std::abs(offset - idx * step) > 0.5 * step + 1e-12)
        throw DomainError("phi lies outside the sinogram's angular range");
    return static_cast<std::size_t>(idx);
}

SpectralSlice fst_rhs(const Sinogram& sino, double phi, std::span<const double> lambdas) {
    check_lambdas(lambdas);
    const std::size_t m = match_angle(sino.angles(), phi);
    const auto col = sino.column(m);
    const auto& taus = sino.taus();
    SpectralSlice out{phi, {lambdas.begin(), lambdas.end()}, std::vector<cplx>(lambdas.size())};
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
        cplx acc{0.0, 0.0};
        for (std::size_t t = 0; t < taus.n_tau; ++t)
            acc += trapezoid_weight(t, taus.n_tau) * std::polar(1.0, -lambdas[k] * taus.tau(t)) * col[t];
        out.values[k] = acc * taus.d_tau;
    }
    return out;
}

FstCheck fst_check(const ImageGrid2D& img, const Sinogram& sino, std::span<const double> angles,
                   std::span<const double> lambdas, double tolerance) {
    const auto& g = img.geometry();
    const auto& taus = sino.taus();
    const double corners[4][2] = {{g.x_min, g.y_min}, {g.x_max(), g.y_min}, {g.x_min, g.y_max()}, {g.x_max(), g.y_max()}};
    for (double phi : angles) {
        const double c = std::cos(phi);
        const double s = std::sin(phi);
        for (const auto& p : corners) {
            const double proj = c * p[0] + s * p[1];
            if (proj < taus.tau_min - 0.5 * taus.d_tau || proj > taus.tau_max() + 0.5 * taus.d_tau)
                throw GeometryError("sinogram tau range does not cover the image's projections");
        }
    }

    FstCheck result;
    result.tolerance = tolerance;
    result.reports.resize(angles.size());
    parallel_for(angles.size(), [&](std::size_t a) {
        const auto lhs = fst_lhs(img, angles[a], lambdas);
        const auto rhs = fst_rhs(sino, angles[a], lambdas);
        FstReport r;
        r.phi = angles[a];
        r.lambdas = lhs.lambdas;
        r.lhs = lhs.values;
        r.rhs = rhs.values;
        r.residuals.resize(lambdas.size());
        double worst = 0.0;
        double scale = 0.0;
        for (std::size_t k = 0; k < lambdas.size(); ++k) {
            r.residuals[k] = std::abs(lhs.values[k] - rhs.values[k]);
            worst = std::max(worst, r.residuals[k]);
            scale = std::max(scale, std::abs(lhs.values[k]));
        }
        if (scale > 0.0)
            r.max_rel_residual = worst / scale;
        else
            r.max_rel_residual = worst > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
        result.reports[a] = std::move(r);
    });
    result.pass = result.worst() <= tolerance;
    return result;
}

FstCheck fst_check(const ImageGrid2D& img, const Sinogram& sino, std::span<const double> lambdas, double tolerance) {
    std::vector<double> angles(sino.n_phi());
    for (std::size_t m = 0; m < angles.size(); ++m)
        angles[m] = sino.angles().angle(m);
    return fst_check(img, sino, angles, lambdas, tolerance);
}

std::vector<double> lambda_grid(std::size_t count, double lambda_max) {
    std::vector<double> out(count);
    if (count == 1)
        return {0.0};
    for (std::size_t k = 0; k < count; ++k)
        out[k] = lambda_max * static_cast<double>(k) / static_cast<double>(count - 1);
    return out;
}

} // namespace urt
