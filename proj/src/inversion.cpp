#include "urt/inversion.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "urt/parallel.hpp"

namespace urt {

using std::numbers::pi;

const char* backend_name(Backend backend) {
    return backend == Backend::ramp_filter ? "ramp_filter" : "fp_quadrature";
}

Backend parse_backend(const std::string& name) {
    if (name == "ramp_filter")
        return Backend::ramp_filter;
    if (name == "fp_quadrature")
        return Backend::fp_quadrature;
    throw std::invalid_argument("unknown backend '" + name + "'");
}

RegParams RegParams::defaults(const TauGrid& taus) { return {2.0 * taus.d_tau, taus.d_tau, Backend::ramp_filter}; }

void RegParams::validate(const TauGrid& taus) const {
    if (!(epsilon > 0.0))
        throw GeometryError("epsilon must be positive");
    if (!(fa_step > 0.0) || fa_step < taus.d_tau * (1.0 - 1e-12))
        throw GeometryError("fa_step must be at least d_tau");
}

double Reconstruction::fa_ratio() const {
    const double s = l2_norm(f_s.values());
    const double a = l2_norm(f_a.values());
    if (s == 0.0)
        return a == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return a / s;
}

cplx delta_plus(double eta, double epsilon) { return 1.0 / cplx(eta, -epsilon); }

cplx regularized_kernel(double eta, double epsilon, double lambda_max) {
    // With a = -i (eta - i eps): integral_0^L lambda e^{a lambda} = (e^{aL} (aL - 1) + 1) / a^2.
    const cplx a = cplx(0.0, -1.0) * cplx(eta, -epsilon);
    const cplx z = a * lambda_max;
    if (std::abs(z) < 1e-2) {
        // L^2 * sum_n z^n / (n! (n + 2))
        cplx term{1.0, 0.0};
        cplx sum{0.5, 0.0};
        for (int n = 1; n < 12; ++n) {
            term *= z / static_cast<double>(n);
            sum += term / static_cast<double>(n + 2);
        }
        return lambda_max * lambda_max * sum;
    }
    return (std::exp(z) * (z - 1.0) + 1.0) / (a * a);
}

std::vector<cplx> ramp_filter_column(std::span<const cplx> column, double d_tau) {
    // Ram-Lak taps of (1/2pi) int_{|lambda|<pi/d} |lambda| e^{i lambda tau}: pi/(2d^2) at 0,
    // -2/(pi n^2 d^2) at odd n, 0 at even n. The -FP/eta^2 kernel is pi times that filter.
    const auto n = static_cast<long long>(column.size());
    std::vector<cplx> out(column.size());
    for (long long j = 0; j < n; ++j) {
        cplx odd{0.0, 0.0};
        for (long long k = 1; k < n; k += 2) {
            const double w = 1.0 / static_cast<double>(k * k);
            if (j - k >= 0)
                odd += w * column[static_cast<std::size_t>(j - k)];
            if (j + k < n)
                odd += w * column[static_cast<std::size_t>(j + k)];
        }
        out[static_cast<std::size_t>(j)] =
            (pi * pi / (2.0 * d_tau)) * column[static_cast<std::size_t>(j)] - (2.0 / d_tau) * odd;
    }
    return out;
}

std::vector<cplx> finite_part_column(std::span<const cplx> column, double d_tau) {
    const auto n = static_cast<long long>(column.size());
    const long long reach = n - 1;
    const double window = static_cast<double>(reach) * d_tau;
    auto at = [&](long long k) -> cplx {
        return (k >= 0 && k < n) ? column[static_cast<std::size_t>(k)] : cplx{0.0, 0.0};
    };
    std::vector<cplx> out(column.size());
    for (long long j = 0; j < n; ++j) {
        const cplx g0 = at(j);
        const cplx g1 = (at(j + 1) - at(j - 1)) / (2.0 * d_tau);
        // Removable point eta = 0: the integrand tends to g''(0)/2.
        cplx acc = (at(j + 1) - 2.0 * g0 + at(j - 1)) / (2.0 * d_tau * d_tau);
        for (long long m = 1; m <= reach; ++m) {
            const double eta = static_cast<double>(m) * d_tau;
            const double w = (m == reach) ? 0.5 : 1.0;
            const cplx plus = at(j + m) - g0 - eta * g1;
            const cplx minus = at(j - m) - g0 + eta * g1;
            acc += w * (plus + minus) / (eta * eta);
        }
        const cplx finite_part = acc * d_tau - 2.0 * g0 / window;
        out[static_cast<std::size_t>(j)] = -finite_part;
    }
    return out;
}

InversionImage backproject(const Sinogram& filtered, const GridGeometry& geometry) {
    geometry.validate();
    const auto& angles = filtered.angles();
    const auto& taus = filtered.taus();
    const double weight = AngularRange::normalization * angles.step();
    std::vector<double> cs(angles.n_phi), sn(angles.n_phi);
    for (std::size_t m = 0; m < angles.n_phi; ++m) {
        cs[m] = std::cos(angles.angle(m));
        sn[m] = std::sin(angles.angle(m));
    }
    InversionImage out{ImageGrid2D(geometry), {}};
    std::vector<char> flags(geometry.size(), 0);
    parallel_for(geometry.ny, [&](std::size_t j) {
        const double y = geometry.y(j);
        for (std::size_t i = 0; i < geometry.nx; ++i) {
            const double x = geometry.x(i);
            cplx acc{0.0, 0.0};
            for (std::size_t m = 0; m < angles.n_phi; ++m) {
                const double s = x * cs[m] + y * sn[m];
                if (s < taus.tau_min || s > taus.tau_max())
                    flags[j * geometry.nx + i] = 1;
                acc += filtered.interpolate(m, s);
            }
            out.image.at(i, j) = weight * acc;
        }
    });
    for (std::size_t j = 0; j < geometry.ny; ++j)
        for (std::size_t i = 0; i < geometry.nx; ++i)
            if (flags[j * geometry.nx + i])
                out.flagged.push_back({i, j});
    return out;
}

namespace {

template <typename ColumnFilter>
Sinogram filter_sinogram(const Sinogram& sino, ColumnFilter&& filter) {
    Sinogram out(sino.taus(), sino.angles());
    parallel_for(sino.n_phi(), [&](std::size_t m) {
        const auto q = filter(sino.column(m));
        std::copy(q.begin(), q.end(), out.column(m).begin());
    });
    return out;
}

} // namespace

InversionImage invert_fs(const Sinogram& sino, const GridGeometry& geometry, const RegParams& params) {
    params.validate(sino.taus());
    const double d = sino.taus().d_tau;
    const auto filtered = filter_sinogram(sino, [&](std::span<const cplx> col) {
        return params.backend == Backend::ramp_filter ? ramp_filter_column(col, d) : finite_part_column(col, d);
    });
    return backproject(filtered, geometry);
}

InversionImage invert_fa(const Sinogram& sino, const GridGeometry& geometry, const RegParams& params) {
    params.validate(sino.taus());
    geometry.validate();
    const auto& angles = sino.angles();
    const auto& taus = sino.taus();
    const double h = params.fa_step;
    const cplx weight = cplx(0.0, -pi) * (AngularRange::normalization * angles.step());
    std::vector<double> cs(angles.n_phi), sn(angles.n_phi);
    for (std::size_t m = 0; m < angles.n_phi; ++m) {
        cs[m] = std::cos(angles.angle(m));
        sn[m] = std::sin(angles.angle(m));
    }
    InversionImage out{ImageGrid2D(geometry), {}};
    std::vector<char> flags(geometry.size(), 0);
    parallel_for(geometry.ny, [&](std::size_t j) {
        const double y = geometry.y(j);
        for (std::size_t i = 0; i < geometry.nx; ++i) {
            const double x = geometry.x(i);
            cplx acc{0.0, 0.0};
            for (std::size_t m = 0; m < angles.n_phi; ++m) {
                const double s = x * cs[m] + y * sn[m];
                if (s < taus.tau_min || s > taus.tau_max())
                    flags[j * geometry.nx + i] = 1;
                acc += (sino.interpolate(m, s + h) - sino.interpolate(m, s - h)) / (2.0 * h);
            }
            out.image.at(i, j) = weight * acc;
        }
    });
    for (std::size_t j = 0; j < geometry.ny; ++j)
        for (std::size_t i = 0; i < geometry.nx; ++i)
            if (flags[j * geometry.nx + i])
                out.flagged.push_back({i, j});
    return out;
}

Reconstruction invert_universal(const Sinogram& sino, const GridGeometry& geometry, const RegParams& params) {
    auto fs = invert_fs(sino, geometry, params);
    auto fa = invert_fa(sino, geometry, params);
    Reconstruction r{std::move(fs.image), std::move(fa.image), ImageGrid2D(geometry), std::move(fs.flagged)};
    r.f_total = r.f_s + r.f_a;
    return r;
}

ImageGrid2D epsilon_lambda_reconstruct(const Sinogram& sino, const GridGeometry& geometry, double epsilon,
                                       double lambda_max) {
    if (!(epsilon > 0.0))
        throw GeometryError("epsilon must be positive");
    const double d = sino.taus().d_tau;
    if (lambda_max <= 0.0)
        lambda_max = pi / d;
    const auto n = static_cast<long long>(sino.n_tau());
    const long long reach = n - 1;
    std::vector<cplx> kernel(static_cast<std::size_t>(2 * reach + 1));
    for (long long m = -reach; m <= reach; ++m) {
        const double w = (m == reach || m == -reach) ? 0.5 : 1.0;
        kernel[static_cast<std::size_t>(m + reach)] =
            w * d * regularized_kernel(static_cast<double>(m) * d, epsilon, lambda_max);
    }
    const auto filtered = filter_sinogram(sino, [&](std::span<const cplx> col) {
        std::vector<cplx> q(col.size());
        for (long long j = 0; j < n; ++j) {
            cplx acc{0.0, 0.0};
            for (long long k = 0; k < n; ++k)
                acc += kernel[static_cast<std::size_t>(k - j + reach)] * col[static_cast<std::size_t>(k)];
            q[static_cast<std::size_t>(j)] = acc;
        }
        return q;
    });
    return backproject(filtered, geometry).image;
}

} // namespace urt
