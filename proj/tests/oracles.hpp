#pragma once

// Reference quadratures used only by the tests. They share no code with the library.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <random>

namespace oracle {

using cplx = std::complex<double>;

/// Composite Simpson rule on [a, b] with n (even) panels.
template <typename T>
T simpson(const std::function<T(double)>& f, double a, double b, std::size_t n) {
    if (n % 2 != 0)
        ++n;
    const double h = (b - a) / static_cast<double>(n);
    T acc = f(a) + f(b);
    for (std::size_t k = 1; k < n; ++k)
        acc += (k % 2 == 1 ? 4.0 : 2.0) * f(a + static_cast<double>(k) * h);
    return acc * (h / 3.0);
}

inline double simpson_real(const std::function<double(double)>& f, double a, double b, std::size_t n) {
    return simpson<double>(f, a, b, n);
}

inline cplx simpson_cplx(const std::function<cplx(double)>& f, double a, double b, std::size_t n) {
    return simpson<cplx>(f, a, b, n);
}

/// Line integral of an isotropic Gaussian blob along <n_phi, x> = tau by Simpson in arc length.
inline double gaussian_line_integral(double cx, double cy, double sigma, double tau, double phi) {
    const double c = std::cos(phi), s = std::sin(phi);
    auto f = [&](double t) {
        const double x = tau * c - t * s - cx;
        const double y = tau * s + t * c - cy;
        return std::exp(-(x * x + y * y) / (2.0 * sigma * sigma));
    };
    const double centre = -cx * s + cy * c;
    return simpson_real(f, centre - 12.0 * sigma, centre + 12.0 * sigma, 4000);
}

/// -FP int g(eta) / eta^2 d eta for g(eta) = exp(-(s + eta)^2 / 2), evaluated on the frequency side
/// as sqrt(2 pi) int_0^inf lambda exp(-lambda^2 / 2) cos(lambda s) d lambda.
inline double gaussian_finite_part(double s) {
    auto f = [&](double l) { return l * std::exp(-0.5 * l * l) * std::cos(l * s); };
    return std::sqrt(2.0 * M_PI) * simpson_real(f, 0.0, 14.0, 20000);
}

inline std::mt19937_64& rng() {
    static std::mt19937_64 engine(20261015);
    return engine;
}

inline double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng()); }

} // namespace oracle
