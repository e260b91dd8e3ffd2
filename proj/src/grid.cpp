#include "urt/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace urt {

GridGeometry GridGeometry::centered(std::size_t n, double extent) {
    GridGeometry g;
    g.nx = n;
    g.ny = n;
    g.dx = extent / static_cast<double>(n - 1);
    g.dy = g.dx;
    g.x_min = -0.5 * extent;
    g.y_min = -0.5 * extent;
    g.validate();
    return g;
}

double GridGeometry::bounding_radius() const {
    const double hx = 0.5 * (x_max() - x_min);
    const double hy = 0.5 * (y_max() - y_min);
    return std::hypot(hx, hy);
}

void GridGeometry::validate() const {
    if (nx < 2 || ny < 2)
        throw GeometryError("grid needs at least 2 samples per axis");
    if (!(dx > 0.0) || !(dy > 0.0))
        throw GeometryError("grid spacing must be positive");
    if (!std::isfinite(x_min) || !std::isfinite(y_min) || !std::isfinite(dx) || !std::isfinite(dy))
        throw GeometryError("grid geometry must be finite");
}

ImageGrid2D::ImageGrid2D(const GridGeometry& geometry) : geometry_(geometry), values_(geometry.size()) {
    geometry_.validate();
}

ImageGrid2D::ImageGrid2D(const GridGeometry& geometry, std::vector<cplx> values)
    : geometry_(geometry), values_(std::move(values)) {
    geometry_.validate();
    if (values_.size() != geometry_.size())
        throw GeometryError("image value count does not match nx*ny");
}

bool ImageGrid2D::real_valued() const {
    return std::all_of(values_.begin(), values_.end(), [](cplx v) { return v.imag() == 0.0; });
}

ImageGrid2D& ImageGrid2D::operator+=(const ImageGrid2D& other) {
    if (!(geometry_ == other.geometry_))
        throw GeometryError("cannot add images with different geometry");
    for (std::size_t k = 0; k < values_.size(); ++k)
        values_[k] += other.values_[k];
    return *this;
}

ImageGrid2D& ImageGrid2D::operator-=(const ImageGrid2D& other) {
    if (!(geometry_ == other.geometry_))
        throw GeometryError("cannot subtract images with different geometry");
    for (std::size_t k = 0; k < values_.size(); ++k)
        values_[k] -= other.values_[k];
    return *this;
}

ImageGrid2D& ImageGrid2D::operator*=(cplx factor) {
    for (auto& v : values_)
        v *= factor;
    return *this;
}

ImageGrid2D operator+(ImageGrid2D a, const ImageGrid2D& b) { return a += b; }
ImageGrid2D operator-(ImageGrid2D a, const ImageGrid2D& b) { return a -= b; }
ImageGrid2D operator*(cplx factor, ImageGrid2D a) { return a *= factor; }

cplx bilinear_sample(const ImageGrid2D& img, double x, double y) {
    const auto& g = img.geometry();
    const double fx = (x - g.x_min) / g.dx;
    const double fy = (y - g.y_min) / g.dy;
    const double last_x = static_cast<double>(g.nx - 1);
    const double last_y = static_cast<double>(g.ny - 1);
    if (!(fx >= 0.0 && fx <= last_x && fy >= 0.0 && fy <= last_y))
        return {0.0, 0.0};
    const auto i = std::min(static_cast<std::size_t>(fx), g.nx - 2);
    const auto j = std::min(static_cast<std::size_t>(fy), g.ny - 2);
    const double tx = fx - static_cast<double>(i);
    const double ty = fy - static_cast<double>(j);
    const cplx v00 = img.at(i, j);
    const cplx v10 = img.at(i + 1, j);
    const cplx v01 = img.at(i, j + 1);
    const cplx v11 = img.at(i + 1, j + 1);
    return (1.0 - ty) * ((1.0 - tx) * v00 + tx * v10) + ty * ((1.0 - tx) * v01 + tx * v11);
}

AngularRange AngularRange::full(std::size_t n_phi) {
    AngularRange r{0.0, 2.0 * std::numbers::pi, n_phi};
    r.validate();
    return r;
}

bool AngularRange::is_full() const { return std::abs(span() - 2.0 * std::numbers::pi) <= 1e-12; }

void AngularRange::validate() const {
    if (n_phi < 1)
        throw GeometryError("angular range needs at least one angle");
    const double s = span();
    if (!(s > 0.0) || s > 2.0 * std::numbers::pi + 1e-12)
        throw GeometryError("angular range span must lie in (0, 2*pi]");
}

TauGrid TauGrid::symmetric_covering(double radius, double d_tau) {
    const auto half = static_cast<std::size_t>(std::ceil(radius / d_tau - 1e-9));
    return symmetric(2 * half + 1, d_tau);
}

TauGrid TauGrid::symmetric(std::size_t n_tau, double d_tau) {
    TauGrid t{-0.5 * static_cast<double>(n_tau - 1) * d_tau, d_tau, n_tau};
    t.validate();
    return t;
}

void TauGrid::validate() const {
    if (n_tau < 1)
        throw GeometryError("tau grid needs at least one sample");
    if (!(d_tau > 0.0) || !std::isfinite(d_tau) || !std::isfinite(tau_min))
        throw GeometryError("tau spacing must be positive and finite");
}

Sinogram::Sinogram(const TauGrid& taus, const AngularRange& angles)
    : taus_(taus), angles_(angles), values_(taus.n_tau * angles.n_phi) {
    taus_.validate();
    angles_.validate();
}

Sinogram::Sinogram(const TauGrid& taus, const AngularRange& angles, std::vector<cplx> values)
    : taus_(taus), angles_(angles), values_(std::move(values)) {
    taus_.validate();
    angles_.validate();
    if (values_.size() != taus_.n_tau * angles_.n_phi)
        throw GeometryError("sinogram value count does not match n_tau*n_phi");
}

cplx Sinogram::interpolate(std::size_t m, double tau) const {
    const double f = (tau - taus_.tau_min) / taus_.d_tau;
    const double last = static_cast<double>(taus_.n_tau - 1);
    if (!(f >= 0.0 && f <= last))
        return {0.0, 0.0};
    if (taus_.n_tau == 1)
        return at(0, m);
    const auto t = std::min(static_cast<std::size_t>(f), taus_.n_tau - 2);
    const double w = f - static_cast<double>(t);
    return (1.0 - w) * at(t, m) + w * at(t + 1, m);
}

Sinogram& Sinogram::operator+=(const Sinogram& other) {
    if (!(taus_ == other.taus_) || !(angles_ == other.angles_))
        throw GeometryError("cannot add sinograms with different sampling");
    for (std::size_t k = 0; k < values_.size(); ++k)
        values_[k] += other.values_[k];
    return *this;
}

Sinogram& Sinogram::operator*=(cplx factor) {
    for (auto& v : values_)
        v *= factor;
    return *this;
}

VolumeStack::VolumeStack(std::vector<double> x3_positions, std::vector<ImageGrid2D> slices)
    : x3_(std::move(x3_positions)), slices_(std::move(slices)) {
    if (slices_.empty() || slices_.size() != x3_.size())
        throw GeometryError("volume needs one slice per x3 position and at least one slice");
    for (std::size_t n = 1; n < x3_.size(); ++n)
        if (!(x3_[n] > x3_[n - 1]))
            throw GeometryError("x3 positions must be strictly increasing");
    for (const auto& s : slices_)
        if (!(s.geometry() == slices_.front().geometry()))
            throw GeometryError("all volume slices must share one geometry");
}

HybridField::HybridField(std::vector<double> k_values, std::vector<ImageGrid2D> fields, HybridProvenance provenance)
    : k_(std::move(k_values)), fields_(std::move(fields)), provenance_(provenance) {
    if (fields_.empty() || fields_.size() != k_.size())
        throw GeometryError("hybrid field needs one field per k value and at least one k");
    for (const auto& f : fields_)
        if (!(f.geometry() == fields_.front().geometry()))
            throw GeometryError("all hybrid fields must share one geometry");
}

double rmse(std::span<const cplx> a, std::span<const cplx> b) {
    if (a.size() != b.size() || a.empty())
        throw GeometryError("rmse needs equally sized non-empty inputs");
    double acc = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        acc += std::norm(a[k] - b[k]);
    return std::sqrt(acc / static_cast<double>(a.size()));
}

double l2_norm(std::span<const cplx> v) {
    double acc = 0.0;
    for (auto x : v)
        acc += std::norm(x);
    return std::sqrt(acc);
}

double max_abs(std::span<const cplx> v) {
    double m = 0.0;
    for (auto x : v)
        m = std::max(m, std::abs(x));
    return m;
}

} // namespace urt
