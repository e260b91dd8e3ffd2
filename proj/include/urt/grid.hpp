#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace urt {

using cplx = std::complex<double>;

/// Thrown when a domain object is constructed with parameters that break its invariants.
class GeometryError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Sampling geometry of a 2D grid. Sample (i, j) sits at (x_min + i*dx, y_min + j*dy).
struct GridGeometry {
    std::size_t nx = 2;
    std::size_t ny = 2;
    double x_min = 0.0;
    double y_min = 0.0;
    double dx = 1.0;
    double dy = 1.0;

    /// Square grid of n x n nodes spanning [-extent/2, extent/2] on both axes.
    static GridGeometry centered(std::size_t n, double extent);

    [[nodiscard]] double x(std::size_t i) const { return x_min + static_cast<double>(i) * dx; }
    [[nodiscard]] double y(std::size_t j) const { return y_min + static_cast<double>(j) * dy; }
    [[nodiscard]] double x_max() const { return x(nx - 1); }
    [[nodiscard]] double y_max() const { return y(ny - 1); }
    [[nodiscard]] double center_x() const { return 0.5 * (x_min + x_max()); }
    [[nodiscard]] double center_y() const { return 0.5 * (y_min + y_max()); }
    /// Radius of the circle circumscribing the physical extent, about the grid center.
    [[nodiscard]] double bounding_radius() const;
    [[nodiscard]] std::size_t size() const { return nx * ny; }

    void validate() const;
    bool operator==(const GridGeometry&) const = default;
};

/// Uniformly sampled complex field on a rectangle. Values are stored row-major with x fastest.
class ImageGrid2D {
public:
    ImageGrid2D() = default;
    explicit ImageGrid2D(const GridGeometry& geometry);
    ImageGrid2D(const GridGeometry& geometry, std::vector<cplx> values);

    [[nodiscard]] const GridGeometry& geometry() const { return geometry_; }
    [[nodiscard]] std::size_t nx() const { return geometry_.nx; }
    [[nodiscard]] std::size_t ny() const { return geometry_.ny; }

    [[nodiscard]] cplx at(std::size_t i, std::size_t j) const { return values_[j * geometry_.nx + i]; }
    cplx& at(std::size_t i, std::size_t j) { return values_[j * geometry_.nx + i]; }

    [[nodiscard]] std::span<const cplx> values() const { return values_; }
    std::span<cplx> values() { return values_; }

    /// True iff every sample has an imaginary part of exactly zero.
    [[nodiscard]] bool real_valued() const;

    ImageGrid2D& operator+=(const ImageGrid2D& other);
    ImageGrid2D& operator-=(const ImageGrid2D& other);
    ImageGrid2D& operator*=(cplx factor);

private:
    GridGeometry geometry_;
    std::vector<cplx> values_;
};

ImageGrid2D operator+(ImageGrid2D a, const ImageGrid2D& b);
ImageGrid2D operator-(ImageGrid2D a, const ImageGrid2D& b);
ImageGrid2D operator*(cplx factor, ImageGrid2D a);

/// Bilinear interpolation at (x, y); exactly zero outside the physical extent.
cplx bilinear_sample(const ImageGrid2D& img, double x, double y);

/// Angular sampling phi_m = phi_min + m * (phi_max - phi_min) / n_phi, endpoint excluded.
struct AngularRange {
    double phi_min = 0.0;
    double phi_max = 0.0;
    std::size_t n_phi = 1;

    /// Angular measure normalization applied by the inversion integrals.
    static constexpr double normalization = 1.0 / (4.0 * 3.14159265358979323846 * 3.14159265358979323846);

    static AngularRange full(std::size_t n_phi);

    [[nodiscard]] double span() const { return phi_max - phi_min; }
    [[nodiscard]] double step() const { return span() / static_cast<double>(n_phi); }
    [[nodiscard]] double angle(std::size_t m) const { return phi_min + static_cast<double>(m) * step(); }
    [[nodiscard]] bool is_full() const;

    void validate() const;
    bool operator==(const AngularRange&) const = default;
};

/// Uniform tau sampling tau_t = tau_min + t * d_tau.
struct TauGrid {
    double tau_min = 0.0;
    double d_tau = 1.0;
    std::size_t n_tau = 1;

    /// Grid of spacing d_tau symmetric about zero that covers [-radius, radius].
    static TauGrid symmetric_covering(double radius, double d_tau);
    /// Symmetric grid with n_tau samples: tau_min = -(n_tau - 1) * d_tau / 2.
    static TauGrid symmetric(std::size_t n_tau, double d_tau);

    [[nodiscard]] double tau(std::size_t t) const { return tau_min + static_cast<double>(t) * d_tau; }
    [[nodiscard]] double tau_max() const { return tau(n_tau - 1); }

    void validate() const;
    bool operator==(const TauGrid&) const = default;
};

/// Complex Radon image sampled on a (tau, phi) grid. values[m * n_tau + t] holds (tau_t, phi_m).
class Sinogram {
public:
    Sinogram() = default;
    Sinogram(const TauGrid& taus, const AngularRange& angles);
    Sinogram(const TauGrid& taus, const AngularRange& angles, std::vector<cplx> values);

    [[nodiscard]] const TauGrid& taus() const { return taus_; }
    [[nodiscard]] const AngularRange& angles() const { return angles_; }
    [[nodiscard]] std::size_t n_tau() const { return taus_.n_tau; }
    [[nodiscard]] std::size_t n_phi() const { return angles_.n_phi; }

    [[nodiscard]] cplx at(std::size_t t, std::size_t m) const { return values_[m * taus_.n_tau + t]; }
    cplx& at(std::size_t t, std::size_t m) { return values_[m * taus_.n_tau + t]; }

    [[nodiscard]] std::span<const cplx> column(std::size_t m) const {
        return std::span<const cplx>(values_).subspan(m * taus_.n_tau, taus_.n_tau);
    }
    std::span<cplx> column(std::size_t m) { return std::span<cplx>(values_).subspan(m * taus_.n_tau, taus_.n_tau); }

    [[nodiscard]] std::span<const cplx> values() const { return values_; }
    std::span<cplx> values() { return values_; }

    /// Linear interpolation along tau in column m; zero outside the stored tau range.
    [[nodiscard]] cplx interpolate(std::size_t m, double tau) const;

    Sinogram& operator+=(const Sinogram& other);
    Sinogram& operator*=(cplx factor);

private:
    TauGrid taus_;
    AngularRange angles_;
    std::vector<cplx> values_;
};

/// Transverse sections f(., ., x3_n) of a volume, all on the same 2D geometry.
class VolumeStack {
public:
    VolumeStack() = default;
    VolumeStack(std::vector<double> x3_positions, std::vector<ImageGrid2D> slices);

    [[nodiscard]] std::span<const double> x3_positions() const { return x3_; }
    [[nodiscard]] std::span<const ImageGrid2D> slices() const { return slices_; }
    [[nodiscard]] const ImageGrid2D& slice(std::size_t n) const { return slices_[n]; }
    [[nodiscard]] std::size_t size() const { return slices_.size(); }
    [[nodiscard]] const GridGeometry& geometry() const { return slices_.front().geometry(); }

private:
    std::vector<double> x3_;
    std::vector<ImageGrid2D> slices_;
};

enum class HybridProvenance { continuous, series };

/// Complex fields F(x1, x2; k) indexed by conjugate momentum k.
class HybridField {
public:
    HybridField() = default;
    HybridField(std::vector<double> k_values, std::vector<ImageGrid2D> fields, HybridProvenance provenance);

    [[nodiscard]] std::span<const double> k_values() const { return k_; }
    [[nodiscard]] std::span<const ImageGrid2D> fields() const { return fields_; }
    [[nodiscard]] const ImageGrid2D& field(std::size_t m) const { return fields_[m]; }
    [[nodiscard]] std::size_t size() const { return fields_.size(); }
    [[nodiscard]] HybridProvenance provenance() const { return provenance_; }
    [[nodiscard]] const GridGeometry& geometry() const { return fields_.front().geometry(); }

private:
    std::vector<double> k_;
    std::vector<ImageGrid2D> fields_;
    HybridProvenance provenance_ = HybridProvenance::series;
};

/// Root-mean-square of |a - b| over all samples.
double rmse(std::span<const cplx> a, std::span<const cplx> b);
/// Euclidean norm sqrt(sum |v|^2).
double l2_norm(std::span<const cplx> v);
double max_abs(std::span<const cplx> v);

} // namespace urt
