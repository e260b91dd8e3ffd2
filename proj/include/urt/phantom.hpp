#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "urt/grid.hpp"

namespace urt {

/// Sharp quadrant indicator. quadrant_I keeps x >= 0 and y >= 0 (axes included),
/// quadrant_III keeps x < 0 and y < 0.
enum class RegionMask { none, quadrant_I, quadrant_III };

bool mask_contains(RegionMask mask, double x, double y);
const char* mask_name(RegionMask mask);

struct GaussianBlob {
    double cx = 0.0;
    double cy = 0.0;
    double sigma = 1.0;
    cplx amplitude{1.0, 0.0};

    [[nodiscard]] cplx value(double x, double y) const;
    bool operator==(const GaussianBlob&) const = default;
};

struct SceneTerm {
    GaussianBlob blob;
    RegionMask mask = RegionMask::none;
};

/// Sum of (optionally quadrant-masked) Gaussian blobs.
struct CompositeScene {
    std::vector<SceneTerm> terms;

    CompositeScene& add(const GaussianBlob& blob, RegionMask mask = RegionMask::none) {
        terms.push_back({blob, mask});
        return *this;
    }
    [[nodiscard]] bool has_masked_terms() const;
    [[nodiscard]] double max_sigma() const;
    /// Largest |amplitude| over the terms; an upper bound on the unmasked peak of any single blob.
    [[nodiscard]] double peak_amplitude() const;
    void validate() const;
};

class UnsupportedOracleError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Blobs are cut to zero beyond this many sigmas during rasterization.
inline constexpr double default_cutoff_sigmas = 6.0;

/// Samples the scene at the grid nodes with sharp indicators.
ImageGrid2D rasterize(const CompositeScene& scene, const GridGeometry& geometry,
                      double cutoff_sigmas = default_cutoff_sigmas);

/// Closed-form line integral of an unmasked scene along <n_phi, x> = tau.
cplx analytic_radon(const CompositeScene& scene, double tau, double phi);

/// Closed-form 2D Fourier transform (kernel exp(-i<q,x>), no prefactor) at q = lambda * n_phi.
cplx analytic_fourier(const CompositeScene& scene, double lambda, double phi);

/// Separable 3D term: blob(x1, x2) * mask(x1, x2) * exp(-(x3 - x3_center)^2 / (2 x3_sigma^2)).
struct VolumeTerm {
    SceneTerm term;
    double x3_center = 0.0;
    double x3_sigma = 1.0;
};

struct CompositeScene3D {
    std::vector<VolumeTerm> terms;

    /// The 2D scene of the section at height x3.
    [[nodiscard]] CompositeScene section(double x3) const;
    void validate() const;
};

class SceneParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses the scene description format: one blob per line as whitespace-separated key=value
/// pairs (cx, cy, sigma, amp_re, amp_im, mask in {none, I, III}, optional x3c and x3sigma),
/// optionally led by the word "blob". '#' starts a comment.
CompositeScene3D parse_scene(const std::string& text);
CompositeScene3D load_scene(const std::filesystem::path& path);
std::string format_scene(const CompositeScene3D& scene);

/// Drops the x3 profiles.
CompositeScene flatten(const CompositeScene3D& scene);

} // namespace urt
