#include "urt/hybrid.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "urt/radon.hpp"

namespace urt {

std::vector<double> uniform_positions(double start, double step, std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = start + static_cast<double>(i) * step;
    return out;
}

namespace {
void check_increasing(std::span<const double> x3) {
    if (x3.empty())
        throw GeometryError("need at least one x3 position");
    for (std::size_t n = 1; n < x3.size(); ++n)
        if (!(x3[n] > x3[n - 1]))
            throw GeometryError("x3 positions must be strictly increasing without duplicates");
}
} // namespace

VolumeStack make_slices(const CompositeScene3D& scene, const GridGeometry& geometry, std::span<const double> x3_positions) {
    check_increasing(x3_positions);
    scene.validate();
    std::vector<ImageGrid2D> slices;
    slices.reserve(x3_positions.size());
    for (double x3 : x3_positions)
        slices.push_back(rasterize(scene.section(x3), geometry));
    return VolumeStack({x3_positions.begin(), x3_positions.end()}, std::move(slices));
}

VolumeStack make_slices(const VolumeStack& stack, std::span<const double> x3_positions) {
    check_increasing(x3_positions);
    std::vector<ImageGrid2D> slices;
    for (double x3 : x3_positions) {
        const auto pos = stack.x3_positions();
        const auto it = std::find(pos.begin(), pos.end(), x3);
        if (it == pos.end())
            throw GeometryError("x3 position not present in the stack");
        slices.push_back(stack.slice(static_cast<std::size_t>(it - pos.begin())));
    }
    return VolumeStack({x3_positions.begin(), x3_positions.end()}, std::move(slices));
}

std::vector<double> dual_k_grid(std::span<const double> x3_positions) {
    check_increasing(x3_positions);
    const std::size_t n = x3_positions.size();
    if (n == 1)
        return {0.0};
    const double spacing = (x3_positions.back() - x3_positions.front()) / static_cast<double>(n - 1);
    for (std::size_t i = 1; i < n; ++i)
        if (std::abs((x3_positions[i] - x3_positions[i - 1]) - spacing) > 1e-9 * spacing)
            throw GeometryError("x3 positions are not uniformly spaced");
    std::vector<double> k(n);
    for (std::size_t m = 0; m < n; ++m)
        k[m] = 2.0 * std::numbers::pi * static_cast<double>(m) / (static_cast<double>(n) * spacing);
    return k;
}

HybridField hybrid_forward(const VolumeStack& stack, std::span<const double> k_values) {
    if (k_values.empty())
        throw GeometryError("need at least one k value");
    std::vector<ImageGrid2D> fields;
    fields.reserve(k_values.size());
    for (double k : k_values) {
        ImageGrid2D f(stack.geometry());
        for (std::size_t n = 0; n < stack.size(); ++n) {
            const cplx phase = std::polar(1.0, -k * stack.x3_positions()[n]);
            const auto src = stack.slice(n).values();
            auto dst = f.values();
            for (std::size_t p = 0; p < dst.size(); ++p)
                dst[p] += phase * src[p];
        }
        fields.push_back(std::move(f));
    }
    return HybridField({k_values.begin(), k_values.end()}, std::move(fields), HybridProvenance::series);
}

HybridField hybrid_continuous(const CompositeScene3D& scene, const GridGeometry& geometry,
                              std::span<const double> k_values) {
    if (k_values.empty())
        throw GeometryError("need at least one k value");
    scene.validate();
    std::vector<ImageGrid2D> fields;
    for (double k : k_values) {
        CompositeScene weighted;
        for (const auto& v : scene.terms) {
            auto term = v.term;
            const double s = v.x3_sigma;
            term.blob.amplitude *= s * std::sqrt(2.0 * std::numbers::pi) * std::exp(-0.5 * k * k * s * s) *
                                   std::polar(1.0, -k * v.x3_center);
            weighted.terms.push_back(term);
        }
        fields.push_back(rasterize(weighted, geometry));
    }
    return HybridField({k_values.begin(), k_values.end()}, std::move(fields), HybridProvenance::continuous);
}

namespace {
void check_k_grid(std::span<const double> k_values, std::span<const double> x3_positions) {
    const auto expected = dual_k_grid(x3_positions);
    bool ok = expected.size() == k_values.size();
    for (std::size_t m = 0; ok && m < expected.size(); ++m)
        ok = std::abs(expected[m] - k_values[m]) <= 1e-9 * (1.0 + std::abs(expected[m]));
    if (!ok) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "k grid must be k_m = 2 pi m / (N spacing) for the given x3 positions: [";
        for (std::size_t m = 0; m < expected.size(); ++m)
            msg << (m ? ", " : "") << expected[m];
        msg << "]";
        throw GeometryError(msg.str());
    }
}
} // namespace

VolumeStack hybrid_inverse_series(const HybridField& field, std::span<const double> x3_positions) {
    if (field.provenance() != HybridProvenance::series)
        throw GeometryError("inverse series needs a series-provenance hybrid field");
    check_k_grid(field.k_values(), x3_positions);
    const double inv_n = 1.0 / static_cast<double>(x3_positions.size());
    std::vector<ImageGrid2D> slices;
    for (double x3 : x3_positions) {
        ImageGrid2D s(field.geometry());
        for (std::size_t m = 0; m < field.size(); ++m) {
            const cplx phase = std::polar(1.0, field.k_values()[m] * x3);
            const auto src = field.field(m).values();
            auto dst = s.values();
            for (std::size_t p = 0; p < dst.size(); ++p)
                dst[p] += phase * src[p];
        }
        s *= inv_n;
        slices.push_back(std::move(s));
    }
    return VolumeStack({x3_positions.begin(), x3_positions.end()}, std::move(slices));
}

std::vector<Sinogram> hybrid_radon(const HybridField& field, const TauGrid& taus, const AngularRange& angles,
                                   double ray_step) {
    std::vector<Sinogram> out;
    out.reserve(field.size());
    for (const auto& f : field.fields())
        out.push_back(radon_transform(f, taus, angles, ray_step));
    return out;
}

VolumeReconstruction reconstruct_volume(std::span<const Sinogram> sinograms, std::span<const double> k_values,
                                        const GridGeometry& geometry, const RegParams& params,
                                        std::span<const double> x3_positions) {
    if (sinograms.size() != k_values.size())
        throw GeometryError("need one sinogram per k value");
    check_k_grid(k_values, x3_positions);
    std::vector<ImageGrid2D> totals;
    VolumeReconstruction out;
    for (const auto& sino : sinograms) {
        auto r = invert_universal(sino, geometry, params);
        out.fa_norms.push_back(l2_norm(r.f_a.values()));
        out.fs_norms.push_back(l2_norm(r.f_s.values()));
        totals.push_back(std::move(r.f_total));
    }
    out.field = HybridField({k_values.begin(), k_values.end()}, std::move(totals), HybridProvenance::series);
    out.stack = hybrid_inverse_series(out.field, x3_positions);
    return out;
}

} // namespace urt
