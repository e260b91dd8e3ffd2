#include "urt/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace urt {

bool mask_contains(RegionMask mask, double x, double y) {
    switch (mask) {
    case RegionMask::none: return true;
    case RegionMask::quadrant_I: return x >= 0.0 && y >= 0.0;
    case RegionMask::quadrant_III: return x < 0.0 && y < 0.0;
    }
    return false;
}

const char* mask_name(RegionMask mask) {
    switch (mask) {
    case RegionMask::none: return "none";
    case RegionMask::quadrant_I: return "I";
    case RegionMask::quadrant_III: return "III";
    }
    return "none";
}

cplx GaussianBlob::value(double x, double y) const {
    const double ux = x - cx;
    const double uy = y - cy;
    return amplitude * std::exp(-(ux * ux + uy * uy) / (2.0 * sigma * sigma));
}

bool CompositeScene::has_masked_terms() const {
    return std::any_of(terms.begin(), terms.end(), [](const SceneTerm& t) { return t.mask != RegionMask::none; });
}

double CompositeScene::max_sigma() const {
    double s = 0.0;
    for (const auto& t : terms)
        s = std::max(s, t.blob.sigma);
    return s;
}

double CompositeScene::peak_amplitude() const {
    double a = 0.0;
    for (const auto& t : terms)
        a = std::max(a, std::abs(t.blob.amplitude));
    return a;
}

void CompositeScene::validate() const {
    for (const auto& t : terms)
        if (!(t.blob.sigma > 0.0) || !std::isfinite(t.blob.sigma))
            throw GeometryError("blob sigma must be positive");
}

ImageGrid2D rasterize(const CompositeScene& scene, const GridGeometry& geometry, double cutoff_sigmas) {
    scene.validate();
    ImageGrid2D img(geometry);
    for (const auto& term : scene.terms) {
        const auto& b = term.blob;
        const double cutoff2 = cutoff_sigmas * cutoff_sigmas * b.sigma * b.sigma;
        for (std::size_t j = 0; j < geometry.ny; ++j) {
            const double y = geometry.y(j);
            for (std::size_t i = 0; i < geometry.nx; ++i) {
                const double x = geometry.x(i);
                if (!mask_contains(term.mask, x, y))
                    continue;
                const double r2 = (x - b.cx) * (x - b.cx) + (y - b.cy) * (y - b.cy);
                if (r2 > cutoff2)
                    continue;
                img.at(i, j) += b.value(x, y);
            }
        }
    }
    return img;
}

namespace {
void require_unmasked(const CompositeScene& scene) {
    scene.validate();
    if (scene.has_masked_terms())
        throw UnsupportedOracleError("closed-form oracle only covers unmasked Gaussian terms");
}
} // namespace

cplx analytic_radon(const CompositeScene& scene, double tau, double phi) {
    require_unmasked(scene);
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    cplx acc{0.0, 0.0};
    for (const auto& t : scene.terms) {
        const auto& b = t.blob;
        const double u = tau - (c * b.cx + s * b.cy);
        acc += b.amplitude * (b.sigma * std::sqrt(2.0 * std::numbers::pi)) * std::exp(-u * u / (2.0 * b.sigma * b.sigma));
    }
    return acc;
}

cplx analytic_fourier(const CompositeScene& scene, double lambda, double phi) {
    require_unmasked(scene);
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    cplx acc{0.0, 0.0};
    for (const auto& t : scene.terms) {
        const auto& b = t.blob;
        const double s2 = b.sigma * b.sigma;
        const double shift = lambda * (c * b.cx + s * b.cy);
        acc += b.amplitude * (2.0 * std::numbers::pi * s2) * std::exp(-0.5 * lambda * lambda * s2) *
               std::polar(1.0, -shift);
    }
    return acc;
}

CompositeScene CompositeScene3D::section(double x3) const {
    CompositeScene out;
    for (const auto& v : terms) {
        const double u = x3 - v.x3_center;
        auto term = v.term;
        term.blob.amplitude *= std::exp(-u * u / (2.0 * v.x3_sigma * v.x3_sigma));
        out.terms.push_back(term);
    }
    return out;
}

void CompositeScene3D::validate() const {
    for (const auto& v : terms) {
        if (!(v.term.blob.sigma > 0.0))
            throw GeometryError("blob sigma must be positive");
        if (!(v.x3_sigma > 0.0))
            throw GeometryError("x3 profile sigma must be positive");
    }
}

CompositeScene flatten(const CompositeScene3D& scene) {
    CompositeScene out;
    for (const auto& v : scene.terms)
        out.terms.push_back(v.term);
    return out;
}

CompositeScene3D parse_scene(const std::string& text) {
    CompositeScene3D scene;
    std::istringstream lines(text);
    std::string line;
    int line_no = 0;
    while (std::getline(lines, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream tokens(line);
        std::string tok;
        VolumeTerm v;
        bool any = false;
        double amp_re = 1.0, amp_im = 0.0;
        while (tokens >> tok) {
            if (!any && tok == "blob") {
                any = true;
                continue;
            }
            any = true;
            const auto eq = tok.find('=');
            if (eq == std::string::npos)
                throw SceneParseError("line " + std::to_string(line_no) + ": expected key=value, got '" + tok + "'");
            const auto key = tok.substr(0, eq);
            const auto val = tok.substr(eq + 1);
            if (key == "mask") {
                if (val == "none")
                    v.term.mask = RegionMask::none;
                else if (val == "I")
                    v.term.mask = RegionMask::quadrant_I;
                else if (val == "III")
                    v.term.mask = RegionMask::quadrant_III;
                else
                    throw SceneParseError("line " + std::to_string(line_no) + ": unknown mask '" + val + "'");
                continue;
            }
            double num = 0.0;
            try {
                std::size_t used = 0;
                num = std::stod(val, &used);
                if (used != val.size())
                    throw std::invalid_argument(val);
            } catch (const std::exception&) {
                throw SceneParseError("line " + std::to_string(line_no) + ": bad number for '" + key + "'");
            }
            if (key == "cx")
                v.term.blob.cx = num;
            else if (key == "cy")
                v.term.blob.cy = num;
            else if (key == "sigma")
                v.term.blob.sigma = num;
            else if (key == "amp_re")
                amp_re = num;
            else if (key == "amp_im")
                amp_im = num;
            else if (key == "x3c")
                v.x3_center = num;
            else if (key == "x3sigma")
                v.x3_sigma = num;
            else
                throw SceneParseError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
        if (!any)
            continue;
        v.term.blob.amplitude = {amp_re, amp_im};
        if (!(v.term.blob.sigma > 0.0) || !(v.x3_sigma > 0.0))
            throw SceneParseError("line " + std::to_string(line_no) + ": sigma must be positive");
        scene.terms.push_back(v);
    }
    if (scene.terms.empty())
        throw SceneParseError("scene lists no blobs");
    return scene;
}

CompositeScene3D load_scene(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw SceneParseError("cannot open scene file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scene(buf.str());
}

std::string format_scene(const CompositeScene3D& scene) {
    std::ostringstream out;
    out.precision(17);
    for (const auto& v : scene.terms) {
        const auto& b = v.term.blob;
        out << "blob cx=" << b.cx << " cy=" << b.cy << " sigma=" << b.sigma << " amp_re=" << b.amplitude.real()
            << " amp_im=" << b.amplitude.imag() << " mask=" << mask_name(v.term.mask) << " x3c=" << v.x3_center
            << " x3sigma=" << v.x3_sigma << '\n';
    }
    return out.str();
}

} // namespace urt
