#include "urt/holonomy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "urt/radon.hpp"

namespace urt {

using std::numbers::pi;

ShiftPath ShiftPath::full_turn() { return {{2.0 * pi}}; }
ShiftPath ShiftPath::half_turns() { return {{pi, pi}}; }

void ShiftPath::validate() const {
    if (steps.empty())
        throw std::invalid_argument("shift path needs at least one step");
    double total = 0.0;
    for (double s : steps) {
        if (s != pi && s != 2.0 * pi)
            throw std::invalid_argument("shift steps must be pi or 2*pi");
        total += s;
    }
    if (std::abs(total - 2.0 * pi) > 1e-12)
        throw std::invalid_argument("shift path must total 2*pi");
}

ProbeWindow ProbeWindow::make(double tau_lo, double tau_hi, std::size_t n_tau, double phi_lo, double phi_hi,
                              std::size_t n_phi) {
    if (n_tau < 1 || !(tau_hi > tau_lo))
        throw std::invalid_argument("probe tau range must be non-empty");
    const double d = (tau_hi - tau_lo) / static_cast<double>(n_tau);
    ProbeWindow w{TauGrid{tau_lo + d, d, n_tau}, AngularRange{phi_lo, phi_hi, n_phi}};
    w.validate();
    return w;
}

void ProbeWindow::validate() const {
    taus.validate();
    angles.validate();
    if (!(taus.tau_min > 0.0))
        throw std::invalid_argument("probe window needs tau > 0");
    if (angles.phi_min < 0.0 || angles.phi_max > 0.5 * pi + 1e-12)
        throw std::invalid_argument("probe window must lie within [0, pi/2]");
}

double default_leak_tol(const CompositeScene& scene, const GridGeometry& geometry) {
    const double peak = max_abs(rasterize(scene, geometry).values());
    return 1e-6 * peak * 2.0 * geometry.bounding_radius();
}

bool line_meets_region(RegionMask mask, double tau, double phi) {
    if (mask == RegionMask::none)
        return true;
    // Snap round-off in cos/sin of shifted angles so axis-aligned directions classify exactly.
    auto snap = [](double v) { return std::abs(v) < 1e-12 ? 0.0 : v; };
    const double c = snap(std::cos(phi));
    const double s = snap(std::sin(phi));
    const bool nonneg = c >= 0.0 && s >= 0.0;
    const bool nonpos = c <= 0.0 && s <= 0.0;
    if (mask == RegionMask::quadrant_I) {
        // <n, x> over the closed first quadrant: [0, inf) if n >= 0, (-inf, 0] if n <= 0, else R.
        if (nonneg)
            return tau >= 0.0;
        if (nonpos)
            return tau <= 0.0;
        return true;
    }
    // Open third quadrant: (-inf, 0) if n >= 0, (0, inf) if n <= 0, else R.
    if (nonneg)
        return tau < 0.0;
    if (nonpos)
        return tau > 0.0;
    return true;
}

cplx radon_masked(const CompositeScene& scene, double tau, double phi, const GridGeometry& geometry) {
    cplx acc{0.0, 0.0};
    const double step = default_ray_step(geometry);
    for (const auto& term : scene.terms) {
        if (!line_meets_region(term.mask, tau, phi))
            continue;
        CompositeScene single;
        single.terms.push_back(term);
        acc += radon_point(rasterize(single, geometry), tau, phi, step);
    }
    return acc;
}

namespace {

Sinogram term_column(const ImageGrid2D& img, RegionMask mask, const ProbeWindow& probe, double shift) {
    AngularRange shifted{probe.angles.phi_min + shift, probe.angles.phi_max + shift, probe.angles.n_phi};
    Sinogram col(probe.taus, shifted);
    const double step = default_ray_step(img.geometry());
    for (std::size_t m = 0; m < shifted.n_phi; ++m) {
        const double phi = shifted.angle(m);
        for (std::size_t t = 0; t < probe.taus.n_tau; ++t) {
            const double tau = probe.taus.tau(t);
            col.at(t, m) = line_meets_region(mask, tau, phi) ? radon_point(img, tau, phi, step) : cplx{0.0, 0.0};
        }
    }
    return col;
}

} // namespace

PathEvaluation evaluate_path(const CompositeScene& scene, const ShiftPath& path, const ProbeWindow& probe,
                             const GridGeometry& geometry, double leak_tol) {
    path.validate();
    probe.validate();
    scene.validate();
    if (leak_tol <= 0.0)
        leak_tol = default_leak_tol(scene, geometry);

    std::vector<ImageGrid2D> images;
    images.reserve(scene.terms.size());
    for (const auto& term : scene.terms) {
        CompositeScene single;
        single.terms.push_back(term);
        images.push_back(rasterize(single, geometry));
    }

    PathEvaluation eval;
    for (std::size_t k = 0; k < scene.terms.size(); ++k)
        eval.surviving_terms.push_back(k);

    double shift = 0.0;
    for (double step : path.steps) {
        shift += step;
        PathStep rec;
        rec.shift = shift;
        AngularRange shifted{probe.angles.phi_min + shift, probe.angles.phi_max + shift, probe.angles.n_phi};
        rec.column = Sinogram(probe.taus, shifted);
        for (std::size_t k : eval.surviving_terms) {
            const auto& term = scene.terms[k];
            auto col = term_column(images[k], term.mask, probe, shift);
            const double peak = max_abs(col.values());
            rec.term_peaks.push_back(peak);
            // Only an indicator can make a term vanish on the window; unmasked terms always survive.
            if (term.mask != RegionMask::none && peak <= leak_tol)
                continue;
            rec.surviving.push_back(k);
            rec.column += col;
        }
        eval.surviving_terms = rec.surviving;
        eval.steps.push_back(std::move(rec));
    }
    eval.final_column = eval.steps.back().column;
    return eval;
}

double window_norm(const Sinogram& column) {
    return l2_norm(column.values()) * std::sqrt(column.taus().d_tau * column.angles().step());
}

HolonomyReport check_holonomy(const CompositeScene& scene, const ProbeWindow& probe, const GridGeometry& geometry,
                              double leak_tol) {
    if (leak_tol <= 0.0)
        leak_tol = default_leak_tol(scene, geometry);
    HolonomyReport rep;
    rep.leak_tol = leak_tol;
    rep.threshold = 10.0 * leak_tol;
    rep.full_turn = evaluate_path(scene, ShiftPath::full_turn(), probe, geometry, leak_tol);
    rep.half_turns = evaluate_path(scene, ShiftPath::half_turns(), probe, geometry, leak_tol);
    const auto a = rep.full_turn.final_column.values();
    const auto b = rep.half_turns.final_column.values();
    std::vector<cplx> diff(a.size());
    for (std::size_t k = 0; k < a.size(); ++k)
        diff[k] = a[k] - b[k];
    rep.discrepancy_norm =
        l2_norm(diff) * std::sqrt(probe.taus.d_tau * probe.angles.step());
    rep.pass = rep.discrepancy_norm > rep.threshold;
    return rep;
}

namespace {

bool same_blob(const GaussianBlob& a, const GaussianBlob& b, double tol) {
    return std::abs(a.cx - b.cx) <= tol && std::abs(a.cy - b.cy) <= tol && std::abs(a.sigma - b.sigma) <= tol &&
           std::abs(a.amplitude - b.amplitude) <= tol;
}

} // namespace

DefectDecomposition decompose_defect_scene(const CompositeScene& scene_tilde) {
    constexpr double tol = 1e-12;
    std::vector<GaussianBlob> first, third;
    for (const auto& t : scene_tilde.terms) {
        if (t.mask == RegionMask::none)
            throw UnsupportedAssumptionError("defect scenes hold only quadrant-masked terms");
        (t.mask == RegionMask::quadrant_I ? first : third).push_back(t.blob);
    }
    DefectDecomposition out;
    std::vector<bool> used(first.size(), false);
    for (const auto& b : third) {
        bool matched = false;
        for (std::size_t k = 0; k < first.size() && !matched; ++k) {
            if (!used[k] && same_blob(first[k], b, tol)) {
                used[k] = true;
                matched = true;
            }
        }
        if (!matched)
            throw UnsupportedAssumptionError("background term under Theta_III has no Theta_I partner");
        out.background.add(b);
    }
    for (std::size_t k = 0; k < first.size(); ++k)
        if (!used[k])
            out.defect.add(first[k], RegionMask::quadrant_I);

    // Central symmetry g2(-x) = g2(x): every background blob needs a mirror blob at -c.
    std::vector<bool> paired(out.background.terms.size(), false);
    for (std::size_t a = 0; a < out.background.terms.size(); ++a) {
        if (paired[a])
            continue;
        const auto& blob = out.background.terms[a].blob;
        GaussianBlob mirror = blob;
        mirror.cx = -blob.cx;
        mirror.cy = -blob.cy;
        if (same_blob(blob, mirror, tol)) {
            paired[a] = true;
            continue;
        }
        bool found = false;
        for (std::size_t b = a + 1; b < out.background.terms.size() && !found; ++b) {
            if (!paired[b] && same_blob(out.background.terms[b].blob, mirror, tol)) {
                paired[a] = paired[b] = true;
                found = true;
            }
        }
        if (!found)
            throw UnsupportedAssumptionError("background is not centrally symmetric");
    }
    return out;
}

Sinogram extract_defect(const CompositeScene& scene_tilde, const ProbeWindow& probe, const GridGeometry& geometry) {
    probe.validate();
    decompose_defect_scene(scene_tilde);
    const double tol = 1e-9 * std::max(geometry.dx, geometry.dy);
    if (std::abs(geometry.x_min + geometry.x_max()) > tol || std::abs(geometry.y_min + geometry.y_max()) > tol)
        throw UnsupportedAssumptionError("defect extraction needs a grid symmetric about the origin");

    const auto img = rasterize(scene_tilde, geometry);
    const double step = default_ray_step(geometry);
    Sinogram defect(probe.taus, probe.angles);
    for (std::size_t m = 0; m < probe.angles.n_phi; ++m) {
        const double phi = probe.angles.angle(m);
        for (std::size_t t = 0; t < probe.taus.n_tau; ++t) {
            const double tau = probe.taus.tau(t);
            defect.at(t, m) = radon_point(img, tau, phi, step) - radon_point(img, tau, phi + pi, step);
        }
    }
    return defect;
}

namespace {

// Quadratic through (x_k, y_k), k = 0..2, evaluated at 0.
cplx extrapolate_to_zero(const double x[3], const cplx y[3]) {
    cplx acc{0.0, 0.0};
    for (int k = 0; k < 3; ++k) {
        double w = 1.0;
        for (int l = 0; l < 3; ++l)
            if (l != k)
                w *= (0.0 - x[l]) / (x[k] - x[l]);
        acc += w * y[k];
    }
    return acc;
}

} // namespace

cplx boundary_jump(const Sinogram& sino, double phi) {
    const auto& angles = sino.angles();
    const double step = angles.step();
    double offset = phi - angles.phi_min;
    if (angles.is_full())
        offset -= 2.0 * pi * std::floor((offset + 0.5 * step) / (2.0 * pi));
    const double idx = std::round(offset / step);
    if (idx < 0.0 || idx > static_cast<double>(angles.n_phi - 1) || std::abs(offset - idx * step) > 0.5 * step + 1e-12)
        throw std::invalid_argument("phi lies outside the sinogram's angular range");
    const auto m = static_cast<std::size_t>(idx);

    const auto& taus = sino.taus();
    const double zero_tol = 1e-9 * taus.d_tau;
    std::vector<std::size_t> neg, pos;
    for (std::size_t t = 0; t < taus.n_tau; ++t) {
        const double tau = taus.tau(t);
        if (tau < -zero_tol)
            neg.push_back(t);
        else if (tau > zero_tol)
            pos.push_back(t);
    }
    if (neg.size() < 3 || pos.size() < 3)
        throw std::invalid_argument("boundary jump needs three tau samples on each side of zero");

    double xn[3], xp[3];
    cplx yn[3], yp[3];
    for (int k = 0; k < 3; ++k) {
        const auto tn = neg[neg.size() - 1 - static_cast<std::size_t>(k)];
        const auto tp = pos[static_cast<std::size_t>(k)];
        xn[k] = taus.tau(tn);
        yn[k] = sino.at(tn, m);
        xp[k] = taus.tau(tp);
        yp[k] = sino.at(tp, m);
    }
    return extrapolate_to_zero(xp, yp) - extrapolate_to_zero(xn, yn);
}

} // namespace urt
