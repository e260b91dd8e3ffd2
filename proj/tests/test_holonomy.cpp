#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "urt/holonomy.hpp"
#include "urt/radon.hpp"

using namespace urt;
using std::numbers::pi;

namespace {

const GridGeometry grid = GridGeometry::centered(128, 8.0);

ProbeWindow paper_window() { return ProbeWindow::make(0.2, 3.0, 28, 0.0, pi / 2.0, 16); }

CompositeScene paper_scene(double g1_amplitude = 1.0) {
    return CompositeScene{}
        .add({1.5, 1.5, 0.5, g1_amplitude}, RegionMask::quadrant_I)
        .add({-1.5, -1.5, 0.5, 1.0}, RegionMask::quadrant_III);
}

Sinogram direct_column(const CompositeScene& scene, const ProbeWindow& w) {
    return radon_transform(rasterize(scene, grid), w.taus, w.angles, default_ray_step(grid));
}

double rel_diff(const Sinogram& a, const Sinogram& b) {
    return rmse(a.values(), b.values()) / max_abs(b.values());
}

// g2 = mirror pair at +-(1,1), g1 = blob at (1.5, 0.5)
CompositeScene defect_scene(double g1_amplitude) {
    CompositeScene s;
    s.add({1.5, 0.5, 0.5, g1_amplitude}, RegionMask::quadrant_I);
    for (double c : {1.0, -1.0}) {
        s.add({c, c, 0.5, 1.0}, RegionMask::quadrant_I);
        s.add({c, c, 0.5, 1.0}, RegionMask::quadrant_III);
    }
    return s;
}

} // namespace

TEST(ShiftPath, Validation) {
    EXPECT_NO_THROW(ShiftPath::full_turn().validate());
    EXPECT_NO_THROW(ShiftPath::half_turns().validate());
    EXPECT_THROW((ShiftPath{{pi}}.validate()), std::invalid_argument);
    EXPECT_THROW((ShiftPath{{pi / 2, pi / 2, pi}}.validate()), std::invalid_argument);
    EXPECT_THROW((ShiftPath{{}}.validate()), std::invalid_argument);
}

TEST(ProbeWindow, Validation) {
    const auto w = paper_window();
    EXPECT_GT(w.taus.tau(0), 0.2);
    EXPECT_NEAR(w.taus.tau_max(), 3.0, 1e-12);
    EXPECT_THROW(ProbeWindow::make(-0.5, 1.0, 4, 0.0, 1.0, 4).validate(), std::invalid_argument);
    EXPECT_THROW(ProbeWindow::make(0.1, 1.0, 4, 0.0, 2.0, 4).validate(), std::invalid_argument);
}

TEST(RadonMasked, QuadrantThreeInvisibleFromFirstQuadrantWindow) {
    const CompositeScene g2 = CompositeScene{}.add({-1.5, -1.5, 0.5, 1.0}, RegionMask::quadrant_III);
    EXPECT_FALSE(line_meets_region(RegionMask::quadrant_III, 1.0, pi / 4.0));
    const double bound = std::exp(-std::pow(1.0 + std::hypot(1.5, 1.5), 2) / (2 * 0.25));
    EXPECT_LE(std::abs(radon_masked(g2, 1.0, pi / 4.0, grid)), bound);
}

TEST(RadonMasked, QuadrantOneBlobSeen) {
    const CompositeScene g1 = CompositeScene{}.add({1.0, 1.0, 1.0, 1.0}, RegionMask::quadrant_I);
    const auto fine = GridGeometry::centered(512, 8.0);
    const cplx v = radon_masked(g1, std::sqrt(2.0), pi / 4.0, fine);
    EXPECT_GT(v.real(), 0.0);
    EXPECT_NEAR(std::abs(v - radon_point(rasterize(g1, fine), std::sqrt(2.0), pi / 4.0, fine.dx / 2)), 0.0, 1e-14);
    // coarse and fine grids agree
    EXPECT_NEAR(std::abs(radon_masked(g1, std::sqrt(2.0), pi / 4.0, grid) - v), 0.0, 2e-3);
}

TEST(RadonMasked, EmptyScene) { EXPECT_EQ(radon_masked(CompositeScene{}, 0.5, 0.3, grid), cplx(0.0)); }

TEST(EvaluatePath, FullTurnReproducesQuadrantOneTerm) {
    const auto w = paper_window();
    const auto eval = evaluate_path(paper_scene(), ShiftPath::full_turn(), w, grid);
    const auto g1 = direct_column(CompositeScene{}.add({1.5, 1.5, 0.5, 1.0}, RegionMask::quadrant_I), w);
    EXPECT_LE(rel_diff(eval.final_column, g1), 1e-6);
    EXPECT_EQ(eval.surviving_terms, std::vector<std::size_t>{0});
}

TEST(EvaluatePath, HalfTurnsCollapseToZero) {
    const auto w = paper_window();
    const CompositeScene scene = paper_scene();
    const double leak = default_leak_tol(scene, grid);
    const auto eval = evaluate_path(scene, ShiftPath::half_turns(), w, grid);
    ASSERT_EQ(eval.steps.size(), 2u);
    EXPECT_EQ(eval.steps[0].surviving, std::vector<std::size_t>{1});
    EXPECT_TRUE(eval.steps[1].surviving.empty());
    EXPECT_LE(max_abs(eval.final_column.values()), leak);
    // surviving sets shrink monotonically
    EXPECT_LE(eval.steps[1].surviving.size(), eval.steps[0].surviving.size());
}

TEST(EvaluatePath, UnmaskedBlobHasTrivialHolonomy) {
    const CompositeScene scene = CompositeScene{}.add({0.8, -0.4, 0.6, 1.0});
    const auto w = paper_window();
    const double leak = default_leak_tol(scene, grid);
    const auto a = evaluate_path(scene, ShiftPath::full_turn(), w, grid);
    const auto b = evaluate_path(scene, ShiftPath::half_turns(), w, grid);
    EXPECT_LE(rmse(a.final_column.values(), b.final_column.values()), leak);
    EXPECT_EQ(b.surviving_terms, std::vector<std::size_t>{0});
}

TEST(CheckHolonomy, PaperSceneDetected) {
    const auto w = paper_window();
    const auto rep = check_holonomy(paper_scene(), w, grid);
    EXPECT_TRUE(rep.pass);
    EXPECT_GE(rep.discrepancy_norm, 10.0 * rep.threshold);
    const auto g1 = direct_column(CompositeScene{}.add({1.5, 1.5, 0.5, 1.0}, RegionMask::quadrant_I), w);
    EXPECT_NEAR(rep.discrepancy_norm / window_norm(g1), 1.0, 1e-6);
}

TEST(CheckHolonomy, UnmaskedControlFails) {
    const auto rep = check_holonomy(CompositeScene{}.add({0.5, 0.5, 0.7, 1.0}), paper_window(), grid);
    EXPECT_FALSE(rep.pass);
    EXPECT_LE(rep.discrepancy_norm, rep.leak_tol);
}

TEST(CheckHolonomy, ZeroDefectAmplitude) {
    const auto rep = check_holonomy(paper_scene(0.0), paper_window(), grid);
    EXPECT_FALSE(rep.pass);
    EXPECT_LE(rep.discrepancy_norm, rep.leak_tol);
}

TEST(Decompose, SplitsDefectAndBackground) {
    const auto d = decompose_defect_scene(defect_scene(1.0));
    ASSERT_EQ(d.defect.terms.size(), 1u);
    EXPECT_DOUBLE_EQ(d.defect.terms[0].blob.cx, 1.5);
    EXPECT_EQ(d.background.terms.size(), 2u);
    for (const auto& t : d.background.terms)
        EXPECT_EQ(t.mask, RegionMask::none);
}

TEST(Decompose, RejectsUnsupportedScenes) {
    // background without its mirror image
    CompositeScene asym;
    asym.add({1.0, 1.0, 0.5, 1.0}, RegionMask::quadrant_I).add({1.0, 1.0, 0.5, 1.0}, RegionMask::quadrant_III);
    EXPECT_THROW(decompose_defect_scene(asym), UnsupportedAssumptionError);
    // quadrant-III term with no quadrant-I twin
    CompositeScene orphan;
    orphan.add({-1.0, -1.0, 0.5, 1.0}, RegionMask::quadrant_III);
    EXPECT_THROW(decompose_defect_scene(orphan), UnsupportedAssumptionError);
    // unmasked term
    EXPECT_THROW(decompose_defect_scene(CompositeScene{}.add({0, 0, 1, 1.0})), UnsupportedAssumptionError);
}

TEST(ExtractDefect, MatchesDirectProjection) {
    const auto w = paper_window();
    const auto d = extract_defect(defect_scene(1.0), w, grid);
    const auto direct = direct_column(CompositeScene{}.add({1.5, 0.5, 0.5, 1.0}, RegionMask::quadrant_I), w);
    EXPECT_LE(rel_diff(d, direct), 1e-3);
}

TEST(ExtractDefect, ZeroAmplitudeVanishes) {
    const auto scene = defect_scene(0.0);
    const auto d = extract_defect(scene, paper_window(), grid);
    EXPECT_LE(window_norm(d), default_leak_tol(scene, grid));
}

TEST(ExtractDefect, LinearInDefect) {
    const auto w = paper_window();
    const auto d0 = extract_defect(defect_scene(0.0), w, grid);
    const auto d1 = extract_defect(defect_scene(1.0), w, grid);
    const auto d3 = extract_defect(defect_scene(3.0), w, grid);
    std::vector<cplx> lhs(d1.values().size()), rhs(d1.values().size());
    for (std::size_t k = 0; k < lhs.size(); ++k) {
        lhs[k] = d3.values()[k] - d0.values()[k];
        rhs[k] = 3.0 * (d1.values()[k] - d0.values()[k]);
    }
    EXPECT_LE(rmse(lhs, rhs), 1e-12 * max_abs(rhs));
}

TEST(ExtractDefect, NeedsOriginSymmetricGrid) {
    GridGeometry shifted = grid;
    shifted.x_min += 0.3;
    EXPECT_THROW(extract_defect(defect_scene(1.0), paper_window(), shifted), UnsupportedAssumptionError);
}

namespace {

double smooth_jump(double d_tau) {
    const CompositeScene smooth = CompositeScene{}.add({0.4, 0.3, 0.7, 1.0});
    const auto taus = TauGrid::symmetric_covering(6.0, d_tau);
    Sinogram sino(taus, AngularRange::full(8));
    double worst = 0.0;
    for (std::size_t m = 0; m < 8; ++m) {
        for (std::size_t t = 0; t < taus.n_tau; ++t)
            sino.at(t, m) = analytic_radon(smooth, taus.tau(t), sino.angles().angle(m));
        worst = std::max(worst, std::abs(boundary_jump(sino, sino.angles().angle(m))));
    }
    return worst;
}

} // namespace

TEST(BoundaryJump, SmoothSinogramIsContinuous) {
    // one-sided quadratic extrapolation leaves an O(d_tau^3) residual
    const double coarse = smooth_jump(0.06), fine = smooth_jump(0.03);
    EXPECT_LE(fine, 1e-3);
    EXPECT_GE(coarse / fine, 6.0);
}

TEST(BoundaryJump, OriginHuggingMaskedBlobJumps) {
    const CompositeScene masked = CompositeScene{}.add({0.25, 0.25, 0.5, 1.0}, RegionMask::quadrant_I);
    const auto sino = radon_transform(rasterize(masked, grid), covering_tau_grid(grid), AngularRange::full(8),
                                      default_ray_step(grid));
    // jump along the x = 0 edge: integral over y >= 0 of the blob there
    const double edge = std::exp(-0.125) * 0.5 * std::sqrt(2 * pi) * 0.5 * std::erfc(-0.25 / (0.5 * std::sqrt(2.0)));
    EXPECT_NEAR(std::abs(boundary_jump(sino, 0.0)), edge, 1e-2 * edge);
    EXPECT_NEAR(std::abs(boundary_jump(sino, pi / 2.0)), edge, 1e-2 * edge);
    // an oblique view touches the quadrant only at its corner: no jump
    EXPECT_LT(std::abs(boundary_jump(sino, pi / 4.0)), 1e-2 * edge);
}

TEST(BoundaryJump, ZeroSinogramAndErrors) {
    const Sinogram zero(TauGrid::symmetric(11, 0.1), AngularRange::full(4));
    EXPECT_EQ(boundary_jump(zero, 0.0), cplx(0.0));
    const Sinogram narrow(TauGrid::symmetric(5, 0.1), AngularRange::full(4));
    EXPECT_THROW(boundary_jump(narrow, 0.0), std::invalid_argument);
    const Sinogram partial(TauGrid::symmetric(11, 0.1), AngularRange{0.0, 1.0, 4});
    EXPECT_THROW(boundary_jump(partial, 3.0), std::invalid_argument);
}
