#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "urt/fourier_slice.hpp"
#include "urt/phantom.hpp"
#include "urt/radon.hpp"

using namespace urt;
using std::numbers::pi;

namespace {

const CompositeScene unit_blob = CompositeScene{}.add({0.0, 0.0, 1.0, 1.0});

Sinogram analytic_sinogram(const CompositeScene& scene, const TauGrid& taus, const AngularRange& angles) {
    Sinogram s(taus, angles);
    for (std::size_t m = 0; m < angles.n_phi; ++m)
        for (std::size_t t = 0; t < taus.n_tau; ++t)
            s.at(t, m) = analytic_radon(scene, taus.tau(t), angles.angle(m));
    return s;
}

} // namespace

TEST(FstLhs, ZeroFrequencyIsMass) {
    const auto g = GridGeometry::centered(65, 8.0);
    const auto img = rasterize(CompositeScene{}.add({0.5, -0.3, 0.7, cplx(1.0, 2.0)}), g);
    cplx mass{0.0, 0.0};
    for (std::size_t j = 0; j < g.ny; ++j)
        for (std::size_t i = 0; i < g.nx; ++i)
            mass += img.at(i, j) * ((i == 0 || i + 1 == g.nx) ? 0.5 : 1.0) * ((j == 0 || j + 1 == g.ny) ? 0.5 : 1.0);
    mass *= g.dx * g.dy;
    const std::vector<double> zero{0.0};
    EXPECT_NEAR(std::abs(fst_lhs(img, 0.4, zero).values[0] - mass), 0.0, 1e-12);
}

TEST(FstLhs, CentredGaussianAgainstOracle) {
    const auto g = GridGeometry::centered(129, 12.0);
    const auto img = rasterize(unit_blob, g);
    const std::vector<double> one{1.0};
    for (double phi : {0.0, 0.8, 2.0})
        EXPECT_NEAR(std::abs(fst_lhs(img, phi, one).values[0] - 2.0 * pi * std::exp(-0.5)), 0.0, 1e-4);
}

TEST(FstLhs, RejectsNegativeOrUnsortedLambda) {
    const ImageGrid2D img(GridGeometry::centered(8, 4.0));
    const std::vector<double> negative{-0.1, 0.5};
    const std::vector<double> unsorted{0.5, 0.5};
    EXPECT_THROW(fst_lhs(img, 0.0, negative), DomainError);
    EXPECT_THROW(fst_lhs(img, 0.0, unsorted), DomainError);
}

TEST(FstRhs, ZeroColumn) {
    const Sinogram s(TauGrid::symmetric(21, 0.2), AngularRange::full(4));
    const auto slice = fst_rhs(s, 0.0, lambda_grid(5, 4.0));
    for (auto v : slice.values)
        EXPECT_EQ(v, cplx(0.0));
}

TEST(FstRhs, CentredGaussianColumn) {
    const auto taus = TauGrid::symmetric(161, 0.1);
    const auto sino = analytic_sinogram(unit_blob, taus, AngularRange::full(8));
    // independent check on the oracle itself: the tau integral of the column
    const double col_mass =
        oracle::simpson_real([](double t) { return analytic_radon(unit_blob, t, 0.0).real(); }, -8, 8, 800);
    EXPECT_NEAR(col_mass, 2.0 * pi, 1e-9);
    const std::vector<double> lambdas{0.0, 1.0};
    const auto slice = fst_rhs(sino, pi / 4.0, lambdas);
    EXPECT_NEAR(std::abs(slice.values[0] - 2.0 * pi), 0.0, 1e-3);
    EXPECT_NEAR(std::abs(slice.values[1] - 2.0 * pi * std::exp(-0.5)), 0.0, 1e-3);
}

TEST(FstRhs, AngleOutsideRangeIsDomainError) {
    const Sinogram s(TauGrid::symmetric(11, 0.2), AngularRange{0.0, pi, 8});
    const std::vector<double> l{0.0};
    EXPECT_THROW(fst_rhs(s, 4.0, l), DomainError);
    EXPECT_NO_THROW(fst_rhs(s, 0.1, l));
    // full ranges wrap
    const Sinogram full(TauGrid::symmetric(11, 0.2), AngularRange::full(8));
    EXPECT_EQ(match_angle(full.angles(), 2.0 * pi - 0.01), 0u);
    EXPECT_EQ(match_angle(full.angles(), 2.0 * pi + pi / 4.0), 1u);
}

TEST(FstCheck, GaussianPasses) {
    const auto g = GridGeometry::centered(128, 8.0);
    const auto img = rasterize(CompositeScene{}.add({0.4, -0.2, 0.8, 1.0}), g);
    const auto taus = covering_tau_grid(g);
    const auto sino = radon_transform(img, taus, AngularRange::full(16), default_ray_step(g));
    const auto check = fst_check(img, sino, lambda_grid(17, 8.0));
    EXPECT_TRUE(check.pass) << check.worst();
    EXPECT_EQ(check.reports.size(), 16u);
    for (const auto& r : check.reports)
        EXPECT_TRUE(std::isfinite(r.max_rel_residual));
}

TEST(FstCheck, ZeroImageHasZeroResiduals) {
    const auto g = GridGeometry::centered(32, 8.0);
    const ImageGrid2D img(g);
    const Sinogram sino(covering_tau_grid(g), AngularRange::full(4));
    const auto check = fst_check(img, sino, lambda_grid(9, 4.0));
    EXPECT_TRUE(check.pass);
    for (const auto& r : check.reports)
        for (double v : r.residuals)
            EXPECT_EQ(v, 0.0);
}

TEST(FstCheck, MismatchedPairFails) {
    const auto g = GridGeometry::centered(64, 8.0);
    const auto a = rasterize(CompositeScene{}.add({0.0, 0.0, 0.8, 1.0}), g);
    const auto b = rasterize(CompositeScene{}.add({1.0, 1.0, 0.5, 1.0}), g);
    const auto sino = radon_transform(b, covering_tau_grid(g), AngularRange::full(8), default_ray_step(g));
    const auto check = fst_check(a, sino, lambda_grid(9, 4.0));
    EXPECT_FALSE(check.pass);
    EXPECT_GT(check.worst(), 0.1);
}

TEST(FstCheck, BothSidesHomogeneous) {
    const auto g = GridGeometry::centered(48, 8.0);
    const auto img = rasterize(CompositeScene{}.add({0.3, 0.1, 0.7, 1.0}), g);
    auto sino = radon_transform(img, covering_tau_grid(g), AngularRange::full(4), default_ray_step(g));
    const cplx c(-2.0, 0.5);
    const auto lambdas = lambda_grid(5, 3.0);
    const auto l1 = fst_lhs(img, 0.0, lambdas), r1 = fst_rhs(sino, 0.0, lambdas);
    const auto scaled_img = c * img;
    sino *= c;
    const auto l2 = fst_lhs(scaled_img, 0.0, lambdas), r2 = fst_rhs(sino, 0.0, lambdas);
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
        EXPECT_NEAR(std::abs(l2.values[k] - c * l1.values[k]), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(r2.values[k] - c * r1.values[k]), 0.0, 1e-12);
    }
}

TEST(FstCheck, NarrowTauRangeIsRejected) {
    const auto g = GridGeometry::centered(32, 8.0);
    const ImageGrid2D img(g);
    const Sinogram sino(TauGrid::symmetric(11, g.dx), AngularRange::full(4));
    EXPECT_THROW(fst_check(img, sino, lambda_grid(3, 1.0)), GeometryError);
}

TEST(LambdaGrid, EndpointsIncluded) {
    const auto l = lambda_grid(33, 8.0);
    EXPECT_EQ(l.size(), 33u);
    EXPECT_EQ(l.front(), 0.0);
    EXPECT_DOUBLE_EQ(l.back(), 8.0);
}
