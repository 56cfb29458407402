#include <cmath>

#include <gtest/gtest.h>

#include "srdf/rng.hpp"
#include "srdf/view.hpp"

#include "test_utils.hpp"

using namespace srdf;

namespace {

/* Independent scalar projection oracle; shares no code with Camera. */
struct RefProjection {
    double u, v, z;
};

RefProjection reference_project(double fx, double fy, double cx, double cy,
                                const Eigen::Matrix3d& R,
                                const Eigen::Vector3d& t,
                                const Eigen::Vector3d& X)
{
    const double xc = R(0, 0) * X.x() + R(0, 1) * X.y() + R(0, 2) * X.z() + t.x();
    const double yc = R(1, 0) * X.x() + R(1, 1) * X.y() + R(1, 2) * X.z() + t.y();
    const double zc = R(2, 0) * X.x() + R(2, 1) * X.y() + R(2, 2) * X.z() + t.z();
    // camera center c solves R c + t = 0
    const Eigen::Vector3d c = R.transpose() * (-t);
    RefProjection out;
    out.u = fx * xc / zc + cx;
    out.v = fy * yc / zc + cy;
    out.z = std::sqrt((X.x() - c.x()) * (X.x() - c.x())
                      + (X.y() - c.y()) * (X.y() - c.y())
                      + (X.z() - c.z()) * (X.z() - c.z()));
    return out;
}

} // namespace

TEST(Project, CanonicalOnAxis)
{
    const Camera cam = srdf::testing::identity_camera(1, 1, 0, 0, 4, 4);
    Projection proj;
    ASSERT_EQ(cam.project(Eigen::Vector3d(0, 0, 1), &proj),
              ViewStatus::visible);
    EXPECT_DOUBLE_EQ(proj.u, 0.0);
    EXPECT_DOUBLE_EQ(proj.v, 0.0);
    EXPECT_DOUBLE_EQ(proj.ray_dist, 1.0);
}

TEST(Project, HandComputedPinhole)
{
    const Camera cam = srdf::testing::identity_camera(100, 100, 50, 50, 101, 101);
    const Eigen::Vector3d X(0.1, 0.0, 1.0);
    Projection proj;
    ASSERT_EQ(cam.project(X, &proj), ViewStatus::visible);
    EXPECT_NEAR(proj.u, 60.0, 1e-12);
    EXPECT_NEAR(proj.v, 50.0, 1e-12);
    EXPECT_NEAR(proj.ray_dist, std::sqrt(1.01), 1e-12);

    const RefProjection ref = reference_project(
        100, 100, 50, 50, cam.rotation(), cam.translation(), X);
    EXPECT_NEAR(proj.u, ref.u, 1e-12);
    EXPECT_NEAR(proj.v, ref.v, 1e-12);
    EXPECT_NEAR(proj.ray_dist, ref.z, 1e-12);
}

TEST(Project, BehindCamera)
{
    const Camera cam = srdf::testing::identity_camera(1, 1, 0, 0, 4, 4);
    Projection proj;
    EXPECT_EQ(cam.project(Eigen::Vector3d(0, 0, -1), &proj),
              ViewStatus::behind_camera);
    EXPECT_EQ(cam.project(Eigen::Vector3d(0, 0, 0), &proj),
              ViewStatus::behind_camera);
}

TEST(Project, AgreesWithReferenceOnRandomPoses)
{
    auto rng = seeded_rng(7);
    MultiViewRig rig = srdf::testing::sphere_rig(6, 32);
    for (const auto& view : rig.views) {
        for (int i = 0; i < 50; ++i) {
            const Eigen::Vector3d X(uniform(rng, -0.8, 0.8),
                                    uniform(rng, -0.8, 0.8),
                                    uniform(rng, -0.8, 0.8));
            Projection proj;
            if (view.camera.project(X, &proj) != ViewStatus::visible)
                continue;
            const auto& k = view.camera.intrinsics();
            const RefProjection ref =
                reference_project(k.fx, k.fy, k.cx, k.cy,
                                  view.camera.rotation(),
                                  view.camera.translation(), X);
            EXPECT_NEAR(proj.u, ref.u, 1e-9);
            EXPECT_NEAR(proj.v, ref.v, 1e-9);
            EXPECT_NEAR(proj.ray_dist, ref.z, 1e-9);
        }
    }
}

TEST(InterpolateDepth, ExactAtNode)
{
    const Camera cam = srdf::testing::identity_camera(10, 10, 2, 2, 5, 5);
    CameraView view = srdf::testing::constant_depth_view(cam, 1.0);
    view.depth.set(3, 2, 2.0);
    const DepthLookup lookup = interpolate_depth(view, 3.0, 2.0);
    ASSERT_EQ(lookup.status, ViewStatus::visible);
    EXPECT_DOUBLE_EQ(lookup.value, 2.0);
    double wsum = 0.0;
    int contributing = 0;
    for (int k = 0; k < 4; ++k) {
        wsum += lookup.weights.w[k];
        if (lookup.weights.w[k] > 0.0) {
            ++contributing;
            EXPECT_EQ(lookup.weights.pixel_x(k), 3);
            EXPECT_EQ(lookup.weights.pixel_y(k), 2);
            EXPECT_DOUBLE_EQ(lookup.weights.w[k], 1.0);
        }
    }
    EXPECT_EQ(contributing, 1);
    EXPECT_DOUBLE_EQ(wsum, 1.0);
}

TEST(InterpolateDepth, SymmetricMidpoint)
{
    const Camera cam = srdf::testing::identity_camera(10, 10, 2, 2, 5, 5);
    CameraView view = srdf::testing::constant_depth_view(cam, 1.0);
    view.depth.set(1, 1, 1.0);
    view.depth.set(2, 1, 2.0);
    view.depth.set(1, 2, 3.0);
    view.depth.set(2, 2, 4.0);
    const DepthLookup lookup = interpolate_depth(view, 1.5, 1.5);
    ASSERT_EQ(lookup.status, ViewStatus::visible);
    EXPECT_DOUBLE_EQ(lookup.value, 2.5);
    for (int k = 0; k < 4; ++k)
        EXPECT_DOUBLE_EQ(lookup.weights.w[k], 0.25);
}

TEST(InterpolateDepth, MaskedNeighborInvalidates)
{
    const Camera cam = srdf::testing::identity_camera(10, 10, 2, 2, 5, 5);
    CameraView view = srdf::testing::constant_depth_view(cam, 1.0);
    view.mask(2, 1) = 0;
    view.depth.set_no_depth(2, 1);
    EXPECT_EQ(interpolate_depth(view, 1.5, 1.5).status, ViewStatus::masked);
    // at an unmasked node the masked neighbour has zero weight
    EXPECT_EQ(interpolate_depth(view, 1.0, 1.0).status, ViewStatus::visible);
}

TEST(InterpolateDepth, OutOfView)
{
    const Camera cam = srdf::testing::identity_camera(10, 10, 2, 2, 5, 5);
    const CameraView view = srdf::testing::constant_depth_view(cam, 1.0);
    EXPECT_EQ(interpolate_depth(view, -0.25, 1.0).status,
              ViewStatus::out_of_view);
    EXPECT_EQ(interpolate_depth(view, 4.25, 1.0).status,
              ViewStatus::out_of_view);
}

TEST(InterpolateDepth, ExactOnAffineDepth)
{
    const Camera cam = srdf::testing::identity_camera(10, 10, 4, 4, 9, 9);
    CameraView view = srdf::testing::constant_depth_view(cam, 1.0);
    const double a = 2.0, b = 0.125, c = -0.0625;
    for (int y = 0; y < 9; ++y)
        for (int x = 0; x < 9; ++x)
            view.depth.set(x, y, a + b * x + c * y);
    auto rng = seeded_rng(3);
    for (int i = 0; i < 200; ++i) {
        const double u = uniform(rng, 0.0, 8.0);
        const double v = uniform(rng, 0.0, 8.0);
        const DepthLookup lookup = interpolate_depth(view, u, v);
        ASSERT_EQ(lookup.status, ViewStatus::visible);
        EXPECT_NEAR(lookup.value, a + b * u + c * v, 1e-12);
    }
}

TEST(Srdf, SignsAgainstScalarOracle)
{
    const Camera cam = srdf::testing::identity_camera(20, 20, 5, 5, 11, 11);
    const CameraView view = srdf::testing::constant_depth_view(cam, 2.0);

    // X on pixel (7, 4)'s ray at ray distance 1.5 and 2.5
    for (const double dist : {1.5, 2.5}) {
        const Eigen::Vector3d X = view.camera.unproject(7, 4, dist);
        const SrdfValue s = signed_ray_distance(view, X);
        ASSERT_EQ(s.status, ViewStatus::visible);
        // independent scalar evaluation: depth is constant 2.0, Z = ||X||
        const double z = std::sqrt(X.x() * X.x() + X.y() * X.y()
                                   + X.z() * X.z());
        EXPECT_NEAR(s.value, 2.0 - z, 1e-12);
        EXPECT_NEAR(s.value, dist < 2.0 ? 0.5 : -0.5, 1e-9);
    }
}

TEST(Srdf, ZeroOnPredictedSurface)
{
    MultiViewRig rig = srdf::testing::sphere_rig(4, 16);
    auto rng = seeded_rng(11);
    for (auto& view : rig.views)
        for (int y = 0; y < view.height(); ++y)
            for (int x = 0; x < view.width(); ++x) {
                view.mask(x, y) = 255;
                view.depth.set(x, y, uniform(rng, 2.0, 4.0));
            }
    for (const auto& view : rig.views)
        for (int i = 0; i < 50; ++i) {
            const int x = uniform_int(rng, 0, view.width() - 1);
            const int y = uniform_int(rng, 0, view.height() - 1);
            const Eigen::Vector3d X =
                view.camera.unproject(x, y, view.depth.at(x, y));
            const SrdfValue s = signed_ray_distance(view, X);
            ASSERT_EQ(s.status, ViewStatus::visible);
            EXPECT_NEAR(s.value, 0.0, 1e-9);
        }
}

TEST(Srdf, UnitSlopeAlongOwnRay)
{
    const Camera cam = srdf::testing::identity_camera(20, 20, 5, 5, 11, 11);
    const CameraView view = srdf::testing::constant_depth_view(cam, 2.0);
    const double h = 0.125;
    for (int k = 1; k < 16; ++k) {
        const double d = 0.25 + k * h;
        const double s0 = signed_ray_distance(view, cam.unproject(8, 3, d)).value;
        const double s1 = signed_ray_distance(view, cam.unproject(8, 3, d + h)).value;
        EXPECT_NEAR((s1 - s0) / h, -1.0, 1e-9);
    }
}

TEST(Srdf, PropagatesBehindCamera)
{
    const Camera cam = srdf::testing::identity_camera(20, 20, 5, 5, 11, 11);
    const CameraView view = srdf::testing::constant_depth_view(cam, 2.0);
    EXPECT_EQ(signed_ray_distance(view, Eigen::Vector3d(0, 0, -1)).status,
              ViewStatus::behind_camera);
}

TEST(Unproject, OnAxis)
{
    const Camera cam = srdf::testing::identity_camera(10, 10, 2, 2, 5, 5);
    const Eigen::Vector3d X = cam.unproject(2, 2, 1.0);
    EXPECT_NEAR((X - Eigen::Vector3d(0, 0, 1)).norm(), 0.0, 1e-12);
}

TEST(Unproject, CornerPixelNorm)
{
    const Camera cam = srdf::testing::identity_camera(35, 35, 8, 8, 17, 17);
    const Eigen::Vector3d X = cam.unproject(16, 16, 2.0);
    EXPECT_NEAR((X - cam.center()).norm(), 2.0, 1e-12);
}

TEST(Unproject, ProjectRoundTrip)
{
    MultiViewRig rig = srdf::testing::sphere_rig(5, 24);
    auto rng = seeded_rng(23);
    for (const auto& view : rig.views)
        for (int i = 0; i < 100; ++i) {
            const int x = uniform_int(rng, 0, view.width() - 1);
            const int y = uniform_int(rng, 0, view.height() - 1);
            const double d = uniform(rng, 0.1, 7.0);
            const Eigen::Vector3d X = view.camera.unproject(x, y, d);
            Projection proj;
            ASSERT_EQ(view.camera.project(X, &proj), ViewStatus::visible);
            EXPECT_NEAR(proj.u, x, 1e-9);
            EXPECT_NEAR(proj.v, y, 1e-9);
            EXPECT_NEAR(proj.ray_dist, d, 1e-9);
        }
}

TEST(CameraView, ValidateCatchesBrokenInvariants)
{
    const Camera cam = srdf::testing::identity_camera(10, 10, 2, 2, 5, 5);
    {
        CameraView view = srdf::testing::constant_depth_view(cam, 1.0);
        EXPECT_NO_THROW(view.validate());
        view.depth.set_no_depth(1, 1);  // foreground without depth
        EXPECT_THROW(view.validate(), ConfigError);
    }
    {
        CameraView view = srdf::testing::constant_depth_view(cam, 1.0);
        view.mask(1, 1) = 0;            // background carrying depth
        EXPECT_THROW(view.validate(), ConfigError);
    }
    {
        // rotation with determinant -1
        Eigen::Matrix3d flip = Eigen::Matrix3d::Identity();
        flip(0, 0) = -1.0;
        const Camera bad(Intrinsics{10, 10, 2, 2}, flip,
                         Eigen::Vector3d::Zero(), 5, 5);
        EXPECT_THROW(bad.validate(), ConfigError);
    }
}
