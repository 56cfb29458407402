#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "srdf/consistency.hpp"
#include "srdf/photo_prior.hpp"
#include "srdf/render.hpp"
#include "srdf/rng.hpp"

#include "test_utils.hpp"

using namespace srdf;

namespace {

/* Brute-force scalar re-evaluation of the SRDF consistency product. */
double oracle_c_srdf(const std::vector<double>& s,
                     const std::vector<std::uint8_t>& valid,
                     const ConsistencyParams& p)
{
    double value = 1.0;
    for (std::size_t j = 0; j < s.size(); ++j)
        value *= valid[j] ? std::exp(-s[j] * s[j] / p.sigma_d) + p.gamma_srdf
                          : p.gamma_srdf;
    return value;
}

double oracle_c_phi(const std::vector<Eigen::Vector3d>& colors,
                    const std::vector<std::uint8_t>& valid,
                    const ConsistencyParams& p)
{
    std::vector<Eigen::Vector3d> obs;
    for (std::size_t j = 0; j < colors.size(); ++j)
        if (valid[j])
            obs.push_back(colors[j]);
    std::vector<double> chan;
    Eigen::Vector3d med;
    for (int c = 0; c < 3; ++c) {
        chan.clear();
        for (const auto& o : obs)
            chan.push_back(o[c]);
        std::sort(chan.begin(), chan.end());
        med[c] = chan[(chan.size() - 1) / 2];
    }
    double value = 1.0;
    for (std::size_t j = 0; j < colors.size(); ++j)
        value *= valid[j]
            ? std::exp(-(colors[j] - med).squaredNorm() / p.sigma_c)
                  + p.gamma_phi
            : p.gamma_phi;
    return value;
}

ConsistencyParams default_params()
{
    ConsistencyParams p;
    p.sigma_d = 0.01;
    p.sigma_c = 0.02;
    p.gamma_srdf = 0.05;
    p.gamma_phi = 0.05;
    return p;
}

} // namespace

TEST(CSrdf, WorkedProductAtPerfectAgreement)
{
    const ConsistencyParams p = default_params();
    const std::vector<double> s = {0.0, 0.0, 0.0};
    const std::vector<std::uint8_t> valid = {1, 1, 1};
    const SrdfConsistency out = c_srdf(s, valid, p);
    EXPECT_EQ(out.valid_count, 3);
    EXPECT_NEAR(out.value, 1.157625, 1e-12);    // 1.05^3
    EXPECT_NEAR(out.value, oracle_c_srdf(s, valid, p), 1e-15);
}

TEST(CSrdf, SingleCameraGammaZeroLimit)
{
    ConsistencyParams p = default_params();
    p.gamma_srdf = 1e-12;
    const std::vector<double> s = {0.0};
    const std::vector<std::uint8_t> valid = {1};
    std::vector<double> partials(1);
    const SrdfConsistency out = c_srdf(s, valid, p, partials);
    EXPECT_NEAR(out.value, 1.0, 1e-9);
    EXPECT_DOUBLE_EQ(partials[0], 0.0);     // symmetric peak
}

TEST(CSrdf, TailLimitIsGammaPowerN)
{
    const ConsistencyParams p = default_params();
    const std::vector<double> s = {1e6, -1e6, 1e6, -1e6};
    const std::vector<std::uint8_t> valid = {1, 1, 1, 1};
    const SrdfConsistency out = c_srdf(s, valid, p);
    EXPECT_NEAR(out.value, std::pow(p.gamma_srdf, 4), 1e-18);
}

TEST(CSrdf, BoundsOnRandomInputs)
{
    const ConsistencyParams p = default_params();
    auto rng = seeded_rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = uniform_int(rng, 1, 8);
        std::vector<double> s(n);
        std::vector<std::uint8_t> valid(n);
        int n_valid = 0;
        for (int j = 0; j < n; ++j) {
            s[j] = uniform(rng, -1.0, 1.0);
            valid[j] = uniform01(rng) < 0.8;
            n_valid += valid[j];
        }
        if (n_valid == 0)
            valid[0] = 1;
        const SrdfConsistency out = c_srdf(s, valid, p);
        // the lower bound is open in exact arithmetic but the exponential
        // underflows below one ulp of gamma, so allow fp equality
        EXPECT_GE(out.value, std::pow(p.gamma_srdf, n) * (1.0 - 1e-12));
        EXPECT_LE(out.value, std::pow(1.0 + p.gamma_srdf, n) + 1e-15);
    }
}

TEST(CSrdf, MaximizedAtZeroVector)
{
    const ConsistencyParams p = default_params();
    auto rng = seeded_rng(17);
    const std::vector<std::uint8_t> valid = {1, 1, 1, 1, 1};
    const std::vector<double> zero(5, 0.0);
    const double peak = c_srdf(zero, valid, p).value;
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<double> s(5);
        double mag = 0.0;
        for (auto& v : s) {
            v = uniform(rng, -0.5, 0.5);
            mag += v * v;
        }
        if (mag == 0.0)
            continue;
        EXPECT_LT(c_srdf(s, valid, p).value, peak);
    }
}

TEST(CSrdf, PermutationInvariance)
{
    const ConsistencyParams p = default_params();
    auto rng = seeded_rng(29);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = uniform_int(rng, 2, 7);
        std::vector<double> s(n);
        std::vector<std::uint8_t> valid(n);
        for (int j = 0; j < n; ++j) {
            s[j] = uniform(rng, -0.3, 0.3);
            valid[j] = uniform01(rng) < 0.9;
        }
        valid[0] = 1;
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        for (int j = n - 1; j > 0; --j)
            std::swap(perm[j], perm[uniform_int(rng, 0, j)]);
        std::vector<double> sp(n);
        std::vector<std::uint8_t> vp(n);
        for (int j = 0; j < n; ++j) {
            sp[j] = s[perm[j]];
            vp[j] = valid[perm[j]];
        }
        const double a = c_srdf(s, valid, p).value;
        const double b = c_srdf(sp, vp, p).value;
        EXPECT_NEAR(a, b, 1e-12 * std::abs(a));
    }
}

TEST(CSrdf, OcclusionMultipliesByGammaFactor)
{
    const ConsistencyParams p = default_params();
    auto rng = seeded_rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = uniform_int(rng, 2, 6);
        std::vector<double> s(n);
        std::vector<std::uint8_t> valid(n, 1);
        for (auto& v : s)
            v = uniform(rng, -0.3, 0.3);
        const int j = uniform_int(rng, 0, n - 1);
        const double before = c_srdf(s, valid, p).value;
        const double factor_j =
            std::exp(-s[j] * s[j] / p.sigma_d) + p.gamma_srdf;
        valid[j] = 0;
        const double after = c_srdf(s, valid, p).value;
        EXPECT_NEAR(after, before * p.gamma_srdf / factor_j,
                    1e-12 * std::abs(after));
    }
}

TEST(CSrdf, PartialsMatchCentralDifferences)
{
    const ConsistencyParams p = default_params();
    auto rng = seeded_rng(41);
    const double h = 1e-5;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = uniform_int(rng, 1, 6);
        std::vector<double> s(n);
        std::vector<std::uint8_t> valid(n);
        for (int j = 0; j < n; ++j) {
            s[j] = uniform(rng, -0.25, 0.25);
            valid[j] = uniform01(rng) < 0.85;
        }
        valid[uniform_int(rng, 0, n - 1)] = 1;
        std::vector<double> partials(n);
        c_srdf(s, valid, p, partials);
        for (int j = 0; j < n; ++j) {
            if (!valid[j]) {
                EXPECT_DOUBLE_EQ(partials[j], 0.0);
                continue;
            }
            std::vector<double> sp = s;
            sp[j] = s[j] + h;
            const double fp = oracle_c_srdf(sp, valid, p);
            sp[j] = s[j] - h;
            const double fm = oracle_c_srdf(sp, valid, p);
            const double fd = (fp - fm) / (2.0 * h);
            const double scale =
                std::max({std::abs(fd), std::abs(partials[j]), 1e-8});
            EXPECT_LT(std::abs(partials[j] - fd) / scale, 1e-6);
        }
    }
}

TEST(CSrdf, NoVisibilitySignal)
{
    const ConsistencyParams p = default_params();
    const std::vector<double> s = {0.1, 0.2};
    const std::vector<std::uint8_t> valid = {0, 0};
    const SrdfConsistency out = c_srdf(s, valid, p);
    EXPECT_EQ(out.valid_count, 0);
}

TEST(MedianColor, OddCount)
{
    const std::vector<Eigen::Vector3d> colors = {
        {0.2, 0.2, 0.2}, {0.5, 0.5, 0.5}, {0.9, 0.9, 0.9}};
    EXPECT_DOUBLE_EQ(median_color(colors).x(), 0.5);
}

TEST(MedianColor, EvenCountTakesLowerMiddle)
{
    const std::vector<Eigen::Vector3d> colors = {
        {0.2, 0.2, 0.2}, {0.5, 0.5, 0.5}, {0.9, 0.9, 0.9}, {0.95, 0.95, 0.95}};
    EXPECT_DOUBLE_EQ(median_color(colors).x(), 0.5);
    EXPECT_DOUBLE_EQ(median_color(colors, /*average_even=*/true).x(), 0.7);
}

TEST(MedianColor, RobustToSingleOutlier)
{
    auto rng = seeded_rng(53);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Eigen::Vector3d> colors(5);
        for (auto& c : colors)
            c.setConstant(uniform(rng, 0.3, 0.6));
        const Eigen::Vector3d before = median_color(colors);
        colors[uniform_int(rng, 0, 4)] = Eigen::Vector3d(1.0, 1.0, 1.0);
        // brute-force median of the corrupted set, channel 0
        std::vector<double> chan;
        for (const auto& c : colors)
            chan.push_back(c.x());
        std::sort(chan.begin(), chan.end());
        EXPECT_DOUBLE_EQ(median_color(colors).x(), chan[2]);
        // an outlier at one of five positions never moves the median above
        // the largest inlier
        EXPECT_LE(median_color(colors).x(), 0.6);
        (void)before;
    }
}

TEST(CPhi, WorkedProductOnIdenticalColors)
{
    const ConsistencyParams p = default_params();
    const std::vector<Eigen::Vector3d> colors(4, {0.4, 0.5, 0.6});
    const std::vector<std::uint8_t> valid(4, 1);
    const PhiConsistency out = c_phi_baseline(colors, valid, p);
    EXPECT_EQ(out.valid_count, 4);
    EXPECT_NEAR(out.value, 1.21550625, 1e-12);  // 1.05^4
    EXPECT_NEAR(out.value, oracle_c_phi(colors, valid, p), 1e-15);
}

TEST(CPhi, SpreadColorsApproachGammaPowerN)
{
    ConsistencyParams p = default_params();
    p.sigma_c = 1e-4;
    const std::vector<Eigen::Vector3d> colors = {
        {0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}, {0.0, 1.0, 0.0}, {1.0, 0.0, 1.0}};
    const std::vector<std::uint8_t> valid(4, 1);
    const PhiConsistency out = c_phi_baseline(colors, valid, p);
    // the median itself always contributes a full factor
    EXPECT_LT(out.value, 1.5 * std::pow(p.gamma_phi, 3));
    EXPECT_GT(out.value, std::pow(p.gamma_phi, 4));
}

TEST(CPhi, PermutationInvariance)
{
    const ConsistencyParams p = default_params();
    auto rng = seeded_rng(61);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = uniform_int(rng, 1, 7);
        std::vector<Eigen::Vector3d> colors(n);
        std::vector<std::uint8_t> valid(n);
        for (int j = 0; j < n; ++j) {
            colors[j] = Eigen::Vector3d(uniform01(rng), uniform01(rng),
                                        uniform01(rng));
            valid[j] = uniform01(rng) < 0.85;
        }
        valid[uniform_int(rng, 0, n - 1)] = 1;
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        for (int j = n - 1; j > 0; --j)
            std::swap(perm[j], perm[uniform_int(rng, 0, j)]);
        std::vector<Eigen::Vector3d> cp(n);
        std::vector<std::uint8_t> vp(n);
        for (int j = 0; j < n; ++j) {
            cp[j] = colors[perm[j]];
            vp[j] = valid[perm[j]];
        }
        const double a = c_phi_baseline(colors, valid, p).value;
        const double b = c_phi_baseline(cp, vp, p).value;
        EXPECT_NEAR(a, b, 1e-12 * std::abs(a));
    }
}

TEST(CPhi, OcclusionContributesGammaOnly)
{
    const ConsistencyParams p = default_params();
    const std::vector<Eigen::Vector3d> colors(3, {0.4, 0.4, 0.4});
    const std::vector<std::uint8_t> all = {1, 1, 1};
    const std::vector<std::uint8_t> one_out = {1, 0, 1};
    const double a = c_phi_baseline(colors, all, p).value;
    const double b = c_phi_baseline(colors, one_out, p).value;
    // identical colors: each valid factor is 1 + gamma
    EXPECT_NEAR(b, a * p.gamma_phi / (1.0 + p.gamma_phi), 1e-12);
}

TEST(PhotoPrior, RegistryDispatch)
{
    EXPECT_NO_THROW(make_photo_prior("median-baseline"));
    EXPECT_THROW(make_photo_prior("cnn"), ConfigError);
}

TEST(PhotoPrior, OnSurfaceBeatsOffSurface)
{
    // render a textured sphere, then compare prior scores at surface points
    // against points pushed off the surface
    MultiViewRig rig = srdf::testing::sphere_rig(8, 64, 3.0, 100.0);
    const SceneDescription scene = srdf::testing::gradient_sphere_scene(0.5);
    render(scene, &rig);
    for (auto& view : rig.views)
        view.validate();

    const ConsistencyParams p = default_params();
    const auto prior = make_photo_prior("median-baseline");
    CameraGroup group;
    group.cameras.resize(rig.camera_count());
    std::iota(group.cameras.begin(), group.cameras.end(), 0);

    auto rng = seeded_rng(71);
    int wins = 0;
    int trials = 0;
    for (int t = 0; t < 2000 && trials < 300; ++t) {
        const int j = uniform_int(rng, 0, rig.camera_count() - 1);
        const CameraView& view = rig.views[j];
        const int x = uniform_int(rng, 0, view.width() - 1);
        const int y = uniform_int(rng, 0, view.height() - 1);
        if (!view.foreground(x, y))
            continue;
        RaySample on;
        on.point = view.camera.unproject(x, y, view.depth.at(x, y));
        on.camera = j;
        RaySample off = on;
        // ten kernel widths off the surface, sigma_d = (o/3)^2 at o = 0.045
        const double sigma_off = 10.0 * std::sqrt(p.sigma_d) * 0.15;
        off.point = on.point
            + view.camera.ray_direction(x, y) * (-sigma_off);
        const PriorScore s_on =
            photo_prior_interface(on, rig, group.cameras, *prior, p);
        const PriorScore s_off =
            photo_prior_interface(off, rig, group.cameras, *prior, p);
        if (!s_on.valid || !s_off.valid)
            continue;
        ++trials;
        wins += s_on.value > s_off.value;
    }
    ASSERT_GT(trials, 50);
    EXPECT_GT(static_cast<double>(wins) / trials, 0.9);
}

TEST(Params, ValidationRejectsBadValues)
{
    ConsistencyParams p = default_params();
    EXPECT_NO_THROW(p.validate());
    p.sigma_d = 0.0;
    EXPECT_THROW(p.validate(), ConfigError);
    p = default_params();
    p.gamma_srdf = 1.0;
    EXPECT_THROW(p.validate(), ConfigError);
    p = default_params();
    p.gamma_phi = 0.0;
    EXPECT_THROW(p.validate(), ConfigError);
}
