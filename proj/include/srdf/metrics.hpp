#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "srdf/errors.hpp"
#include "srdf/kdtree.hpp"
#include "srdf/mesh_types.hpp"
#include "srdf/rng.hpp"
#include "srdf/threading.hpp"
#include "srdf/view.hpp"

namespace srdf {

struct DepthErrorStats {
    int camera = -1;
    long pixels = 0;
    double mae = 0.0;
    double rmse = 0.0;
};

struct MetricsReport {
    double accuracy = 0.0;      // mean distance reconstruction -> GT
    double completeness = 0.0;  // mean distance GT -> reconstruction
    double chamfer = 0.0;       // mean of the two
    long recon_points = 0;
    long gt_points = 0;
    std::vector<DepthErrorStats> depth_errors;  // optional
};

/* Area-weighted uniform surface sampling, deterministic given the seed. */
inline PointCloud sample_mesh(const TriangleMesh& mesh, long count,
                              std::uint64_t seed = 0)
{
    if (mesh.triangles.empty())
        throw ConfigError("metrics: cannot sample an empty mesh");
    if (count < 1)
        throw ConfigError("metrics: sample count must be >= 1");

    std::vector<double> cumulative(mesh.triangles.size());
    double total = 0.0;
    for (std::size_t f = 0; f < mesh.triangles.size(); ++f) {
        total += mesh.triangle_area(f);
        cumulative[f] = total;
    }
    if (!(total > 0.0))
        throw ConfigError("metrics: mesh has zero surface area");

    auto rng = seeded_rng(seed);
    PointCloud cloud;
    cloud.points.reserve(count);
    cloud.face_ids.reserve(count);
    for (long i = 0; i < count; ++i) {
        const double pick = uniform01(rng) * total;
        const std::size_t f = std::lower_bound(cumulative.begin(),
                                               cumulative.end(), pick)
            - cumulative.begin();
        const auto& t = mesh.triangles[std::min(f, mesh.triangles.size() - 1)];
        // uniform barycentric via the sqrt trick
        const double r1 = std::sqrt(uniform01(rng));
        const double r2 = uniform01(rng);
        const Eigen::Vector3d p = (1.0 - r1) * mesh.vertices[t[0]]
            + r1 * (1.0 - r2) * mesh.vertices[t[1]]
            + r1 * r2 * mesh.vertices[t[2]];
        cloud.points.push_back(p);
        cloud.face_ids.push_back(static_cast<int>(
            std::min(f, mesh.triangles.size() - 1)));
    }
    return cloud;
}

/* Mean distance from each cloud to the other's nearest neighbour;
 * chamfer is the mean of the two directions. */
inline MetricsReport chamfer(const PointCloud& recon, const PointCloud& gt)
{
    if (recon.empty() || gt.empty())
        throw ConfigError("metrics: chamfer needs two non-empty clouds");

    const auto mean_nn = [](const PointCloud& from, const PointCloud& to) {
        const KdTree3 tree(to.points);
        std::vector<double> dist(from.size());
        parallel_for(0, static_cast<std::int64_t>(from.size()),
                     [&](std::int64_t i) {
                         dist[i] = std::sqrt(
                             tree.nearest(from.points[i]).sq_dist);
                     });
        double sum = 0.0;
        for (const double d : dist)
            sum += d;
        return sum / static_cast<double>(from.size());
    };

    MetricsReport report;
    report.accuracy = mean_nn(recon, gt);
    report.completeness = mean_nn(gt, recon);
    report.chamfer = 0.5 * (report.accuracy + report.completeness);
    report.recon_points = static_cast<long>(recon.size());
    report.gt_points = static_cast<long>(gt.size());
    return report;
}

/* Per-camera depth MAE/RMSE over the intersection of foreground masks. */
inline std::vector<DepthErrorStats> depth_error(const MultiViewRig& estimated,
                                                const MultiViewRig& reference)
{
    if (estimated.views.size() != reference.views.size())
        throw ConfigError("metrics: rigs have different camera counts");

    std::vector<DepthErrorStats> stats;
    for (std::size_t j = 0; j < estimated.views.size(); ++j) {
        const CameraView& a = estimated.views[j];
        const CameraView& b = reference.views[j];
        if (a.width() != b.width() || a.height() != b.height())
            throw ConfigError("metrics: depth map dimensions mismatch for "
                              "camera " + std::to_string(j));
        DepthErrorStats st;
        st.camera = static_cast<int>(j);
        double abs_sum = 0.0;
        double sq_sum = 0.0;
        for (std::size_t i = 0; i < a.mask.size(); ++i) {
            if (!a.foreground(i) || !b.foreground(i))
                continue;
            const double e = a.depth.at(i) - b.depth.at(i);
            abs_sum += std::abs(e);
            sq_sum += e * e;
            ++st.pixels;
        }
        if (st.pixels > 0) {
            st.mae = abs_sum / st.pixels;
            st.rmse = std::sqrt(sq_sum / st.pixels);
        }
        stats.push_back(st);
    }
    return stats;
}

inline DepthErrorStats aggregate_depth_error(
    const std::vector<DepthErrorStats>& per_camera)
{
    DepthErrorStats total;
    double abs_sum = 0.0;
    double sq_sum = 0.0;
    for (const auto& st : per_camera) {
        abs_sum += st.mae * st.pixels;
        sq_sum += st.rmse * st.rmse * st.pixels;
        total.pixels += st.pixels;
    }
    if (total.pixels > 0) {
        total.mae = abs_sum / total.pixels;
        total.rmse = std::sqrt(sq_sum / total.pixels);
    }
    return total;
}

} // namespace srdf
