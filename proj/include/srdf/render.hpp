#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Core>

#include "srdf/errors.hpp"
#include "srdf/rng.hpp"
#include "srdf/scene.hpp"
#include "srdf/threading.hpp"
#include "srdf/view.hpp"

namespace srdf {

/* Lambertian ray-cast renderer; the in-repo oracle for images, masks and
 * ground-truth depth. Shading is albedo times a fixed diffuse term with
 * no view dependence, so the median photo prior's assumption holds
 * exactly on noise-free output. Depth is Euclidean ray distance to the
 * first intersection. Deterministic given the seed. */
inline void render(const SceneDescription& scene, MultiViewRig* rig,
                   std::uint64_t seed = 0)
{
    if (scene.shapes.empty())
        throw ConfigError("scene-synth: scene has no shapes");
    const Aabb sb = scene.shape_bounds();
    if (!rig->bounds.contains(sb.min) || !rig->bounds.contains(sb.max))
        throw ConfigError(
            "scene-synth: shapes extend outside the scene bounding box");

    for (std::size_t j = 0; j < rig->views.size(); ++j)
        if (scene.signed_distance(rig->views[j].camera.center()) <= 0.0)
            throw PipelineError("scene-synth: degenerate viewpoint, camera "
                                + std::to_string(j) + " is inside a shape");

    parallel_for(0, static_cast<std::int64_t>(rig->views.size()),
                 [&](std::int64_t j) {
        CameraView& view = rig->views[j];
        const int w = view.camera.width();
        const int h = view.camera.height();
        view.image = Image(w, h, scene.background);
        view.mask = Mask(w, h, 0);
        view.depth = DepthMap(w, h);

        const Eigen::Vector3d origin = view.camera.center();
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                const Eigen::Vector3d dir = view.camera.ray_direction(x, y);
                SurfaceHit hit;
                if (!scene.intersect(origin, dir, &hit))
                    continue;
                const Eigen::Vector3d albedo =
                    hit.albedo->eval(hit.point, rig->bounds, hit.face_id);
                view.image(x, y) =
                    (albedo * scene.diffuse).cwiseMin(1.0).cwiseMax(0.0);
                view.mask(x, y) = 255;
                view.depth.set(x, y, hit.t);
            }

        if (scene.noise_sigma > 0.0) {
            auto rng = seeded_rng(seed, static_cast<std::uint64_t>(j));
            for (std::size_t i = 0; i < view.image.size(); ++i)
                for (int c = 0; c < 3; ++c)
                    view.image[i][c] = std::clamp(
                        view.image[i][c] + scene.noise_sigma * normal01(rng),
                        0.0, 1.0);
        }
    });
}

struct HullInitStats {
    long voxels_total = 0;
    long voxels_kept = 0;
    long rays_missed = 0;   // foreground rays that hit no surviving voxel
};

/* Carved occupancy grid over the rig's bounding box. */
struct HullGrid {
    int nx = 0, ny = 0, nz = 0;
    Eigen::Vector3d voxel = Eigen::Vector3d::Zero();
    std::vector<std::uint8_t> survives;

    std::size_t index(int ix, int iy, int iz) const
    {
        return (static_cast<std::size_t>(iz) * ny + iy) * nx + ix;
    }
};

/* A voxel survives iff its center projects inside the silhouette of every
 * camera that sees it (voxel-center projection, nearest-pixel mask test,
 * no dilation). Voxels seen by no camera survive. */
inline HullGrid carve_visual_hull(const MultiViewRig& rig, int resolution)
{
    if (resolution < 16)
        throw ConfigError("scene-synth: hull resolution must be >= 16");
    for (const auto& view : rig.views)
        if (view.mask.empty())
            throw ConfigError("scene-synth: visual hull needs silhouette masks");

    const Aabb& box = rig.bounds;
    HullGrid grid;
    grid.nx = grid.ny = grid.nz = resolution;
    grid.voxel = box.extent() / resolution;
    grid.survives.assign(
        static_cast<std::size_t>(resolution) * resolution * resolution, 0);

    parallel_for(0, grid.nz, [&](std::int64_t iz) {
        for (int iy = 0; iy < grid.ny; ++iy)
            for (int ix = 0; ix < grid.nx; ++ix) {
                const Eigen::Vector3d center = box.min
                    + Eigen::Vector3d(ix + 0.5, iy + 0.5, iz + 0.5)
                          .cwiseProduct(grid.voxel);
                bool keep = true;
                for (const auto& view : rig.views) {
                    Projection proj;
                    if (view.camera.project(center, &proj)
                        != ViewStatus::visible)
                        continue;
                    if (!view.camera.inside_bounds(proj.u, proj.v))
                        continue;   // not seen by this camera
                    const int px = static_cast<int>(std::lround(proj.u));
                    const int py = static_cast<int>(std::lround(proj.v));
                    if (!view.foreground(px, py)) {
                        keep = false;
                        break;
                    }
                }
                grid.survives[grid.index(ix, iy, static_cast<int>(iz))] = keep;
            }
    });
    return grid;
}

/* Coarse initialization: carve, then set every foreground pixel's depth
 * to the ray distance at which its ray enters the first surviving voxel.
 * The hull encloses the true shape, so initial depths underestimate on
 * clean data (up to discretization at silhouette rims). */
inline HullInitStats visual_hull_init(MultiViewRig* rig, int resolution)
{
    const HullGrid grid = carve_visual_hull(*rig, resolution);
    const Aabb& box = rig->bounds;
    const int nx = grid.nx, ny = grid.ny, nz = grid.nz;
    const Eigen::Vector3d voxel = grid.voxel;

    HullInitStats stats;
    stats.voxels_total = static_cast<long>(grid.survives.size());
    for (const auto s : grid.survives)
        stats.voxels_kept += s;
    const auto vox_index = [&](int ix, int iy, int iz) {
        return grid.index(ix, iy, iz);
    };

    std::vector<long> missed_per_view(rig->views.size(), 0);
    parallel_for(0, static_cast<std::int64_t>(rig->views.size()),
                 [&](std::int64_t j) {
        CameraView& view = rig->views[j];
        const Eigen::Vector3d origin = view.camera.center();
        view.depth = DepthMap(view.camera.width(), view.camera.height());

        for (int y = 0; y < view.camera.height(); ++y)
            for (int x = 0; x < view.camera.width(); ++x) {
                if (!view.foreground(x, y))
                    continue;
                const Eigen::Vector3d dir = view.camera.ray_direction(x, y);
                double t0, t1;
                if (!box.clip_ray(origin, dir, &t0, &t1)) {
                    // silhouette leaked outside the box projection
                    view.depth.set(x, y, (box.center() - origin).norm());
                    ++missed_per_view[j];
                    continue;
                }

                // DDA walk through the voxel grid
                const Eigen::Vector3d entry = origin + t0 * dir;
                int ix = std::clamp(static_cast<int>(
                    (entry.x() - box.min.x()) / voxel.x()), 0, nx - 1);
                int iy = std::clamp(static_cast<int>(
                    (entry.y() - box.min.y()) / voxel.y()), 0, ny - 1);
                int iz = std::clamp(static_cast<int>(
                    (entry.z() - box.min.z()) / voxel.z()), 0, nz - 1);

                double t_cross[3];
                double t_step[3];
                int step[3];
                const int idx[3] = {ix, iy, iz};
                const int dims[3] = {nx, ny, nz};
                for (int a = 0; a < 3; ++a) {
                    if (dir[a] > 0.0) {
                        step[a] = 1;
                        t_step[a] = voxel[a] / dir[a];
                        t_cross[a] = t0 + ((box.min[a] + (idx[a] + 1) * voxel[a])
                                           - (origin[a] + t0 * dir[a])) / dir[a];
                    } else if (dir[a] < 0.0) {
                        step[a] = -1;
                        t_step[a] = -voxel[a] / dir[a];
                        t_cross[a] = t0 + ((box.min[a] + idx[a] * voxel[a])
                                           - (origin[a] + t0 * dir[a])) / dir[a];
                    } else {
                        step[a] = 0;
                        t_step[a] = std::numeric_limits<double>::infinity();
                        t_cross[a] = std::numeric_limits<double>::infinity();
                    }
                }

                int cell[3] = {ix, iy, iz};
                double t_entry = t0;
                bool found = false;
                while (t_entry <= t1) {
                    if (grid.survives[vox_index(cell[0], cell[1], cell[2])]) {
                        view.depth.set(x, y, std::max(t_entry, t0));
                        found = true;
                        break;
                    }
                    int axis = 0;
                    if (t_cross[1] < t_cross[0])
                        axis = 1;
                    if (t_cross[2] < t_cross[axis])
                        axis = 2;
                    t_entry = t_cross[axis];
                    t_cross[axis] += t_step[axis];
                    cell[axis] += step[axis];
                    if (cell[axis] < 0 || cell[axis] >= dims[axis])
                        break;
                }
                if (!found) {
                    view.depth.set(x, y, t0);
                    ++missed_per_view[j];
                }
            }
    });
    for (const long m : missed_per_view)
        stats.rays_missed += m;
    return stats;
}

} // namespace srdf
