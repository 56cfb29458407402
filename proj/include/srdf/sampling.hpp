#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "srdf/errors.hpp"
#include "srdf/view.hpp"

namespace srdf {

/* Coarse-to-fine sampling plan: per-ray intervals [d - o, d + o] whose
 * half-width o shrinks geometrically across stages while the number of
 * samples per ray stays constant. */
struct SamplingSchedule {
    double offset_init = 0.3;       // o_0, world units
    double offset_decay = 0.5;      // per-stage multiplier, in (0,1)
    int stages = 4;
    int epochs_per_stage = 40;
    int samples_per_ray = 9;        // odd, so the current depth is a sample

    enum class SigmaRule { offset_scaled, fixed };
    SigmaRule sigma_rule = SigmaRule::offset_scaled;
    double sigma_d_fixed = 0.01;    // used only with SigmaRule::fixed

    double stage_offset(int stage) const
    {
        return offset_init * std::pow(offset_decay, stage);
    }

    /* Keeps the Eq.-3 kernel width proportional to the shrinking search
     * interval: sigma_d = (o/3)^2. */
    double stage_sigma_d(int stage) const
    {
        if (sigma_rule == SigmaRule::fixed)
            return sigma_d_fixed;
        const double o = stage_offset(stage) / 3.0;
        return o * o;
    }

    void validate() const
    {
        if (!(offset_init > 0.0))
            throw ConfigError("schedule: offset_init must be > 0");
        if (!(offset_decay > 0.0 && offset_decay < 1.0))
            throw ConfigError("schedule: offset_decay must be in (0,1)");
        if (stages < 1)
            throw ConfigError("schedule: needs at least one stage");
        if (epochs_per_stage < 0)
            throw ConfigError("schedule: epochs_per_stage must be >= 0");
        if (samples_per_ray < 3 || samples_per_ray % 2 == 0)
            throw ConfigError("schedule: samples_per_ray must be odd and >= 3");
        if (sigma_rule == SigmaRule::fixed && !(sigma_d_fixed > 0.0))
            throw ConfigError("schedule: sigma_d must be > 0");
    }
};

struct CameraGroup {
    std::vector<int> cameras;   // ascending camera indices
    int id = 0;
};

/* Greedy proximity partition: seed each group with the unassigned camera
 * farthest (max-min center distance) from everything already assigned,
 * then add its g-1 nearest unassigned neighbours. The last group may be
 * smaller when g does not divide N. */
inline std::vector<CameraGroup> make_groups(const MultiViewRig& rig, int group_size)
{
    const int n = rig.camera_count();
    if (group_size < 2)
        throw ConfigError("groups: group size must be >= 2 "
                          "(cross-view consistency needs two cameras)");
    if (group_size > n)
        throw ConfigError("groups: group size exceeds the camera count");

    std::vector<Eigen::Vector3d> centers(n);
    for (int j = 0; j < n; ++j)
        centers[j] = rig.views[j].camera.center();

    std::vector<bool> assigned(n, false);
    std::vector<CameraGroup> groups;
    int remaining = n;
    while (remaining > 0) {
        int seed = -1;
        if (groups.empty()) {
            seed = 0;
        } else {
            // farthest-point seeding; ties resolved by lowest index
            double best = -1.0;
            for (int j = 0; j < n; ++j) {
                if (assigned[j])
                    continue;
                double dmin = std::numeric_limits<double>::infinity();
                for (int m = 0; m < n; ++m)
                    if (assigned[m])
                        dmin = std::min(dmin, (centers[j] - centers[m]).norm());
                if (dmin > best) {
                    best = dmin;
                    seed = j;
                }
            }
        }
        assigned[seed] = true;
        --remaining;

        CameraGroup group;
        group.id = static_cast<int>(groups.size());
        group.cameras.push_back(seed);
        const int take = std::min(group_size - 1, remaining);
        for (int added = 0; added < take; ++added) {
            int pick = -1;
            double best = std::numeric_limits<double>::infinity();
            for (int j = 0; j < n; ++j) {
                if (assigned[j])
                    continue;
                const double d = (centers[j] - centers[seed]).norm();
                if (d < best) {
                    best = d;
                    pick = j;
                }
            }
            assigned[pick] = true;
            --remaining;
            group.cameras.push_back(pick);
        }
        std::sort(group.cameras.begin(), group.cameras.end());
        groups.push_back(std::move(group));
    }
    return groups;
}

/* Uniformly spaced sample positions along every foreground ray of a
 * camera group. Rays are stored start/step compressed; samples of ray r
 * sit at ray distance t0 + s*dt for s in [0, S). Sample positions are
 * constants for the following gradient step. */
struct SampleBatch {
    struct Ray {
        Eigen::Vector3d direction;  // unit, world
        double depth = 0.0;         // current depth estimate d_j^i
        double t0 = 0.0;
        double dt = 0.0;
        int camera = -1;
        int pixel_x = 0;
        int pixel_y = 0;
    };

    std::vector<Ray> rays;
    int samples_per_ray = 0;
    double offset = 0.0;
    long clamped_rays = 0;

    std::size_t sample_count() const { return rays.size() * samples_per_ray; }
    bool empty() const { return rays.empty() || samples_per_ray == 0; }

    RaySample sample(std::size_t ray_index, int s,
                     const Eigen::Vector3d& camera_center) const
    {
        const Ray& r = rays[ray_index];
        const double t = r.t0 + s * r.dt;
        return RaySample{camera_center + t * r.direction, r.camera,
                         r.pixel_x, r.pixel_y, t - r.depth};
    }
};

/* Positive depth floor used when a sampling interval would cross zero
 * and as the optimizer's positivity clamp. */
inline double depth_floor(const MultiViewRig& rig)
{
    return 1e-4 * rig.diameter();
}

inline SampleBatch sample_rays(const MultiViewRig& rig, const CameraGroup& group,
                               const SamplingSchedule& schedule, int stage)
{
    const double o = schedule.stage_offset(stage);
    const int S = schedule.samples_per_ray;
    const double eps = depth_floor(rig);

    SampleBatch batch;
    batch.samples_per_ray = S;
    batch.offset = o;
    for (const int j : group.cameras) {
        const CameraView& view = rig.views[j];
        for (int y = 0; y < view.height(); ++y)
            for (int x = 0; x < view.width(); ++x) {
                if (!view.foreground(x, y))
                    continue;
                const double d = view.depth.at(x, y);
                SampleBatch::Ray ray;
                ray.direction = view.camera.ray_direction(x, y);
                ray.depth = d;
                ray.camera = j;
                ray.pixel_x = x;
                ray.pixel_y = y;
                if (d - o > 0.0) {
                    ray.t0 = d - o;
                    ray.dt = 2.0 * o / (S - 1);
                } else {
                    // interval would reach behind the camera; shrink to (eps, d+o]
                    ray.t0 = eps;
                    ray.dt = (d + o - eps) / (S - 1);
                    ++batch.clamped_rays;
                }
                batch.rays.push_back(ray);
            }
    }
    return batch;
}

} // namespace srdf
