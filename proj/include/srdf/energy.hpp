#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "srdf/consistency.hpp"
#include "srdf/photo_prior.hpp"
#include "srdf/sampling.hpp"
#include "srdf/view.hpp"

namespace srdf {

struct EnergyResult {
    double value = 0.0;
    /* Per-pixel depth partials, one grid per group camera (parallel to
     * CameraGroup::cameras). */
    std::vector<Grid2<double>> gradients;
    long samples_used = 0;
    long samples_dropped = 0;

    double gradient_norm() const
    {
        double sq = 0.0;
        for (const auto& g : gradients)
            for (const double v : g)
                sq += v * v;
        return std::sqrt(sq);
    }
};

/* E = sum over samples of C_SRDF(X) * C_Phi(X), products restricted to the
 * group's cameras, plus its analytic gradient with respect to every depth
 * pixel of the group.
 *
 * The batch's sample positions are treated as constants: given a fixed
 * batch this is a plain differentiable function of the depth grids, which
 * is exactly what the finite-difference oracle checks. Gradients reach a
 * depth pixel through two routes: the sample's own camera via the constant
 * D_j term (coefficient +1 on the sample's pixel) and every other camera
 * via the bilinear weights of its depth lookup at the sample's projection.
 * Cameras that are behind/out-of-view/masked contribute the Gamma floors
 * and no gradient.
 *
 * Evaluation order is fixed (ray-major, camera-minor) so results are
 * bitwise reproducible regardless of thread count. */
inline EnergyResult evaluate_energy(const MultiViewRig& rig,
                                    const CameraGroup& group,
                                    const SampleBatch& batch,
                                    const ConsistencyParams& params,
                                    const PhotoPrior& prior)
{
    const int n = static_cast<int>(group.cameras.size());
    if (n > kMaxGroupCameras)
        throw ConfigError("energy: camera group exceeds the supported size");

    EnergyResult result;
    result.gradients.reserve(n);
    for (const int j : group.cameras)
        result.gradients.emplace_back(rig.views[j].width(),
                                      rig.views[j].height(), 0.0);
    if (batch.empty())
        return result;

    // slot of each rig camera inside this group (-1 when absent)
    std::vector<int> slot_of(rig.camera_count(), -1);
    for (int k = 0; k < n; ++k)
        slot_of[group.cameras[k]] = k;

    const int S = batch.samples_per_ray;
    double srdf_values[kMaxGroupCameras];
    std::uint8_t valid[kMaxGroupCameras];
    Eigen::Vector3d colors[kMaxGroupCameras];
    double partials[kMaxGroupCameras];
    BilinearWeights lookups[kMaxGroupCameras];

    for (std::size_t r = 0; r < batch.rays.size(); ++r) {
        const SampleBatch::Ray& ray = batch.rays[r];
        const int own_slot = slot_of[ray.camera];
        const CameraView& own_view = rig.views[ray.camera];
        const Eigen::Vector3d origin = own_view.camera.center();
        const double own_depth = own_view.depth.at(ray.pixel_x, ray.pixel_y);

        for (int s = 0; s < S; ++s) {
            const double t = ray.t0 + s * ray.dt;
            const Eigen::Vector3d X = origin + t * ray.direction;

            for (int k = 0; k < n; ++k) {
                if (k == own_slot) {
                    // X lies on this pixel's ray: the lookup degenerates to
                    // the pixel itself and Z_j(X) = t
                    srdf_values[k] = own_depth - t;
                    colors[k] = own_view.image(ray.pixel_x, ray.pixel_y);
                    valid[k] = 1;
                    continue;
                }
                const CameraView& view = rig.views[group.cameras[k]];
                Projection proj;
                if (view.camera.project(X, &proj) != ViewStatus::visible) {
                    valid[k] = 0;
                    colors[k].setZero();
                    continue;
                }
                const DepthLookup lookup = interpolate_depth(view, proj.u, proj.v);
                if (lookup.status != ViewStatus::visible) {
                    valid[k] = 0;
                    colors[k].setZero();
                    continue;
                }
                srdf_values[k] = lookup.value - proj.ray_dist;
                colors[k] = interpolate_color(view, lookup.weights);
                lookups[k] = lookup.weights;
                valid[k] = 1;
            }

            const SrdfConsistency cs =
                c_srdf(std::span<const double>(srdf_values, n),
                       std::span<const std::uint8_t>(valid, n), params,
                       std::span<double>(partials, n));
            if (cs.valid_count == 0) {
                ++result.samples_dropped;
                continue;
            }
            const PhiConsistency phi =
                prior.evaluate(std::span<const Eigen::Vector3d>(colors, n),
                               std::span<const std::uint8_t>(valid, n), params);

            result.value += cs.value * phi.value;
            ++result.samples_used;

            for (int k = 0; k < n; ++k) {
                if (!valid[k] || partials[k] == 0.0)
                    continue;
                const double g = phi.value * partials[k];
                if (k == own_slot) {
                    result.gradients[k](ray.pixel_x, ray.pixel_y) += g;
                    continue;
                }
                const BilinearWeights& w = lookups[k];
                for (int q = 0; q < 4; ++q)
                    if (w.w[q] != 0.0)
                        result.gradients[k](w.pixel_x(q), w.pixel_y(q)) +=
                            g * w.w[q];
            }
        }
    }
    return result;
}

} // namespace srdf
