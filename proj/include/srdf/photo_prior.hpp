#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>

#include <Eigen/Core>

#include "srdf/consistency.hpp"
#include "srdf/errors.hpp"
#include "srdf/view.hpp"

namespace srdf {

/* Photo-consistency is pluggable: the energy is agnostic to how the
 * per-sample photometric score is produced. Implementations receive the
 * colors observed at a sample by each camera of the active group plus
 * per-camera validity; occluded cameras must contribute the Gamma_Phi
 * floor so scores stay within (Gamma^n, (1+Gamma)^n]. */
class PhotoPrior {
public:
    virtual ~PhotoPrior() = default;
    virtual std::string name() const = 0;

    /* Returns {0, 0 valid} when no camera sees the sample. */
    virtual PhiConsistency evaluate(std::span<const Eigen::Vector3d> colors,
                                    std::span<const std::uint8_t> valid,
                                    const ConsistencyParams& params) const = 0;
};

/* Shipped baseline: deviation from the channel-wise median observation. */
class MedianBaselinePrior final : public PhotoPrior {
public:
    explicit MedianBaselinePrior(bool average_even_median = false)
        : average_even_(average_even_median) {}

    std::string name() const override { return "median-baseline"; }

    PhiConsistency evaluate(std::span<const Eigen::Vector3d> colors,
                            std::span<const std::uint8_t> valid,
                            const ConsistencyParams& params) const override
    {
        return c_phi_baseline(colors, valid, params, average_even_);
    }

private:
    bool average_even_;
};

struct PriorOptions {
    bool median_average_even = false;
};

using PhotoPriorFactory =
    std::function<std::unique_ptr<PhotoPrior>(const PriorOptions&)>;

inline std::map<std::string, PhotoPriorFactory>& photo_prior_registry()
{
    static std::map<std::string, PhotoPriorFactory> registry = {
        {"median-baseline", [](const PriorOptions& opt) {
             return std::make_unique<MedianBaselinePrior>(opt.median_average_even);
         }},
    };
    return registry;
}

/* Extension hook for alternative priors (e.g. learned scores served by an
 * external process). */
inline void register_photo_prior(const std::string& name, PhotoPriorFactory factory)
{
    photo_prior_registry()[name] = std::move(factory);
}

inline std::unique_ptr<PhotoPrior> make_photo_prior(const std::string& name,
                                                    const PriorOptions& options = {})
{
    const auto& registry = photo_prior_registry();
    const auto it = registry.find(name);
    if (it == registry.end()) {
        std::string known;
        for (const auto& [key, unused] : registry)
            known += (known.empty() ? "" : ", ") + key;
        throw ConfigError("consistency: unknown photo prior '" + name
                          + "' (available: " + known + ")");
    }
    return it->second(options);
}

struct PriorScore {
    double value = 0.0;
    bool valid = false;
};

/* Spec surface for prior evaluation on a free-standing sample: gathers
 * the group's observations of sample.point and dispatches to the prior. */
inline PriorScore photo_prior_interface(const RaySample& sample,
                                        const MultiViewRig& rig,
                                        std::span<const int> group_cameras,
                                        const PhotoPrior& prior,
                                        const ConsistencyParams& params)
{
    const int n = static_cast<int>(group_cameras.size());
    if (n > kMaxGroupCameras)
        throw ConfigError("consistency: camera group exceeds the supported size");

    Eigen::Vector3d colors[kMaxGroupCameras];
    std::uint8_t valid[kMaxGroupCameras];
    for (int k = 0; k < n; ++k) {
        const CameraView& view = rig.views[group_cameras[k]];
        colors[k].setZero();
        valid[k] = 0;
        Projection proj;
        if (view.camera.project(sample.point, &proj) != ViewStatus::visible)
            continue;
        const DepthLookup lookup = interpolate_depth(view, proj.u, proj.v);
        if (lookup.status != ViewStatus::visible)
            continue;
        colors[k] = interpolate_color(view, lookup.weights);
        valid[k] = 1;
    }
    const PhiConsistency phi = prior.evaluate(
        std::span<const Eigen::Vector3d>(colors, n),
        std::span<const std::uint8_t>(valid, n), params);
    return PriorScore{phi.value, phi.valid_count > 0};
}

} // namespace srdf
