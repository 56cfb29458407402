#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "srdf/energy.hpp"
#include "srdf/errors.hpp"
#include "srdf/photo_prior.hpp"
#include "srdf/sampling.hpp"
#include "srdf/threading.hpp"
#include "srdf/view.hpp"

namespace srdf {

struct OptimizerConfig {
    double step_size = 1e-3;    // world units per Adam step, roughly
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::uint64_t seed = 0;     // reserved for stochastic ray subsampling

    void validate() const
    {
        if (!(step_size > 0.0))
            throw ConfigError("optimizer: step_size must be > 0");
        if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0))
            throw ConfigError("optimizer: betas must be in [0,1)");
    }
};

/* Per-camera moment accumulators, shaped exactly like the camera's
 * foreground pixel set. */
struct OptimizerState {
    int camera = -1;
    std::vector<std::size_t> fg_pixels;     // ascending flat indices
    std::vector<double> m;
    std::vector<double> v;
    long step_count = 0;
    std::uint64_t seed = 0;

    static OptimizerState for_view(const CameraView& view, int camera_index,
                                   std::uint64_t seed)
    {
        OptimizerState st;
        st.camera = camera_index;
        st.seed = seed;
        for (std::size_t i = 0; i < view.mask.size(); ++i)
            if (view.foreground(i))
                st.fg_pixels.push_back(i);
        st.m.assign(st.fg_pixels.size(), 0.0);
        st.v.assign(st.fg_pixels.size(), 0.0);
        return st;
    }
};

struct EnergyLogRow {
    int stage = 0;
    int epoch = 0;
    int group = 0;
    double energy = 0.0;
    double grad_norm = 0.0;
    double wall_ms = 0.0;
};

struct OptimizeResult {
    std::vector<EnergyLogRow> log;
    long clamped_rays = 0;      // sampling intervals clipped at the floor
    long clamped_depths = 0;    // depth updates clipped at the floor
};

namespace detail {

inline void check_finite(const EnergyResult& res, const CameraGroup& group,
                         int stage, int epoch)
{
    const auto where = [&](int slot, std::size_t i) {
        const auto& g = res.gradients[slot];
        const int x = static_cast<int>(i % g.width());
        const int y = static_cast<int>(i / g.width());
        return "stage " + std::to_string(stage) + " epoch "
            + std::to_string(epoch) + " camera "
            + std::to_string(group.cameras[slot]) + " pixel ("
            + std::to_string(x) + "," + std::to_string(y) + ")";
    };
    if (!std::isfinite(res.value))
        throw PipelineError("energy-optimizer: non-finite energy at stage "
                            + std::to_string(stage) + " epoch "
                            + std::to_string(epoch));
    for (std::size_t k = 0; k < res.gradients.size(); ++k)
        for (std::size_t i = 0; i < res.gradients[k].size(); ++i)
            if (!std::isfinite(res.gradients[k][i]))
                throw PipelineError("energy-optimizer: non-finite gradient at "
                                    + where(static_cast<int>(k), i));
}

} // namespace detail

/* Coarse-to-fine gradient ascent on the volumetric energy. Each epoch
 * re-samples every foreground ray around the current depth, evaluates
 * E and its gradient, and applies a moment-based per-pixel step. Groups
 * own their cameras' depth grids exclusively and run in parallel; all
 * other rig state is read-only, so runs are bitwise reproducible. */
inline OptimizeResult optimize(MultiViewRig* rig,
                               const std::vector<CameraGroup>& groups,
                               const SamplingSchedule& schedule,
                               const ConsistencyParams& base_params,
                               const PhotoPrior& prior,
                               const OptimizerConfig& config)
{
    schedule.validate();
    base_params.validate();
    config.validate();

    // groups must partition the rig
    {
        std::vector<int> seen(rig->camera_count(), 0);
        for (const auto& g : groups)
            for (const int j : g.cameras) {
                if (j < 0 || j >= rig->camera_count() || seen[j]++)
                    throw ConfigError(
                        "energy-optimizer: groups must partition the cameras");
            }
        for (const int s : seen)
            if (!s)
                throw ConfigError(
                    "energy-optimizer: groups must partition the cameras");
    }

    const int n_groups = static_cast<int>(groups.size());
    const double floor = depth_floor(*rig);

    std::vector<std::vector<OptimizerState>> states(n_groups);
    for (int g = 0; g < n_groups; ++g)
        for (const int j : groups[g].cameras)
            states[g].push_back(
                OptimizerState::for_view(rig->views[j], j, config.seed));

    OptimizeResult result;
    const int total_epochs = schedule.stages * schedule.epochs_per_stage;
    result.log.resize(static_cast<std::size_t>(total_epochs) * n_groups);
    std::vector<long> group_clamped_rays(n_groups, 0);
    std::vector<long> group_clamped_depths(n_groups, 0);

    for (int stage = 0; stage < schedule.stages; ++stage) {
        ConsistencyParams params = base_params;
        params.sigma_d = schedule.stage_sigma_d(stage);

        for (int epoch = 0; epoch < schedule.epochs_per_stage; ++epoch) {
            parallel_for(0, n_groups, [&](std::int64_t g) {
                const auto t_start = std::chrono::steady_clock::now();
                const CameraGroup& group = groups[g];

                const SampleBatch batch =
                    sample_rays(*rig, group, schedule, stage);
                group_clamped_rays[g] += batch.clamped_rays;

                const EnergyResult res =
                    evaluate_energy(*rig, group, batch, params, prior);
                detail::check_finite(res, group, stage, epoch);

                for (std::size_t k = 0; k < group.cameras.size(); ++k) {
                    OptimizerState& st = states[g][k];
                    DepthMap& depth = rig->views[group.cameras[k]].depth;
                    const Grid2<double>& grad = res.gradients[k];
                    ++st.step_count;
                    const double bc1 =
                        1.0 - std::pow(config.beta1, st.step_count);
                    const double bc2 =
                        1.0 - std::pow(config.beta2, st.step_count);
                    for (std::size_t p = 0; p < st.fg_pixels.size(); ++p) {
                        const std::size_t i = st.fg_pixels[p];
                        const double gr = grad[i];
                        st.m[p] = config.beta1 * st.m[p]
                            + (1.0 - config.beta1) * gr;
                        st.v[p] = config.beta2 * st.v[p]
                            + (1.0 - config.beta2) * gr * gr;
                        const double mhat = st.m[p] / bc1;
                        const double vhat = st.v[p] / bc2;
                        double d = depth.at(i) + config.step_size * mhat
                            / (std::sqrt(vhat) + config.epsilon);
                        if (d < floor) {
                            d = floor;
                            ++group_clamped_depths[g];
                        }
                        depth.set(i, d);
                    }
                }

                const double ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t_start).count();
                const std::size_t row =
                    static_cast<std::size_t>(stage * schedule.epochs_per_stage
                                             + epoch) * n_groups + g;
                result.log[row] = EnergyLogRow{stage, epoch, group.id,
                                               res.value, res.gradient_norm(),
                                               ms};
            });
        }
    }

    for (int g = 0; g < n_groups; ++g) {
        result.clamped_rays += group_clamped_rays[g];
        result.clamped_depths += group_clamped_depths[g];
    }
    return result;
}

} // namespace srdf
