#pragma once

#include <cstdint>
#include <fstream>
#include <string>

#include <json.hpp>

#include "srdf/consistency.hpp"
#include "srdf/errors.hpp"
#include "srdf/optimizer.hpp"
#include "srdf/photo_prior.hpp"
#include "srdf/sampling.hpp"

namespace srdf {

using Json = nlohmann::json;

struct InitConfig {
    enum class Mode { visual_hull, import };
    Mode mode = Mode::visual_hull;
    int hull_resolution = 128;
    std::string import_dir;
    std::string import_format = "pfm";          // pfm | raw
    std::string import_convention = "ray";      // ray | planar

    void validate() const
    {
        if (mode == Mode::visual_hull && hull_resolution < 16)
            throw ConfigError("init: hull_resolution must be >= 16");
        if (mode == Mode::import && import_dir.empty())
            throw ConfigError("init: import mode needs import_dir");
        if (import_format != "pfm" && import_format != "raw")
            throw ConfigError("init: import_format must be pfm or raw");
        if (import_convention != "ray" && import_convention != "planar")
            throw ConfigError("init: import_convention must be ray or planar");
    }
};

struct FusionConfig {
    int resolution = 256;               // voxels along the longest axis
    double truncation_voxels = 3.0;
    double pad_fraction = 0.05;         // bounding-box padding
    double bilateral_sigma_px = 2.0;
    double bilateral_range_frac = 0.01; // of the scene diameter
    double observation_weight = 1.0;
    double min_component_fraction = 0.001;
    bool dump_volume = false;

    void validate() const
    {
        if (resolution < 16)
            throw ConfigError("fusion: resolution must be >= 16");
        if (!(truncation_voxels > 0.0))
            throw ConfigError("fusion: truncation_voxels must be > 0");
        if (!(pad_fraction >= 0.0))
            throw ConfigError("fusion: pad_fraction must be >= 0");
        if (!(bilateral_sigma_px > 0.0) || !(bilateral_range_frac > 0.0))
            throw ConfigError("fusion: bilateral sigmas must be > 0");
        if (!(observation_weight > 0.0))
            throw ConfigError("fusion: observation_weight must be > 0");
    }
};

struct MetricsConfig {
    long mesh_samples = 100000;

    void validate() const
    {
        if (mesh_samples < 1)
            throw ConfigError("metrics: mesh_samples must be >= 1");
    }
};

struct RunConfig {
    std::string scene_path;
    std::string dataset_dir;
    std::string out_dir;
    std::uint64_t seed = 1;
    int threads = 0;

    std::string prior = "median-baseline";
    bool median_average_even = false;
    ConsistencyParams consistency;      // sigma_d is schedule-driven
    SamplingSchedule schedule;
    OptimizerConfig optimizer;
    int group_size = 4;
    InitConfig init;
    FusionConfig fusion;
    MetricsConfig metrics;

    void validate() const
    {
        consistency.validate();
        schedule.validate();
        optimizer.validate();
        init.validate();
        fusion.validate();
        metrics.validate();
        if (group_size < 2)
            throw ConfigError("optimizer: group_size must be >= 2");
        if (threads < 0)
            throw ConfigError("config: threads must be >= 0");
        // fails early on a typo'd prior name
        make_photo_prior(prior);
    }
};

namespace detail {

template <typename T>
T jget(const Json& j, const char* key, const T& fallback)
{
    if (!j.contains(key))
        return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("config: bad value for '") + key + "': "
                          + e.what());
    }
}

} // namespace detail

inline RunConfig parse_run_config(const Json& j)
{
    using detail::jget;
    RunConfig c;

    const Json paths = j.value("paths", Json::object());
    c.scene_path = jget<std::string>(paths, "scene", "");
    c.dataset_dir = jget<std::string>(paths, "dataset", "");
    c.out_dir = jget<std::string>(paths, "out", "out");

    c.seed = jget<std::uint64_t>(j, "seed", 1);
    c.threads = jget<int>(j, "threads", 0);

    const Json cons = j.value("consistency", Json::object());
    c.prior = jget<std::string>(cons, "prior", "median-baseline");
    c.median_average_even = jget<bool>(cons, "median_average_even", false);
    c.consistency.sigma_c = jget<double>(cons, "sigma_c", 0.02);
    c.consistency.gamma_srdf = jget<double>(cons, "gamma_srdf", 0.05);
    c.consistency.gamma_phi = jget<double>(cons, "gamma_phi", 0.05);

    const Json sched = j.value("schedule", Json::object());
    c.schedule.offset_init = jget<double>(sched, "offset_init", 0.3);
    c.schedule.offset_decay = jget<double>(sched, "offset_decay", 0.5);
    c.schedule.stages = jget<int>(sched, "stages", 4);
    c.schedule.epochs_per_stage = jget<int>(sched, "epochs_per_stage", 40);
    c.schedule.samples_per_ray = jget<int>(sched, "samples_per_ray", 9);
    const std::string rule =
        jget<std::string>(sched, "sigma_d_rule", "offset-scaled");
    if (rule == "offset-scaled") {
        c.schedule.sigma_rule = SamplingSchedule::SigmaRule::offset_scaled;
    } else if (rule == "fixed") {
        c.schedule.sigma_rule = SamplingSchedule::SigmaRule::fixed;
    } else {
        throw ConfigError("schedule: sigma_d_rule must be offset-scaled or "
                          "fixed, got '" + rule + "'");
    }
    c.schedule.sigma_d_fixed = jget<double>(sched, "sigma_d", 0.01);
    c.consistency.sigma_d = c.schedule.stage_sigma_d(0);

    const Json opt = j.value("optimizer", Json::object());
    c.optimizer.step_size = jget<double>(opt, "step_size", 1e-3);
    c.optimizer.beta1 = jget<double>(opt, "beta1", 0.9);
    c.optimizer.beta2 = jget<double>(opt, "beta2", 0.999);
    c.optimizer.seed = c.seed;
    c.group_size = jget<int>(opt, "group_size", 4);

    const Json init = j.value("init", Json::object());
    const std::string mode = jget<std::string>(init, "mode", "visual-hull");
    if (mode == "visual-hull")
        c.init.mode = InitConfig::Mode::visual_hull;
    else if (mode == "import")
        c.init.mode = InitConfig::Mode::import;
    else
        throw ConfigError("init: mode must be visual-hull or import, got '"
                          + mode + "'");
    c.init.hull_resolution = jget<int>(init, "hull_resolution", 128);
    c.init.import_dir = jget<std::string>(init, "import_dir", "");
    c.init.import_format = jget<std::string>(init, "import_format", "pfm");
    c.init.import_convention =
        jget<std::string>(init, "import_convention", "ray");

    const Json fus = j.value("fusion", Json::object());
    c.fusion.resolution = jget<int>(fus, "resolution", 256);
    c.fusion.truncation_voxels = jget<double>(fus, "truncation_voxels", 3.0);
    c.fusion.pad_fraction = jget<double>(fus, "pad_fraction", 0.05);
    c.fusion.bilateral_sigma_px = jget<double>(fus, "bilateral_sigma_px", 2.0);
    c.fusion.bilateral_range_frac =
        jget<double>(fus, "bilateral_range_frac", 0.01);
    c.fusion.observation_weight = jget<double>(fus, "observation_weight", 1.0);
    c.fusion.min_component_fraction =
        jget<double>(fus, "min_component_fraction", 0.001);
    c.fusion.dump_volume = jget<bool>(fus, "dump_volume", false);

    const Json met = j.value("metrics", Json::object());
    c.metrics.mesh_samples = jget<long>(met, "mesh_samples", 100000);

    return c;
}

inline RunConfig load_run_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config: cannot open: " + path);
    Json j;
    try {
        in >> j;
    } catch (const Json::exception& e) {
        throw ConfigError("config: invalid JSON in " + path + ": " + e.what());
    }
    return parse_run_config(j);
}

/* Canonical resolved form; --dry-run echoes this and it re-parses to an
 * equivalent config. */
inline Json to_json(const RunConfig& c)
{
    Json j;
    j["paths"] = {{"scene", c.scene_path},
                  {"dataset", c.dataset_dir},
                  {"out", c.out_dir}};
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    j["consistency"] = {{"prior", c.prior},
                        {"median_average_even", c.median_average_even},
                        {"sigma_c", c.consistency.sigma_c},
                        {"gamma_srdf", c.consistency.gamma_srdf},
                        {"gamma_phi", c.consistency.gamma_phi}};
    j["schedule"] = {
        {"offset_init", c.schedule.offset_init},
        {"offset_decay", c.schedule.offset_decay},
        {"stages", c.schedule.stages},
        {"epochs_per_stage", c.schedule.epochs_per_stage},
        {"samples_per_ray", c.schedule.samples_per_ray},
        {"sigma_d_rule",
         c.schedule.sigma_rule == SamplingSchedule::SigmaRule::offset_scaled
             ? "offset-scaled" : "fixed"},
        {"sigma_d", c.schedule.sigma_d_fixed}};
    j["optimizer"] = {{"step_size", c.optimizer.step_size},
                      {"beta1", c.optimizer.beta1},
                      {"beta2", c.optimizer.beta2},
                      {"group_size", c.group_size}};
    j["init"] = {{"mode", c.init.mode == InitConfig::Mode::visual_hull
                              ? "visual-hull" : "import"},
                 {"hull_resolution", c.init.hull_resolution},
                 {"import_dir", c.init.import_dir},
                 {"import_format", c.init.import_format},
                 {"import_convention", c.init.import_convention}};
    j["fusion"] = {{"resolution", c.fusion.resolution},
                   {"truncation_voxels", c.fusion.truncation_voxels},
                   {"pad_fraction", c.fusion.pad_fraction},
                   {"bilateral_sigma_px", c.fusion.bilateral_sigma_px},
                   {"bilateral_range_frac", c.fusion.bilateral_range_frac},
                   {"observation_weight", c.fusion.observation_weight},
                   {"min_component_fraction", c.fusion.min_component_fraction},
                   {"dump_volume", c.fusion.dump_volume}};
    j["metrics"] = {{"mesh_samples", c.metrics.mesh_samples}};
    return j;
}

} // namespace srdf
