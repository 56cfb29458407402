#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "srdf/srdf.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_override;
    std::int64_t seed_override = -1;
    int threads_override = -1;
    bool dry_run = false;
};

void add_common(CLI::App* cmd, CommonArgs* args)
{
    cmd->add_option("--config", args->config_path, "Run configuration file")
        ->required();
    cmd->add_option("--out", args->out_override, "Override the output directory");
    cmd->add_option("--seed", args->seed_override, "Override the seed");
    cmd->add_option("--threads", args->threads_override,
                    "Worker thread budget (0 = hardware)");
    cmd->add_flag("--dry-run", args->dry_run,
                  "Validate the config and print the resolved parameters");
}

srdf::RunConfig resolve_config(const CommonArgs& args)
{
    srdf::RunConfig config = srdf::load_run_config(args.config_path);
    if (!args.out_override.empty())
        config.out_dir = args.out_override;
    if (args.seed_override >= 0) {
        config.seed = static_cast<std::uint64_t>(args.seed_override);
        config.optimizer.seed = config.seed;
    }
    if (args.threads_override >= 0)
        config.threads = args.threads_override;
    config.validate();
    srdf::set_thread_budget(config.threads);
    return config;
}

bool handle_dry_run(const CommonArgs& args, const srdf::RunConfig& config)
{
    if (!args.dry_run)
        return false;
    std::cout << srdf::to_json(config).dump(2) << std::endl;
    return true;
}

int cmd_synth(const CommonArgs& args)
{
    const srdf::RunConfig config = resolve_config(args);
    if (config.scene_path.empty())
        throw srdf::ConfigError("config: synth needs paths.scene");
    if (!fs::exists(config.scene_path))
        throw srdf::ConfigError("config: scene file does not exist: "
                                + config.scene_path);
    if (handle_dry_run(args, config))
        return 0;

    const srdf::SceneFile scene_file = srdf::load_scene_file(config.scene_path);
    srdf::MultiViewRig rig = srdf::build_rig(scene_file.rig, scene_file.bounds);
    srdf::render(scene_file.scene, &rig, config.seed);
    rig.validate();

    const std::string dir = config.out_dir;
    const std::vector<std::string> files =
        srdf::write_dataset(dir, rig, /*with_depth=*/true);
    srdf::write_manifest(dir, files);
    std::cout << "synth: wrote " << rig.views.size() << " views to " << dir
              << std::endl;
    return 0;
}

int cmd_reconstruct(const CommonArgs& args)
{
    const srdf::RunConfig config = resolve_config(args);
    if (config.dataset_dir.empty())
        throw srdf::ConfigError("config: reconstruct needs paths.dataset");
    if (!fs::exists(config.dataset_dir))
        throw srdf::ConfigError("config: dataset does not exist: "
                                + config.dataset_dir);
    if (handle_dry_run(args, config))
        return 0;

    srdf::MultiViewRig rig = srdf::load_dataset(config.dataset_dir);
    srdf::ReconstructOutputs outputs = srdf::reconstruct(&rig, config);

    const fs::path out = config.out_dir;
    fs::create_directories(out / "depth");
    std::vector<std::string> files;
    for (std::size_t j = 0; j < rig.views.size(); ++j) {
        const std::string path =
            (out / "depth" / (srdf::camera_tag(j) + ".pfm")).string();
        srdf::export_depth_map(path, rig.views[j].depth);
        files.push_back(path);
    }
    const std::string mesh_path = (out / "mesh.ply").string();
    const std::string log_path = (out / "energy.csv").string();
    srdf::write_ply(mesh_path, outputs.mesh);
    srdf::write_energy_log_csv(log_path, outputs.optimization.log);
    files.push_back(mesh_path);
    files.push_back(log_path);
    srdf::write_manifest(out.string(), files);

    std::cout << "reconstruct: mesh with " << outputs.mesh.triangle_count()
              << " triangles, " << outputs.mesh.vertex_count()
              << " vertices -> " << mesh_path << std::endl;
    if (outputs.hull_stats.rays_missed > 0)
        std::cout << "reconstruct: warning, " << outputs.hull_stats.rays_missed
                  << " foreground rays missed the visual hull" << std::endl;
    return 0;
}

int cmd_eval(const CommonArgs& args, const std::string& mesh_path,
             const std::string& gt_path)
{
    const srdf::RunConfig config = resolve_config(args);
    if (!fs::exists(mesh_path))
        throw srdf::ConfigError("eval: mesh does not exist: " + mesh_path);
    if (!fs::exists(gt_path))
        throw srdf::ConfigError("eval: ground truth does not exist: " + gt_path);
    if (handle_dry_run(args, config))
        return 0;

    const srdf::PointCloud recon = srdf::load_eval_cloud(
        mesh_path, config.metrics.mesh_samples, config.seed);
    const srdf::PointCloud gt = srdf::load_eval_cloud(
        gt_path, config.metrics.mesh_samples, config.seed + 1);
    const srdf::MetricsReport report = srdf::chamfer(recon, gt);

    fs::create_directories(config.out_dir);
    const fs::path out = config.out_dir;
    {
        std::ofstream f(out / "report.json");
        f << srdf::metrics_to_json(report).dump(2) << "\n";
    }
    {
        std::ofstream f(out / "report.csv");
        f << srdf::metrics_to_csv(report);
    }
    std::cout << "eval: accuracy " << report.accuracy << ", completeness "
              << report.completeness << ", chamfer " << report.chamfer
              << std::endl;
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Multi-view depth optimization with signed ray distances"};
    app.require_subcommand(1);

    CommonArgs synth_args, recon_args, eval_args;
    std::string eval_mesh, eval_gt;

    CLI::App* synth = app.add_subcommand(
        "synth", "Render a synthetic dataset from a scene file");
    add_common(synth, &synth_args);

    CLI::App* recon = app.add_subcommand(
        "reconstruct", "Optimize depth maps and fuse them into a mesh");
    add_common(recon, &recon_args);

    CLI::App* eval = app.add_subcommand(
        "eval", "Compare a reconstruction against ground truth");
    add_common(eval, &eval_args);
    eval->add_option("mesh", eval_mesh, "Reconstructed mesh (.ply/.obj)")
        ->required();
    eval->add_option("gt", eval_gt, "Ground-truth mesh or cloud (.ply/.obj)")
        ->required();

    try {
        app.parse(argc, argv);
        if (synth->parsed())
            return cmd_synth(synth_args);
        if (recon->parsed())
            return cmd_reconstruct(recon_args);
        if (eval->parsed())
            return cmd_eval(eval_args, eval_mesh, eval_gt);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const srdf::ConfigError& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 3;
    }
    return 0;
}
