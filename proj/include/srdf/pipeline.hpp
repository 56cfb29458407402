#pragma once

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "srdf/bilateral.hpp"
#include "srdf/config.hpp"
#include "srdf/depth_import.hpp"
#include "srdf/io/cameras_io.hpp"
#include "srdf/io/checksum.hpp"
#include "srdf/io/obj_io.hpp"
#include "srdf/io/ply_io.hpp"
#include "srdf/io/png_io.hpp"
#include "srdf/marching_cubes.hpp"
#include "srdf/mesh_ops.hpp"
#include "srdf/metrics.hpp"
#include "srdf/optimizer.hpp"
#include "srdf/render.hpp"
#include "srdf/tsdf.hpp"

namespace srdf {

namespace fs = std::filesystem;

inline std::string camera_tag(std::size_t j)
{
    std::ostringstream s;
    s << std::setw(3) << std::setfill('0') << j;
    return s.str();
}

/* Dataset layout: cameras.txt, bounds.txt, images/NNN.png, masks/NNN.png
 * and (for synthetic data) depth_gt/NNN.pfm. */
inline std::vector<std::string> write_dataset(const std::string& dir,
                                              const MultiViewRig& rig,
                                              bool with_depth)
{
    fs::create_directories(fs::path(dir) / "images");
    fs::create_directories(fs::path(dir) / "masks");
    if (with_depth)
        fs::create_directories(fs::path(dir) / "depth_gt");

    std::vector<std::string> written;
    std::vector<CameraRecord> cameras;
    for (std::size_t j = 0; j < rig.views.size(); ++j) {
        const CameraView& view = rig.views[j];
        cameras.push_back(CameraRecord{view.camera.intrinsics(),
                                       view.camera.rotation(),
                                       view.camera.translation()});
        const std::string tag = camera_tag(j);
        const std::string image = (fs::path(dir) / "images" / (tag + ".png")).string();
        const std::string mask = (fs::path(dir) / "masks" / (tag + ".png")).string();
        write_png_rgb(image, view.image);
        write_png_mask(mask, view.mask);
        written.push_back(image);
        written.push_back(mask);
        if (with_depth) {
            const std::string depth =
                (fs::path(dir) / "depth_gt" / (tag + ".pfm")).string();
            export_depth_map(depth, view.depth);
            written.push_back(depth);
        }
    }
    const std::string cam_path = (fs::path(dir) / "cameras.txt").string();
    const std::string bounds_path = (fs::path(dir) / "bounds.txt").string();
    write_cameras(cam_path, cameras);
    write_bounds(bounds_path, rig.bounds);
    written.push_back(cam_path);
    written.push_back(bounds_path);
    return written;
}

inline void write_manifest(const std::string& dir,
                           const std::vector<std::string>& files)
{
    Json artifacts = Json::array();
    for (const auto& f : files) {
        const FileChecksum sum = checksum_file(f);
        std::ostringstream hex;
        hex << std::hex << std::setw(16) << std::setfill('0') << sum.hash;
        artifacts.push_back({{"path", fs::relative(f, dir).string()},
                             {"bytes", sum.bytes},
                             {"fnv1a64", hex.str()}});
    }
    std::ofstream out(fs::path(dir) / "manifest.json");
    if (!out)
        throw IoError("pipeline: cannot write manifest in " + dir);
    out << Json{{"artifacts", artifacts}}.dump(2) << "\n";
}

/* Loads cameras + images + masks (+ GT depth when present). Depth maps
 * other than depth_gt start uninitialized. */
inline MultiViewRig load_dataset(const std::string& dir,
                                 bool with_gt_depth = false)
{
    const std::string cam_path = (fs::path(dir) / "cameras.txt").string();
    if (!fs::exists(cam_path))
        throw ConfigError("pipeline: dataset has no cameras.txt: " + dir);
    const std::vector<CameraRecord> cameras = read_cameras(cam_path);

    MultiViewRig rig;
    rig.bounds = read_bounds((fs::path(dir) / "bounds.txt").string());
    for (std::size_t j = 0; j < cameras.size(); ++j) {
        const std::string tag = camera_tag(j);
        CameraView view;
        view.image = read_png_rgb(
            (fs::path(dir) / "images" / (tag + ".png")).string());
        view.mask = read_png_mask(
            (fs::path(dir) / "masks" / (tag + ".png")).string());
        if (view.image.width() != view.mask.width()
            || view.image.height() != view.mask.height())
            throw ConfigError("pipeline: image/mask size mismatch for camera "
                              + std::to_string(j));
        view.camera = Camera(cameras[j].k, cameras[j].rotation,
                             cameras[j].translation, view.image.width(),
                             view.image.height());
        view.camera.validate();
        view.depth = DepthMap(view.image.width(), view.image.height());
        rig.views.push_back(std::move(view));
    }

    if (with_gt_depth) {
        std::vector<std::string> files;
        for (std::size_t j = 0; j < rig.views.size(); ++j)
            files.push_back((fs::path(dir) / "depth_gt"
                             / (camera_tag(j) + ".pfm")).string());
        import_depth_maps(&rig, files);
    }
    return rig;
}

struct ReconstructOutputs {
    TriangleMesh mesh;
    OptimizeResult optimization;
    HullInitStats hull_stats;
    MarchingCubesStats mc_stats;
};

inline void initialize_depth(MultiViewRig* rig, const RunConfig& config,
                             HullInitStats* stats)
{
    if (config.init.mode == InitConfig::Mode::visual_hull) {
        *stats = visual_hull_init(rig, config.init.hull_resolution);
        return;
    }
    std::vector<std::string> files;
    const std::string ext = config.init.import_format == "pfm" ? ".pfm" : ".raw";
    for (std::size_t j = 0; j < rig->views.size(); ++j)
        files.push_back((fs::path(config.init.import_dir)
                         / (camera_tag(j) + ext)).string());
    import_depth_maps(rig, files,
                      config.init.import_convention == "planar"
                          ? DepthConvention::planar
                          : DepthConvention::ray_distance);
}

/* Depth optimization followed by fusion: bilateral filter, TSDF
 * integration of every camera, marching cubes, mask-based cleaning. */
inline TriangleMesh fuse_rig(const MultiViewRig& rig, const FusionConfig& config,
                             MarchingCubesStats* mc_stats = nullptr)
{
    MultiViewRig filtered = rig;
    const double range_sigma =
        config.bilateral_range_frac * rig.bounds.diameter();
    for (auto& view : filtered.views)
        view.depth = bilateral_filter(view.depth, view.mask,
                                      config.bilateral_sigma_px, range_sigma);

    TsdfVolume volume(rig.bounds.padded(config.pad_fraction),
                      config.resolution, config.truncation_voxels,
                      config.observation_weight);
    for (const auto& view : filtered.views)
        tsdf_integrate(&volume, view);

    TriangleMesh mesh = marching_cubes(volume, 0.0, mc_stats);
    mesh = clean_mesh(mesh, rig, config.min_component_fraction);
    compute_vertex_normals(&mesh);
    return mesh;
}

inline ReconstructOutputs reconstruct(MultiViewRig* rig, const RunConfig& config)
{
    ReconstructOutputs out;
    initialize_depth(rig, config, &out.hull_stats);

    const std::vector<CameraGroup> groups = make_groups(
        *rig, std::min(config.group_size, rig->camera_count()));
    const auto prior = make_photo_prior(
        config.prior, PriorOptions{config.median_average_even});
    out.optimization = optimize(rig, groups, config.schedule,
                                config.consistency, *prior, config.optimizer);

    out.mesh = fuse_rig(*rig, config.fusion, &out.mc_stats);
    return out;
}

inline void write_energy_log_csv(const std::string& path,
                                 const std::vector<EnergyLogRow>& log)
{
    std::ofstream out(path);
    if (!out)
        throw IoError("pipeline: cannot write energy log: " + path);
    out << "stage,epoch,group,E,grad_norm,wall_ms\n" << std::setprecision(17);
    for (const auto& row : log)
        out << row.stage << "," << row.epoch << "," << row.group << ","
            << row.energy << "," << row.grad_norm << "," << row.wall_ms
            << "\n";
}

inline Json metrics_to_json(const MetricsReport& report)
{
    Json j;
    j["accuracy"] = report.accuracy;
    j["completeness"] = report.completeness;
    // chamfer is the mean of accuracy and completeness (unfiltered; not
    // numerically comparable to benchmark protocols with distance caps)
    j["chamfer"] = report.chamfer;
    j["recon_points"] = report.recon_points;
    j["gt_points"] = report.gt_points;
    if (!report.depth_errors.empty()) {
        Json depth = Json::array();
        for (const auto& st : report.depth_errors)
            depth.push_back({{"camera", st.camera},
                             {"pixels", st.pixels},
                             {"mae", st.mae},
                             {"rmse", st.rmse}});
        j["depth_errors"] = depth;
    }
    return j;
}

inline std::string metrics_to_csv(const MetricsReport& report)
{
    std::ostringstream out;
    out << std::setprecision(17);
    out << "accuracy,completeness,chamfer,recon_points,gt_points\n"
        << report.accuracy << "," << report.completeness << ","
        << report.chamfer << "," << report.recon_points << ","
        << report.gt_points << "\n";
    return out.str();
}

/* Loads a mesh or point cloud for evaluation by extension. */
inline PointCloud load_eval_cloud(const std::string& path, long mesh_samples,
                                  std::uint64_t seed)
{
    TriangleMesh mesh;
    const std::string ext = fs::path(path).extension().string();
    if (ext == ".ply")
        mesh = read_ply(path);
    else if (ext == ".obj")
        mesh = read_obj(path);
    else
        throw ConfigError("metrics: expected .ply or .obj: " + path);
    if (!mesh.triangles.empty())
        return sample_mesh(mesh, mesh_samples, seed);
    PointCloud cloud;
    cloud.points = std::move(mesh.vertices);
    if (cloud.empty())
        throw ConfigError("metrics: no geometry in " + path);
    return cloud;
}

} // namespace srdf
