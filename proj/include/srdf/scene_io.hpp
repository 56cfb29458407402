#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "srdf/camera.hpp"
#include "srdf/config.hpp"
#include "srdf/errors.hpp"
#include "srdf/io/obj_io.hpp"
#include "srdf/io/ply_io.hpp"
#include "srdf/scene.hpp"
#include "srdf/view.hpp"

namespace srdf {

/* Camera rig generator settings, part of the scene file. */
struct RigSpec {
    enum class Pattern { sphere, hemisphere, ring };
    Pattern pattern = Pattern::sphere;
    int count = 16;
    double radius = 3.0;
    double ring_elevation_deg = 20.0;
    Eigen::Vector3d target = Eigen::Vector3d::Zero();
    int image_width = 128;
    int image_height = 128;
    double focal_px = 150.0;
};

namespace detail {

inline Eigen::Vector3d jvec3(const Json& j, const char* key,
                             const Eigen::Vector3d& fallback)
{
    if (!j.contains(key))
        return fallback;
    const auto& a = j.at(key);
    if (!a.is_array() || a.size() != 3)
        throw ConfigError(std::string("scene: '") + key
                          + "' must be an array of 3 numbers");
    return Eigen::Vector3d(a[0].get<double>(), a[1].get<double>(),
                           a[2].get<double>());
}

inline Albedo parse_albedo(const Json& j)
{
    Albedo a;
    if (j.is_null())
        return a;
    const std::string type = j.value("type", "solid");
    if (type == "solid")
        a.kind = Albedo::Kind::solid;
    else if (type == "checker")
        a.kind = Albedo::Kind::checker;
    else if (type == "gradient")
        a.kind = Albedo::Kind::gradient;
    else if (type == "face_color")
        a.kind = Albedo::Kind::face_color;
    else
        throw ConfigError("scene: unknown albedo type '" + type + "'");
    a.color_a = jvec3(j, "color_a", a.color_a);
    a.color_b = jvec3(j, "color_b", a.color_b);
    a.scale = j.value("scale", a.scale);
    if (a.kind == Albedo::Kind::checker && !(a.scale > 0.0))
        throw ConfigError("scene: checker scale must be > 0");
    if (j.contains("palette")) {
        for (const auto& c : j.at("palette"))
            a.palette.push_back(Eigen::Vector3d(c[0].get<double>(),
                                                c[1].get<double>(),
                                                c[2].get<double>()));
    }
    return a;
}

inline std::unique_ptr<SceneShape> parse_shape(const Json& j,
                                               const std::string& base_dir)
{
    const std::string type = j.value("type", "");
    const Albedo albedo = parse_albedo(j.value("albedo", Json()));
    if (type == "sphere") {
        return std::make_unique<SphereShape>(
            jvec3(j, "center", Eigen::Vector3d::Zero()),
            j.value("radius", 0.5), albedo);
    }
    if (type == "box") {
        return std::make_unique<BoxShape>(
            jvec3(j, "min", Eigen::Vector3d(-0.5, -0.5, -0.5)),
            jvec3(j, "max", Eigen::Vector3d(0.5, 0.5, 0.5)), albedo);
    }
    if (type == "union") {
        std::vector<std::unique_ptr<SceneShape>> children;
        for (const auto& child : j.value("children", Json::array()))
            children.push_back(parse_shape(child, base_dir));
        return std::make_unique<UnionShape>(std::move(children));
    }
    if (type == "mesh") {
        const std::string rel = j.value("path", "");
        if (rel.empty())
            throw ConfigError("scene: mesh shape needs a path");
        const std::filesystem::path p =
            std::filesystem::path(rel).is_absolute()
                ? std::filesystem::path(rel)
                : std::filesystem::path(base_dir) / rel;
        TriangleMesh mesh;
        if (p.extension() == ".obj")
            mesh = read_obj(p.string());
        else if (p.extension() == ".ply")
            mesh = read_ply(p.string());
        else
            throw ConfigError("scene: mesh must be .obj or .ply: " + rel);
        return std::make_unique<MeshShape>(std::move(mesh), albedo);
    }
    throw ConfigError("scene: unknown shape type '" + type + "'");
}

} // namespace detail

struct SceneFile {
    SceneDescription scene;
    Aabb bounds;
    RigSpec rig;
};

inline SceneFile load_scene_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("scene: cannot open: " + path);
    Json j;
    try {
        in >> j;
    } catch (const Json::exception& e) {
        throw ConfigError("scene: invalid JSON in " + path + ": " + e.what());
    }

    const std::string base_dir =
        std::filesystem::path(path).parent_path().string();

    SceneFile out;
    out.scene.background = detail::jvec3(j, "background",
                                         Eigen::Vector3d::Zero());
    out.scene.noise_sigma = j.value("noise_sigma", 0.0);
    out.scene.diffuse = j.value("diffuse", 1.0);
    if (out.scene.noise_sigma < 0.0)
        throw ConfigError("scene: noise_sigma must be >= 0");

    if (!j.contains("shapes") || !j.at("shapes").is_array()
        || j.at("shapes").empty())
        throw ConfigError("scene: needs a non-empty shapes array");
    for (const auto& s : j.at("shapes"))
        out.scene.shapes.push_back(detail::parse_shape(s, base_dir));

    if (j.contains("bounds")) {
        const auto& b = j.at("bounds");
        out.bounds.min = detail::jvec3(b, "min", Eigen::Vector3d::Zero());
        out.bounds.max = detail::jvec3(b, "max", Eigen::Vector3d::Zero());
    } else {
        out.bounds = out.scene.shape_bounds().padded(0.1);
    }
    if (!(out.bounds.extent().minCoeff() > 0.0))
        throw ConfigError("scene: bounds must have positive extent");

    const Json rig = j.value("rig", Json::object());
    const std::string pattern = rig.value("pattern", "sphere");
    if (pattern == "sphere")
        out.rig.pattern = RigSpec::Pattern::sphere;
    else if (pattern == "hemisphere")
        out.rig.pattern = RigSpec::Pattern::hemisphere;
    else if (pattern == "ring")
        out.rig.pattern = RigSpec::Pattern::ring;
    else
        throw ConfigError("scene: rig pattern must be sphere, hemisphere or "
                          "ring, got '" + pattern + "'");
    out.rig.count = rig.value("count", 16);
    out.rig.radius = rig.value("radius", 3.0);
    out.rig.ring_elevation_deg = rig.value("ring_elevation_deg", 20.0);
    out.rig.target = detail::jvec3(rig, "target", out.bounds.center());
    out.rig.image_width = rig.value("image_width", 128);
    out.rig.image_height = rig.value("image_height", 128);
    out.rig.focal_px = rig.value("focal_px", 150.0);
    if (out.rig.count < 2)
        throw ConfigError("scene: rig needs at least 2 cameras");
    if (!(out.rig.radius > 0.0) || !(out.rig.focal_px > 0.0))
        throw ConfigError("scene: rig radius and focal must be > 0");
    if (out.rig.image_width < 2 || out.rig.image_height < 2)
        throw ConfigError("scene: rig image size must be at least 2x2");
    return out;
}

/* Evenly spread view directions: golden-angle spiral over the full or
 * upper half sphere, or a ring at fixed elevation. */
inline MultiViewRig build_rig(const RigSpec& spec, const Aabb& bounds)
{
    MultiViewRig rig;
    rig.bounds = bounds;
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < spec.count; ++i) {
        Eigen::Vector3d dir;
        switch (spec.pattern) {
        case RigSpec::Pattern::sphere: {
            const double z = 1.0 - 2.0 * (i + 0.5) / spec.count;
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double phi = golden * i;
            dir = Eigen::Vector3d(r * std::cos(phi), r * std::sin(phi), z);
            break;
        }
        case RigSpec::Pattern::hemisphere: {
            const double z = (i + 0.5) / spec.count;
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double phi = golden * i;
            dir = Eigen::Vector3d(r * std::cos(phi), r * std::sin(phi), z);
            break;
        }
        case RigSpec::Pattern::ring: {
            const double elev = spec.ring_elevation_deg * M_PI / 180.0;
            const double phi = 2.0 * M_PI * i / spec.count;
            dir = Eigen::Vector3d(std::cos(elev) * std::cos(phi),
                                  std::cos(elev) * std::sin(phi),
                                  std::sin(elev));
            break;
        }
        }
        const Eigen::Vector3d eye = spec.target + spec.radius * dir;

        Eigen::Matrix3d rotation;
        Eigen::Vector3d translation;
        look_at(eye, spec.target, Eigen::Vector3d::UnitZ(), &rotation,
                &translation);

        Intrinsics k;
        k.fx = k.fy = spec.focal_px;
        k.cx = 0.5 * (spec.image_width - 1);
        k.cy = 0.5 * (spec.image_height - 1);

        CameraView view;
        view.camera = Camera(k, rotation, translation, spec.image_width,
                             spec.image_height);
        view.image = Image(spec.image_width, spec.image_height);
        view.mask = Mask(spec.image_width, spec.image_height, 0);
        view.depth = DepthMap(spec.image_width, spec.image_height);
        rig.views.push_back(std::move(view));
    }
    return rig;
}

} // namespace srdf
