#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "srdf/errors.hpp"
#include "srdf/io/pfm.hpp"
#include "srdf/io/raw_grid.hpp"
#include "srdf/view.hpp"

namespace srdf {

enum class DepthConvention {
    ray_distance,   // native: Euclidean distance along the pixel ray
    planar,         // z-depth; converted on import
};

/* Depth grid serialization helpers. Background pixels are written as 0
 * and forced back to the no-depth sentinel by the mask on import. */
inline Grid2<float> depth_to_grid(const DepthMap& depth)
{
    Grid2<float> out(depth.width(), depth.height(), 0.0f);
    for (std::size_t i = 0; i < out.size(); ++i)
        if (depth.has_depth(i))
            out[i] = static_cast<float>(depth.at(i));
    return out;
}

inline void export_depth_map(const std::string& path, const DepthMap& depth)
{
    const Grid2<float> grid = depth_to_grid(depth);
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".pfm")
        write_pfm(path, grid);
    else
        write_raw_grid(path, grid);
}

inline Grid2<float> read_depth_grid(const std::string& path)
{
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".pfm")
        return read_pfm(path);
    return read_raw_grid(path);
}

/* Replaces the rig's depth grids with imported ones. Foreground pixels
 * must carry positive values; background entries are reset to the
 * sentinel. With DepthConvention::planar, values are scaled per pixel
 * into ray distances (ray = plane * ||(x-cx)/fx, (y-cy)/fy, 1||). */
inline void import_depth_maps(MultiViewRig* rig,
                              const std::vector<std::string>& files,
                              DepthConvention convention
                                  = DepthConvention::ray_distance)
{
    if (files.size() != rig->views.size())
        throw ConfigError("scene-synth: expected "
                          + std::to_string(rig->views.size())
                          + " depth files, got "
                          + std::to_string(files.size()));

    for (std::size_t j = 0; j < files.size(); ++j) {
        CameraView& view = rig->views[j];
        const Grid2<float> grid = read_depth_grid(files[j]);
        if (grid.width() != view.width() || grid.height() != view.height())
            throw ConfigError("scene-synth: depth map dimensions mismatch for "
                              "camera " + std::to_string(j) + " ("
                              + files[j] + ")");
        DepthMap depth(grid.width(), grid.height());
        for (int y = 0; y < grid.height(); ++y)
            for (int x = 0; x < grid.width(); ++x) {
                if (!view.foreground(x, y))
                    continue;
                double d = grid(x, y);
                if (convention == DepthConvention::planar)
                    d *= view.camera.planar_to_ray_scale(x, y);
                if (!(d > 0.0) || !std::isfinite(d))
                    throw ConfigError(
                        "scene-synth: non-positive depth on foreground, camera "
                        + std::to_string(j) + " pixel (" + std::to_string(x)
                        + "," + std::to_string(y) + ")");
                depth.set(x, y, d);
            }
        view.depth = std::move(depth);
    }
}

} // namespace srdf
