#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "srdf/camera.hpp"
#include "srdf/errors.hpp"
#include "srdf/grid.hpp"

namespace srdf {

/* Bilinear footprint at continuous (u, v): the 2x2 pixel block anchored
 * at (x0, y0) with weights w[k] for pixels (x0, y0), (x0+1, y0),
 * (x0, y0+1), (x0+1, y0+1). Weights sum to 1; zero-weight pixels do not
 * count as contributing. */
struct BilinearWeights {
    int x0 = 0;
    int y0 = 0;
    double w[4] = {0, 0, 0, 0};

    static BilinearWeights at(double u, double v, int width, int height)
    {
        BilinearWeights b;
        b.x0 = static_cast<int>(std::floor(u));
        b.y0 = static_cast<int>(std::floor(v));
        b.x0 = std::max(0, std::min(b.x0, width - 2));
        b.y0 = std::max(0, std::min(b.y0, height - 2));
        const double fu = std::clamp(u - b.x0, 0.0, 1.0);
        const double fv = std::clamp(v - b.y0, 0.0, 1.0);
        b.w[0] = (1.0 - fu) * (1.0 - fv);
        b.w[1] = fu * (1.0 - fv);
        b.w[2] = (1.0 - fu) * fv;
        b.w[3] = fu * fv;
        return b;
    }

    int pixel_x(int k) const { return x0 + (k & 1); }
    int pixel_y(int k) const { return y0 + (k >> 1); }
};

struct DepthLookup {
    ViewStatus status = ViewStatus::out_of_view;
    double value = 0.0;
    BilinearWeights weights;
};

struct SrdfValue {
    ViewStatus status = ViewStatus::out_of_view;
    double value = 0.0;         // D_j(X) - Z_j(X)
    double ray_dist = 0.0;      // Z_j(X)
    DepthLookup lookup;
};

/* One calibrated view: image, silhouette mask and the per-pixel depth
 * map that the optimizer mutates. Depth is stored as Euclidean ray
 * distance so the signed ray distance is a plain subtraction. */
struct CameraView {
    Camera camera;
    Image image;
    Mask mask;
    DepthMap depth;

    int width() const { return camera.width(); }
    int height() const { return camera.height(); }

    bool foreground(int x, int y) const { return mask(x, y) != 0; }
    bool foreground(std::size_t i) const { return mask[i] != 0; }

    std::size_t foreground_count() const
    {
        std::size_t n = 0;
        for (std::size_t i = 0; i < mask.size(); ++i)
            n += mask[i] != 0;
        return n;
    }

    void validate() const
    {
        camera.validate();
        const int w = camera.width();
        const int h = camera.height();
        if (image.width() != w || image.height() != h
            || mask.width() != w || mask.height() != h
            || depth.width() != w || depth.height() != h)
            throw ConfigError("view: image/mask/depth dimensions disagree");
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                if (foreground(x, y)) {
                    if (!depth.has_depth(x, y) || !(depth.at(x, y) > 0.0))
                        throw ConfigError(
                            "view: foreground pixel without positive depth");
                } else if (depth.has_depth(x, y)) {
                    throw ConfigError("view: background pixel carries depth");
                }
            }
    }
};

/* Bilinear depth lookup at continuous image coordinates. Any contributing
 * (nonzero-weight) pixel that is background-masked invalidates the lookup;
 * callers treat that as occlusion. */
inline DepthLookup interpolate_depth(const CameraView& view, double u, double v)
{
    DepthLookup out;
    if (!view.camera.inside_interp_domain(u, v)) {
        out.status = ViewStatus::out_of_view;
        return out;
    }
    out.weights = BilinearWeights::at(u, v, view.width(), view.height());
    double d = 0.0;
    for (int k = 0; k < 4; ++k) {
        if (out.weights.w[k] == 0.0)
            continue;
        const int px = out.weights.pixel_x(k);
        const int py = out.weights.pixel_y(k);
        if (!view.foreground(px, py)) {
            out.status = ViewStatus::masked;
            return out;
        }
        d += out.weights.w[k] * view.depth.at(px, py);
    }
    out.value = d;
    out.status = ViewStatus::visible;
    return out;
}

/* Bilinear color lookup with the same footprint/validity convention. */
inline Eigen::Vector3d interpolate_color(const CameraView& view,
                                         const BilinearWeights& w)
{
    Eigen::Vector3d c = Eigen::Vector3d::Zero();
    for (int k = 0; k < 4; ++k)
        if (w.w[k] != 0.0)
            c += w.w[k] * view.image(w.pixel_x(k), w.pixel_y(k));
    return c;
}

/* Signed ray distance of X with respect to this view: positive between
 * the camera and the predicted surface, zero on it, negative beyond.
 * Invisible states mean "treat this camera as occluded at X". */
inline SrdfValue signed_ray_distance(const CameraView& view, const Eigen::Vector3d& X)
{
    SrdfValue out;
    Projection proj;
    const ViewStatus ps = view.camera.project(X, &proj);
    if (ps != ViewStatus::visible) {
        out.status = ps;
        return out;
    }
    out.ray_dist = proj.ray_dist;
    out.lookup = interpolate_depth(view, proj.u, proj.v);
    out.status = out.lookup.status;
    if (out.status == ViewStatus::visible)
        out.value = out.lookup.value - proj.ray_dist;
    return out;
}

/* 3D sample along a pixel ray, kept with its provenance so gradients can
 * be scattered back to depth pixels. */
struct RaySample {
    Eigen::Vector3d point = Eigen::Vector3d::Zero();
    int camera = -1;
    int pixel_x = 0;
    int pixel_y = 0;
    double offset = 0.0;    // signed offset from the current depth
};

struct MultiViewRig {
    std::vector<CameraView> views;
    Aabb bounds;

    int camera_count() const { return static_cast<int>(views.size()); }
    double diameter() const { return bounds.diameter(); }

    void validate() const
    {
        if (views.size() < 2)
            throw ConfigError("rig: needs at least 2 cameras");
        if (!(bounds.extent().minCoeff() > 0.0))
            throw ConfigError("rig: empty scene bounding box");
        for (std::size_t j = 0; j < views.size(); ++j) {
            views[j].validate();
            if (bounds.contains(views[j].camera.center()))
                throw ConfigError("rig: camera " + std::to_string(j)
                                  + " lies inside the scene bounding box");
        }
    }
};

} // namespace srdf
