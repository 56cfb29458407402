#pragma once

#include <cmath>
#include <string>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "srdf/errors.hpp"

namespace srdf {

struct Aabb {
    Eigen::Vector3d min = Eigen::Vector3d::Zero();
    Eigen::Vector3d max = Eigen::Vector3d::Zero();

    Eigen::Vector3d extent() const { return max - min; }
    Eigen::Vector3d center() const { return 0.5 * (min + max); }
    double diameter() const { return extent().norm(); }

    bool contains(const Eigen::Vector3d& p) const
    {
        return (p.array() >= min.array()).all()
            && (p.array() <= max.array()).all();
    }

    Aabb padded(double fraction) const
    {
        const Eigen::Vector3d pad = fraction * extent();
        return Aabb{min - pad, max + pad};
    }

    /* Ray/box overlap as a parameter interval; false when the ray misses.
     * dir need not be unit length. */
    bool clip_ray(const Eigen::Vector3d& origin, const Eigen::Vector3d& dir,
                  double* t_enter, double* t_exit) const
    {
        double t0 = 0.0;
        double t1 = std::numeric_limits<double>::infinity();
        for (int a = 0; a < 3; ++a) {
            if (dir[a] == 0.0) {
                if (origin[a] < min[a] || origin[a] > max[a])
                    return false;
                continue;
            }
            const double inv = 1.0 / dir[a];
            double lo = (min[a] - origin[a]) * inv;
            double hi = (max[a] - origin[a]) * inv;
            if (lo > hi)
                std::swap(lo, hi);
            t0 = std::max(t0, lo);
            t1 = std::min(t1, hi);
            if (t0 > t1)
                return false;
        }
        *t_enter = t0;
        *t_exit = t1;
        return true;
    }
};

struct Intrinsics {
    double fx = 0.0;
    double fy = 0.0;
    double cx = 0.0;
    double cy = 0.0;
};

/* Per-sample visibility signal. Anything but `visible` means "treat this
 * camera as occluded here": it contributes only the Gamma floor to the
 * consistency products and no gradient. */
enum class ViewStatus {
    visible,
    behind_camera,
    out_of_view,
    masked,         // lookup touched a background pixel
};

struct Projection {
    double u = 0.0;
    double v = 0.0;
    double ray_dist = 0.0;  // Euclidean distance from the camera center
};

/* Calibrated pinhole camera with a world-to-camera rigid transform
 * (x_cam = R x + t). Pixel (x, y) has its center at continuous image
 * coordinates (x, y); depth values are Euclidean ray distances. */
class Camera {
public:
    Camera() = default;
    Camera(const Intrinsics& k, const Eigen::Matrix3d& rotation,
           const Eigen::Vector3d& translation, int width, int height)
        : k_(k), rotation_(rotation), translation_(translation),
          width_(width), height_(height)
    {
        center_ = -rotation_.transpose() * translation_;
    }

    const Intrinsics& intrinsics() const { return k_; }
    const Eigen::Matrix3d& rotation() const { return rotation_; }
    const Eigen::Vector3d& translation() const { return translation_; }
    const Eigen::Vector3d& center() const { return center_; }
    int width() const { return width_; }
    int height() const { return height_; }

    /* Perspective projection. Returns behind_camera when X sits at or
     * behind the camera center along the optical axis; (u, v) are then
     * unusable. ray_dist is ||X - center||, not the planar z-depth. */
    ViewStatus project(const Eigen::Vector3d& X, Projection* out) const
    {
        const Eigen::Vector3d xc = rotation_ * X + translation_;
        if (xc.z() <= 0.0)
            return ViewStatus::behind_camera;
        out->u = k_.fx * xc.x() / xc.z() + k_.cx;
        out->v = k_.fy * xc.y() / xc.z() + k_.cy;
        out->ray_dist = (X - center_).norm();
        return ViewStatus::visible;
    }

    /* Unit world-space direction of the ray through image point (u, v). */
    Eigen::Vector3d ray_direction(double u, double v) const
    {
        Eigen::Vector3d d((u - k_.cx) / k_.fx, (v - k_.cy) / k_.fy, 1.0);
        return (rotation_.transpose() * d).normalized();
    }

    /* Point at Euclidean ray distance `dist` along pixel (x, y)'s ray. */
    Eigen::Vector3d unproject(int x, int y, double dist) const
    {
        return center_ + dist * ray_direction(x, y);
    }

    /* Scale factor between planar z-depth and ray distance at (u, v):
     * ray = plane * depth_scale. */
    double planar_to_ray_scale(double u, double v) const
    {
        const Eigen::Vector3d d((u - k_.cx) / k_.fx, (v - k_.cy) / k_.fy, 1.0);
        return d.norm();
    }

    /* Bilinear interpolation domain: pixel centers span [0, W-1] x [0, H-1].
     * The tolerance absorbs projection round-off at border pixels. */
    bool inside_interp_domain(double u, double v) const
    {
        constexpr double eps = 1e-9;
        return u >= -eps && u <= width_ - 1 + eps && v >= -eps
            && v <= height_ - 1 + eps;
    }

    /* Nearest-pixel domain, used for silhouette tests. */
    bool inside_bounds(double u, double v) const
    {
        return u >= -0.5 && u < width_ - 0.5 && v >= -0.5 && v < height_ - 0.5;
    }

    void validate() const
    {
        if (width_ < 2 || height_ < 2)
            throw ConfigError("camera: image must be at least 2x2 pixels");
        if (!(k_.fx > 0.0) || !(k_.fy > 0.0))
            throw ConfigError("camera: focal lengths must be positive");
        if (!(k_.cx >= 0.0 && k_.cx < width_ && k_.cy >= 0.0 && k_.cy < height_))
            throw ConfigError("camera: principal point outside the image");
        const Eigen::Matrix3d rtr =
            rotation_.transpose() * rotation_ - Eigen::Matrix3d::Identity();
        if (rtr.cwiseAbs().maxCoeff() > 1e-9)
            throw ConfigError("camera: rotation is not orthonormal");
        if (std::abs(rotation_.determinant() - 1.0) > 1e-9)
            throw ConfigError("camera: rotation determinant is not +1");
    }

private:
    Intrinsics k_;
    Eigen::Matrix3d rotation_ = Eigen::Matrix3d::Identity();
    Eigen::Vector3d translation_ = Eigen::Vector3d::Zero();
    Eigen::Vector3d center_ = Eigen::Vector3d::Zero();
    int width_ = 0;
    int height_ = 0;
};

/* World-to-camera pose that looks from `eye` toward `target`. */
inline void look_at(const Eigen::Vector3d& eye, const Eigen::Vector3d& target,
                    const Eigen::Vector3d& up_hint,
                    Eigen::Matrix3d* rotation, Eigen::Vector3d* translation)
{
    const Eigen::Vector3d forward = (target - eye).normalized();
    Eigen::Vector3d up = up_hint;
    if (std::abs(forward.dot(up.normalized())) > 0.999)
        up = std::abs(forward.z()) < 0.9 ? Eigen::Vector3d::UnitZ()
                                         : Eigen::Vector3d::UnitX();
    const Eigen::Vector3d right = forward.cross(up).normalized();
    const Eigen::Vector3d down = forward.cross(right).normalized();
    rotation->row(0) = right;
    rotation->row(1) = down;
    rotation->row(2) = forward;
    *translation = -(*rotation) * eye;
}

} // namespace srdf
