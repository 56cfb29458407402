#pragma once

#include <fstream>
#include <iomanip>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "srdf/camera.hpp"
#include "srdf/errors.hpp"

namespace srdf {

struct CameraRecord {
    Intrinsics k;
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    Eigen::Vector3d translation = Eigen::Vector3d::Zero();
};

/* Plain-text camera list: camera count, then per camera one line of
 * "fx fy cx cy", one line for the row-major 3x3 rotation and one for the
 * translation. Image dimensions live with the image files. */
inline void write_cameras(const std::string& path,
                          const std::vector<CameraRecord>& cameras)
{
    std::ofstream out(path);
    if (!out)
        throw IoError("cameras: cannot open for writing: " + path);
    out << std::setprecision(17);
    out << cameras.size() << "\n";
    for (const auto& c : cameras) {
        out << c.k.fx << " " << c.k.fy << " " << c.k.cx << " " << c.k.cy << "\n";
        for (int r = 0; r < 3; ++r)
            for (int col = 0; col < 3; ++col)
                out << c.rotation(r, col) << (r == 2 && col == 2 ? "\n" : " ");
        out << c.translation.x() << " " << c.translation.y() << " "
            << c.translation.z() << "\n";
    }
    if (!out)
        throw IoError("cameras: write failed: " + path);
}

inline std::vector<CameraRecord> read_cameras(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cameras: cannot open: " + path);
    std::size_t n = 0;
    in >> n;
    if (!in || n == 0 || n > 100000)
        throw IoError("cameras: malformed camera count: " + path);
    std::vector<CameraRecord> cameras(n);
    for (auto& c : cameras) {
        in >> c.k.fx >> c.k.fy >> c.k.cx >> c.k.cy;
        for (int r = 0; r < 3; ++r)
            for (int col = 0; col < 3; ++col)
                in >> c.rotation(r, col);
        in >> c.translation.x() >> c.translation.y() >> c.translation.z();
        if (!in)
            throw IoError("cameras: truncated file: " + path);
    }
    return cameras;
}

/* Axis-aligned scene bounds as six numbers (min xyz, max xyz). */
inline void write_bounds(const std::string& path, const Aabb& bounds)
{
    std::ofstream out(path);
    if (!out)
        throw IoError("bounds: cannot open for writing: " + path);
    out << std::setprecision(17)
        << bounds.min.x() << " " << bounds.min.y() << " " << bounds.min.z()
        << "\n"
        << bounds.max.x() << " " << bounds.max.y() << " " << bounds.max.z()
        << "\n";
}

inline Aabb read_bounds(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("bounds: cannot open: " + path);
    Aabb b;
    in >> b.min.x() >> b.min.y() >> b.min.z()
       >> b.max.x() >> b.max.y() >> b.max.z();
    if (!in)
        throw IoError("bounds: malformed file: " + path);
    return b;
}

} // namespace srdf
