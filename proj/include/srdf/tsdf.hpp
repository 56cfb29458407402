#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "srdf/errors.hpp"
#include "srdf/threading.hpp"
#include "srdf/view.hpp"

namespace srdf {

/* Truncated signed distance volume accumulated from depth maps by
 * weighted averaging (Curless-Levoy style, constant weight per
 * observation). Distances use the SRDF sign convention: positive in free
 * space between camera and surface, negative behind it.
 *
 * Samples are accumulated as fixed-point integers so integration is
 * exactly order-independent: permuting the cameras yields bit-identical
 * volumes. */
class TsdfVolume {
public:
    TsdfVolume(const Aabb& box, int resolution, double truncation_voxels = 3.0,
               double observation_weight = 1.0)
    {
        if (resolution < 2)
            throw ConfigError("fusion: volume resolution must be >= 2");
        if (!(truncation_voxels > 0.0))
            throw ConfigError("fusion: truncation must be > 0");
        if (!(observation_weight > 0.0))
            throw ConfigError("fusion: observation weight must be > 0");
        origin_ = box.min;
        voxel_ = box.extent().maxCoeff() / resolution;
        nx_ = std::max(2, static_cast<int>(std::ceil(box.extent().x() / voxel_)));
        ny_ = std::max(2, static_cast<int>(std::ceil(box.extent().y() / voxel_)));
        nz_ = std::max(2, static_cast<int>(std::ceil(box.extent().z() / voxel_)));
        truncation_ = truncation_voxels * voxel_;
        obs_weight_ = observation_weight;
        const std::size_t n = voxel_count();
        sum_.assign(n, 0);
        count_.assign(n, 0);
    }

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    int nz() const { return nz_; }
    double voxel_size() const { return voxel_; }
    double truncation() const { return truncation_; }
    const Eigen::Vector3d& origin() const { return origin_; }

    std::size_t voxel_count() const
    {
        return static_cast<std::size_t>(nx_) * ny_ * nz_;
    }

    std::size_t index(int ix, int iy, int iz) const
    {
        return (static_cast<std::size_t>(iz) * ny_ + iy) * nx_ + ix;
    }

    Eigen::Vector3d voxel_center(int ix, int iy, int iz) const
    {
        return origin_
            + voxel_ * Eigen::Vector3d(ix + 0.5, iy + 0.5, iz + 0.5);
    }

    bool observed(std::size_t i) const { return count_[i] > 0; }

    double tsdf(std::size_t i) const
    {
        if (count_[i] == 0)
            return truncation_;
        return truncation_ * static_cast<double>(sum_[i])
            / (kScale * count_[i]);
    }

    double weight(std::size_t i) const { return obs_weight_ * count_[i]; }

    /* Fuse one finalized depth map. Voxels whose projection is invalid
     * (behind, outside, masked) are untouched; so are voxels more than
     * one truncation behind the observed surface (space-carving
     * asymmetry). */
    void integrate(const CameraView& view)
    {
        parallel_for(0, nz_, [&](std::int64_t iz) {
            for (int iy = 0; iy < ny_; ++iy)
                for (int ix = 0; ix < nx_; ++ix) {
                    const Eigen::Vector3d V =
                        voxel_center(ix, iy, static_cast<int>(iz));
                    Projection proj;
                    if (view.camera.project(V, &proj) != ViewStatus::visible)
                        continue;
                    const DepthLookup lookup =
                        interpolate_depth(view, proj.u, proj.v);
                    if (lookup.status != ViewStatus::visible)
                        continue;
                    const double d = lookup.value - proj.ray_dist;
                    if (d <= -truncation_)
                        continue;
                    const double clamped =
                        std::min(d, truncation_) / truncation_;
                    const std::size_t i = index(ix, iy, static_cast<int>(iz));
                    sum_[i] += static_cast<std::int64_t>(
                        std::llround(clamped * kScale));
                    count_[i] += 1;
                }
        });
    }

    /* Debug dump: header then the tsdf and weight grids as float32. */
    void dump(const std::string& path) const
    {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw IoError("fusion: cannot open for writing: " + path);
        out.write("SRDFVOL1", 8);
        const std::int32_t dims[3] = {nx_, ny_, nz_};
        out.write(reinterpret_cast<const char*>(dims), 12);
        const double meta[5] = {origin_.x(), origin_.y(), origin_.z(),
                                voxel_, truncation_};
        out.write(reinterpret_cast<const char*>(meta), 40);
        std::vector<float> buf(voxel_count());
        for (std::size_t i = 0; i < buf.size(); ++i)
            buf[i] = static_cast<float>(tsdf(i));
        out.write(reinterpret_cast<const char*>(buf.data()),
                  static_cast<std::streamsize>(buf.size() * 4));
        for (std::size_t i = 0; i < buf.size(); ++i)
            buf[i] = static_cast<float>(weight(i));
        out.write(reinterpret_cast<const char*>(buf.data()),
                  static_cast<std::streamsize>(buf.size() * 4));
        if (!out)
            throw IoError("fusion: volume dump failed: " + path);
    }

private:
    static constexpr double kScale = 1099511627776.0;   // 2^40

    Eigen::Vector3d origin_;
    double voxel_ = 0.0;
    double truncation_ = 0.0;
    double obs_weight_ = 1.0;
    int nx_ = 0, ny_ = 0, nz_ = 0;
    std::vector<std::int64_t> sum_;
    std::vector<std::int32_t> count_;
};

inline void tsdf_integrate(TsdfVolume* volume, const CameraView& view)
{
    volume->integrate(view);
}

} // namespace srdf
