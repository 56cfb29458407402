#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "srdf/mc_tables.hpp"
#include "srdf/mesh_types.hpp"
#include "srdf/tsdf.hpp"

namespace srdf {

struct MarchingCubesStats {
    long cells_visited = 0;
    long cells_meshed = 0;
    bool any_sign_change = false;
};

namespace detail {

/* Axis along which an edge's two cube corners differ. */
inline int mc_edge_axis(int a, int b)
{
    for (int axis = 0; axis < 3; ++axis)
        if (kMcCornerOffset[a][axis] != kMcCornerOffset[b][axis])
            return axis;
    return 0;
}

} // namespace detail

/* Standard 256-case extraction of the iso-surface, restricted to cells
 * whose 8 corners are all observed. Vertices are deduplicated through a
 * global (grid corner, axis) edge key so adjacent cells share them, which
 * keeps closed surfaces watertight. Cells are traversed in index order;
 * output is deterministic. Triangles are wound so normals point toward
 * positive field values, i.e. toward free space under the SRDF sign
 * convention. */
inline TriangleMesh marching_cubes(const TsdfVolume& volume, double iso = 0.0,
                                   MarchingCubesStats* stats = nullptr)
{
    TriangleMesh mesh;
    MarchingCubesStats local;
    std::unordered_map<std::uint64_t, int> edge_vertex;
    edge_vertex.reserve(1 << 16);

    const int nx = volume.nx();
    const int ny = volume.ny();
    const int nz = volume.nz();

    const auto corner_id = [&](int ix, int iy, int iz) {
        return (static_cast<std::uint64_t>(iz) * ny + iy) * nx + ix;
    };

    double value[8];
    std::uint64_t corner[8];

    for (int iz = 0; iz + 1 < nz; ++iz)
        for (int iy = 0; iy + 1 < ny; ++iy)
            for (int ix = 0; ix + 1 < nx; ++ix) {
                bool observed = true;
                for (int k = 0; k < 8; ++k) {
                    const int cx = ix + kMcCornerOffset[k][0];
                    const int cy = iy + kMcCornerOffset[k][1];
                    const int cz = iz + kMcCornerOffset[k][2];
                    const std::size_t i = volume.index(cx, cy, cz);
                    if (!volume.observed(i)) {
                        observed = false;
                        break;
                    }
                    value[k] = volume.tsdf(i);
                    corner[k] = corner_id(cx, cy, cz);
                }
                if (!observed)
                    continue;
                ++local.cells_visited;

                int cube = 0;
                for (int k = 0; k < 8; ++k)
                    if (value[k] < iso)
                        cube |= 1 << k;
                if (kMcEdgeTable[cube] == 0)
                    continue;
                local.any_sign_change = true;
                ++local.cells_meshed;

                int edge_to_vertex[12];
                for (int e = 0; e < 12; ++e) {
                    if (!(kMcEdgeTable[cube] & (1 << e)))
                        continue;
                    const int a = kMcEdgeCorners[e][0];
                    const int b = kMcEdgeCorners[e][1];
                    const std::uint64_t key =
                        (std::min(corner[a], corner[b]) << 2)
                        | static_cast<std::uint64_t>(detail::mc_edge_axis(a, b));
                    const auto it = edge_vertex.find(key);
                    if (it != edge_vertex.end()) {
                        edge_to_vertex[e] = it->second;
                        continue;
                    }
                    const double va = value[a];
                    const double vb = value[b];
                    double t = 0.5;
                    if (std::abs(vb - va) > 1e-300)
                        t = std::clamp((iso - va) / (vb - va), 0.0, 1.0);
                    const Eigen::Vector3d pa = volume.voxel_center(
                        ix + kMcCornerOffset[a][0], iy + kMcCornerOffset[a][1],
                        iz + kMcCornerOffset[a][2]);
                    const Eigen::Vector3d pb = volume.voxel_center(
                        ix + kMcCornerOffset[b][0], iy + kMcCornerOffset[b][1],
                        iz + kMcCornerOffset[b][2]);
                    const int vi = static_cast<int>(mesh.vertices.size());
                    mesh.vertices.push_back(pa + t * (pb - pa));
                    edge_vertex.emplace(key, vi);
                    edge_to_vertex[e] = vi;
                }

                const std::int8_t* tri = kMcTriTable[cube];
                for (int k = 0; tri[k] != -1; k += 3)
                    // reversed winding: the tables assume inside = below iso
                    // with the opposite orientation convention
                    mesh.triangles.push_back({edge_to_vertex[tri[k]],
                                              edge_to_vertex[tri[k + 2]],
                                              edge_to_vertex[tri[k + 1]]});
            }

    if (stats != nullptr)
        *stats = local;
    return mesh;
}

} // namespace srdf
