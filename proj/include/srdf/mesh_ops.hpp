#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include <Eigen/Core>

#include "srdf/mesh_types.hpp"
#include "srdf/view.hpp"

namespace srdf {

inline void compute_vertex_normals(TriangleMesh* mesh)
{
    mesh->normals.assign(mesh->vertices.size(), Eigen::Vector3d::Zero());
    for (const auto& t : mesh->triangles) {
        const Eigen::Vector3d n =
            (mesh->vertices[t[1]] - mesh->vertices[t[0]])
                .cross(mesh->vertices[t[2]] - mesh->vertices[t[0]]);
        for (const int v : t)
            mesh->normals[v] += n;   // area-weighted
    }
    for (auto& n : mesh->normals) {
        const double len = n.norm();
        if (len > 0.0)
            n /= len;
    }
}

/* Closed 2-manifold check: every undirected edge borders exactly two
 * triangles. */
inline bool is_watertight(const TriangleMesh& mesh)
{
    if (mesh.triangles.empty())
        return false;
    std::map<std::pair<int, int>, int> edge_count;
    for (const auto& t : mesh.triangles)
        for (int k = 0; k < 3; ++k) {
            const int a = t[k];
            const int b = t[(k + 1) % 3];
            edge_count[{std::min(a, b), std::max(a, b)}] += 1;
        }
    for (const auto& [edge, count] : edge_count)
        if (count != 2)
            return false;
    return true;
}

namespace detail {

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n)
    {
        std::iota(parent_.begin(), parent_.end(), 0);
    }

    std::size_t find(std::size_t a)
    {
        while (parent_[a] != a) {
            parent_[a] = parent_[parent_[a]];
            a = parent_[a];
        }
        return a;
    }

    void merge(std::size_t a, std::size_t b)
    {
        a = find(a);
        b = find(b);
        if (a != b)
            parent_[std::max(a, b)] = std::min(a, b);
    }

private:
    std::vector<std::size_t> parent_;
};

} // namespace detail

/* Keeps only connected components (via shared vertices) holding at least
 * min_fraction of the mesh's triangles. */
inline TriangleMesh filter_components(const TriangleMesh& mesh,
                                      double min_fraction)
{
    if (mesh.triangles.empty())
        return mesh;
    detail::UnionFind uf(mesh.vertices.size());
    for (const auto& t : mesh.triangles) {
        uf.merge(t[0], t[1]);
        uf.merge(t[0], t[2]);
    }
    std::map<std::size_t, long> component_size;
    for (const auto& t : mesh.triangles)
        component_size[uf.find(t[0])] += 1;

    const double threshold =
        min_fraction * static_cast<double>(mesh.triangles.size());
    TriangleMesh out;
    out.vertices = mesh.vertices;
    out.normals = mesh.normals;
    for (const auto& t : mesh.triangles)
        if (static_cast<double>(component_size[uf.find(t[0])]) >= threshold)
            out.triangles.push_back(t);
    return out;
}

/* Removes vertices no longer referenced by any triangle and reindexes. */
inline TriangleMesh compact_mesh(const TriangleMesh& mesh)
{
    std::vector<int> remap(mesh.vertices.size(), -1);
    TriangleMesh out;
    const bool with_normals = mesh.normals.size() == mesh.vertices.size();
    for (const auto& t : mesh.triangles) {
        std::array<int, 3> nt;
        for (int k = 0; k < 3; ++k) {
            if (remap[t[k]] < 0) {
                remap[t[k]] = static_cast<int>(out.vertices.size());
                out.vertices.push_back(mesh.vertices[t[k]]);
                if (with_normals)
                    out.normals.push_back(mesh.normals[t[k]]);
            }
            nt[k] = remap[t[k]];
        }
        out.triangles.push_back(nt);
    }
    return out;
}

/* Mask-based cleaning: removes vertices that project outside the
 * silhouette of every camera that sees them, drops the resulting
 * degenerate triangles, keeps only connected components with at least
 * min_component_fraction of the triangles, and compacts. */
inline TriangleMesh clean_mesh(const TriangleMesh& mesh, const MultiViewRig& rig,
                               double min_component_fraction = 0.001)
{
    std::vector<std::uint8_t> keep(mesh.vertices.size(), 1);
    for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
        bool seen = false;
        bool inside_any = false;
        for (const auto& view : rig.views) {
            Projection proj;
            if (view.camera.project(mesh.vertices[v], &proj)
                != ViewStatus::visible)
                continue;
            if (!view.camera.inside_bounds(proj.u, proj.v))
                continue;
            seen = true;
            const int px = static_cast<int>(std::lround(proj.u));
            const int py = static_cast<int>(std::lround(proj.v));
            if (view.foreground(px, py)) {
                inside_any = true;
                break;
            }
        }
        if (seen && !inside_any)
            keep[v] = 0;
    }

    TriangleMesh filtered;
    filtered.vertices = mesh.vertices;
    filtered.normals = mesh.normals;
    for (const auto& t : mesh.triangles) {
        if (!keep[t[0]] || !keep[t[1]] || !keep[t[2]])
            continue;
        const double area =
            0.5 * (mesh.vertices[t[1]] - mesh.vertices[t[0]])
                      .cross(mesh.vertices[t[2]] - mesh.vertices[t[0]]).norm();
        if (area <= 0.0)
            continue;
        filtered.triangles.push_back(t);
    }

    return compact_mesh(filter_components(filtered, min_component_fraction));
}

} // namespace srdf
