#pragma once

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "srdf/errors.hpp"
#include "srdf/mesh_types.hpp"

namespace srdf {

/* Minimal OBJ support: v and f records, polygon fan triangulation,
 * "v/vt/vn" index triples reduced to the vertex index. */
inline TriangleMesh read_obj(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("obj: cannot open: " + path);

    TriangleMesh mesh;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string token;
        ls >> token;
        if (token == "v") {
            Eigen::Vector3d v;
            ls >> v.x() >> v.y() >> v.z();
            if (!ls && !ls.eof())
                throw IoError("obj: malformed vertex: " + path);
            mesh.vertices.push_back(v);
        } else if (token == "f") {
            std::vector<int> idx;
            std::string vert;
            while (ls >> vert) {
                const std::size_t slash = vert.find('/');
                const int i = std::stoi(slash == std::string::npos
                                            ? vert : vert.substr(0, slash));
                if (i == 0)
                    throw IoError("obj: zero face index: " + path);
                idx.push_back(i > 0
                    ? i - 1
                    : static_cast<int>(mesh.vertices.size()) + i);
            }
            if (idx.size() < 3)
                throw IoError("obj: face with fewer than 3 vertices: " + path);
            for (std::size_t k = 2; k < idx.size(); ++k)
                mesh.triangles.push_back({idx[0], idx[k - 1], idx[k]});
        }
    }
    for (const auto& tri : mesh.triangles)
        for (const int v : tri)
            if (v < 0 || static_cast<std::size_t>(v) >= mesh.vertices.size())
                throw IoError("obj: face index out of range: " + path);
    return mesh;
}

inline void write_obj(const std::string& path, const TriangleMesh& mesh)
{
    std::ofstream out(path);
    if (!out)
        throw IoError("obj: cannot open for writing: " + path);
    out << std::setprecision(17);
    for (const auto& v : mesh.vertices)
        out << "v " << v.x() << " " << v.y() << " " << v.z() << "\n";
    for (const auto& t : mesh.triangles)
        out << "f " << t[0] + 1 << " " << t[1] + 1 << " " << t[2] + 1 << "\n";
    if (!out)
        throw IoError("obj: write failed: " + path);
}

} // namespace srdf
