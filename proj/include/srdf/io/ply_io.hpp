#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "srdf/errors.hpp"
#include "srdf/mesh_types.hpp"

namespace srdf {

/* Binary little-endian PLY with float positions, optional float normals
 * and int32 face indices. */
inline void write_ply(const std::string& path, const TriangleMesh& mesh)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("ply: cannot open for writing: " + path);

    const bool with_normals = mesh.normals.size() == mesh.vertices.size()
        && !mesh.normals.empty();
    out << "ply\nformat binary_little_endian 1.0\n"
        << "element vertex " << mesh.vertices.size() << "\n"
        << "property float x\nproperty float y\nproperty float z\n";
    if (with_normals)
        out << "property float nx\nproperty float ny\nproperty float nz\n";
    out << "element face " << mesh.triangles.size() << "\n"
        << "property list uchar int vertex_indices\nend_header\n";

    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
        float v[6];
        for (int c = 0; c < 3; ++c)
            v[c] = static_cast<float>(mesh.vertices[i][c]);
        int n = 3;
        if (with_normals) {
            for (int c = 0; c < 3; ++c)
                v[3 + c] = static_cast<float>(mesh.normals[i][c]);
            n = 6;
        }
        out.write(reinterpret_cast<const char*>(v),
                  static_cast<std::streamsize>(n * sizeof(float)));
    }
    for (const auto& tri : mesh.triangles) {
        const std::uint8_t count = 3;
        std::int32_t idx[3] = {tri[0], tri[1], tri[2]};
        out.write(reinterpret_cast<const char*>(&count), 1);
        out.write(reinterpret_cast<const char*>(idx), 12);
    }
    if (!out)
        throw IoError("ply: write failed: " + path);
}

namespace detail {

struct PlyProperty {
    std::string name;
    std::string type;
    bool is_list = false;
    std::string count_type;
};

struct PlyElement {
    std::string name;
    std::size_t count = 0;
    std::vector<PlyProperty> properties;
};

inline std::size_t ply_type_size(const std::string& t)
{
    if (t == "char" || t == "uchar" || t == "int8" || t == "uint8")
        return 1;
    if (t == "short" || t == "ushort" || t == "int16" || t == "uint16")
        return 2;
    if (t == "int" || t == "uint" || t == "int32" || t == "uint32"
        || t == "float" || t == "float32")
        return 4;
    if (t == "double" || t == "float64")
        return 8;
    throw IoError("ply: unsupported property type: " + t);
}

inline double ply_read_binary_scalar(std::istream& in, const std::string& t)
{
    char buf[8];
    const std::size_t sz = ply_type_size(t);
    in.read(buf, static_cast<std::streamsize>(sz));
    if (t == "char" || t == "int8") {
        std::int8_t v; std::memcpy(&v, buf, 1); return v;
    }
    if (t == "uchar" || t == "uint8") {
        std::uint8_t v; std::memcpy(&v, buf, 1); return v;
    }
    if (t == "short" || t == "int16") {
        std::int16_t v; std::memcpy(&v, buf, 2); return v;
    }
    if (t == "ushort" || t == "uint16") {
        std::uint16_t v; std::memcpy(&v, buf, 2); return v;
    }
    if (t == "int" || t == "int32") {
        std::int32_t v; std::memcpy(&v, buf, 4); return v;
    }
    if (t == "uint" || t == "uint32") {
        std::uint32_t v; std::memcpy(&v, buf, 4); return v;
    }
    if (t == "float" || t == "float32") {
        float v; std::memcpy(&v, buf, 4); return v;
    }
    double v;
    std::memcpy(&v, buf, 8);
    return v;
}

} // namespace detail

/* Reads ascii or binary little-endian PLY; keeps positions, normals and
 * triangle faces (polygons are fan-triangulated), skips everything else.
 * Files without a face element load as point clouds. */
inline TriangleMesh read_ply(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("ply: cannot open: " + path);

    std::string line;
    std::getline(in, line);
    if (line.rfind("ply", 0) != 0)
        throw IoError("ply: missing magic: " + path);

    bool binary = false;
    std::vector<detail::PlyElement> elements;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string token;
        ls >> token;
        if (token == "comment" || token == "obj_info" || token.empty())
            continue;
        if (token == "format") {
            std::string fmt;
            ls >> fmt;
            if (fmt == "binary_little_endian")
                binary = true;
            else if (fmt != "ascii")
                throw IoError("ply: unsupported format: " + fmt);
        } else if (token == "element") {
            detail::PlyElement el;
            ls >> el.name >> el.count;
            elements.push_back(el);
        } else if (token == "property") {
            if (elements.empty())
                throw IoError("ply: property before element: " + path);
            detail::PlyProperty prop;
            std::string t;
            ls >> t;
            if (t == "list") {
                prop.is_list = true;
                ls >> prop.count_type >> prop.type >> prop.name;
            } else {
                prop.type = t;
                ls >> prop.name;
            }
            elements.back().properties.push_back(prop);
        } else if (token == "end_header") {
            break;
        }
    }

    TriangleMesh mesh;
    const auto read_scalar = [&](const std::string& type) {
        if (binary)
            return detail::ply_read_binary_scalar(in, type);
        double v;
        in >> v;
        return v;
    };

    for (const auto& el : elements) {
        if (el.name == "vertex") {
            mesh.vertices.resize(el.count);
            int xi = -1, yi = -1, zi = -1, nxi = -1, nyi = -1, nzi = -1;
            for (std::size_t p = 0; p < el.properties.size(); ++p) {
                const auto& name = el.properties[p].name;
                if (name == "x") xi = static_cast<int>(p);
                else if (name == "y") yi = static_cast<int>(p);
                else if (name == "z") zi = static_cast<int>(p);
                else if (name == "nx") nxi = static_cast<int>(p);
                else if (name == "ny") nyi = static_cast<int>(p);
                else if (name == "nz") nzi = static_cast<int>(p);
            }
            if (xi < 0 || yi < 0 || zi < 0)
                throw IoError("ply: vertex element lacks x/y/z: " + path);
            const bool with_normals = nxi >= 0 && nyi >= 0 && nzi >= 0;
            if (with_normals)
                mesh.normals.resize(el.count);
            std::vector<double> values(el.properties.size());
            for (std::size_t i = 0; i < el.count; ++i) {
                for (std::size_t p = 0; p < el.properties.size(); ++p) {
                    if (el.properties[p].is_list)
                        throw IoError("ply: list property on vertices: " + path);
                    values[p] = read_scalar(el.properties[p].type);
                }
                mesh.vertices[i] =
                    Eigen::Vector3d(values[xi], values[yi], values[zi]);
                if (with_normals)
                    mesh.normals[i] =
                        Eigen::Vector3d(values[nxi], values[nyi], values[nzi]);
            }
        } else if (el.name == "face") {
            mesh.triangles.reserve(el.count);
            for (std::size_t i = 0; i < el.count; ++i) {
                for (const auto& prop : el.properties) {
                    if (!prop.is_list) {
                        read_scalar(prop.type);
                        continue;
                    }
                    const int count =
                        static_cast<int>(read_scalar(prop.count_type));
                    std::vector<int> idx(count);
                    for (int k = 0; k < count; ++k)
                        idx[k] = static_cast<int>(read_scalar(prop.type));
                    if (prop.name == "vertex_indices"
                        || prop.name == "vertex_index")
                        for (int k = 2; k < count; ++k)
                            mesh.triangles.push_back(
                                {idx[0], idx[k - 1], idx[k]});
                }
            }
        } else {
            // skip unknown element payload
            for (std::size_t i = 0; i < el.count; ++i)
                for (const auto& prop : el.properties) {
                    if (prop.is_list) {
                        const int count =
                            static_cast<int>(read_scalar(prop.count_type));
                        for (int k = 0; k < count; ++k)
                            read_scalar(prop.type);
                    } else {
                        read_scalar(prop.type);
                    }
                }
        }
        if (!in)
            throw IoError("ply: truncated file: " + path);
    }

    for (const auto& tri : mesh.triangles)
        for (const int v : tri)
            if (v < 0 || static_cast<std::size_t>(v) >= mesh.vertices.size())
                throw IoError("ply: face index out of range: " + path);
    return mesh;
}

} // namespace srdf
