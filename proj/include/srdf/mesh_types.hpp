#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace srdf {

struct TriangleMesh {
    std::vector<Eigen::Vector3d> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<Eigen::Vector3d> normals;   // per vertex, optional (empty)

    bool empty() const { return triangles.empty(); }
    std::size_t vertex_count() const { return vertices.size(); }
    std::size_t triangle_count() const { return triangles.size(); }

    double triangle_area(std::size_t f) const
    {
        const auto& t = triangles[f];
        return 0.5 * (vertices[t[1]] - vertices[t[0]])
                         .cross(vertices[t[2]] - vertices[t[0]]).norm();
    }

    double surface_area() const
    {
        double a = 0.0;
        for (std::size_t f = 0; f < triangles.size(); ++f)
            a += triangle_area(f);
        return a;
    }
};

struct PointCloud {
    std::vector<Eigen::Vector3d> points;
    std::vector<int> face_ids;  // provenance, optional (empty)

    bool empty() const { return points.empty(); }
    std::size_t size() const { return points.size(); }
};

/* Squared distance from p to triangle (a, b, c); Ericson's region walk. */
inline double point_triangle_squared_distance(const Eigen::Vector3d& p,
                                              const Eigen::Vector3d& a,
                                              const Eigen::Vector3d& b,
                                              const Eigen::Vector3d& c)
{
    const Eigen::Vector3d ab = b - a;
    const Eigen::Vector3d ac = c - a;
    const Eigen::Vector3d ap = p - a;

    const double d1 = ab.dot(ap);
    const double d2 = ac.dot(ap);
    if (d1 <= 0.0 && d2 <= 0.0)
        return (p - a).squaredNorm();

    const Eigen::Vector3d bp = p - b;
    const double d3 = ab.dot(bp);
    const double d4 = ac.dot(bp);
    if (d3 >= 0.0 && d4 <= d3)
        return (p - b).squaredNorm();

    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
        const double v = d1 / (d1 - d3);
        return (p - (a + v * ab)).squaredNorm();
    }

    const Eigen::Vector3d cp = p - c;
    const double d5 = ab.dot(cp);
    const double d6 = ac.dot(cp);
    if (d6 >= 0.0 && d5 <= d6)
        return (p - c).squaredNorm();

    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
        const double w = d2 / (d2 - d6);
        return (p - (a + w * ac)).squaredNorm();
    }

    const double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
        const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return (p - (b + w * (c - b))).squaredNorm();
    }

    const double denom = 1.0 / (va + vb + vc);
    const double v = vb * denom;
    const double w = vc * denom;
    return (p - (a + ab * v + ac * w)).squaredNorm();
}

} // namespace srdf
