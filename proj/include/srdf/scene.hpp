#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "srdf/camera.hpp"
#include "srdf/errors.hpp"
#include "srdf/mesh_types.hpp"

namespace srdf {

/* Procedural surface albedo. `gradient` ramps RGB with position across
 * the scene bounds, `checker` is a 3D parity pattern, `face_color` cycles
 * a palette per triangle (meshes only). */
struct Albedo {
    enum class Kind { solid, checker, gradient, face_color };

    Kind kind = Kind::solid;
    Eigen::Vector3d color_a = Eigen::Vector3d(0.8, 0.8, 0.8);
    Eigen::Vector3d color_b = Eigen::Vector3d(0.2, 0.2, 0.2);
    double scale = 0.25;                        // checker cell size
    std::vector<Eigen::Vector3d> palette;       // face_color

    Eigen::Vector3d eval(const Eigen::Vector3d& X, const Aabb& bounds,
                         int face_id) const
    {
        switch (kind) {
        case Kind::solid:
            return color_a;
        case Kind::checker: {
            const long px = static_cast<long>(std::floor(X.x() / scale));
            const long py = static_cast<long>(std::floor(X.y() / scale));
            const long pz = static_cast<long>(std::floor(X.z() / scale));
            if (!palette.empty()) {
                // hashed multi-color cells; adjacent cells rarely match
                const std::uint64_t h = static_cast<std::uint64_t>(px)
                        * 0x8da6b343u
                    ^ static_cast<std::uint64_t>(py) * 0xd8163841u
                    ^ static_cast<std::uint64_t>(pz) * 0xcb1ab31fu;
                return palette[(h * 0x9e3779b97f4a7c15ull >> 33)
                               % palette.size()];
            }
            return ((px + py + pz) & 1) ? color_b : color_a;
        }
        case Kind::gradient: {
            const Eigen::Vector3d ext = bounds.extent();
            Eigen::Vector3d t;
            for (int a = 0; a < 3; ++a)
                t[a] = ext[a] > 0.0
                    ? std::clamp((X[a] - bounds.min[a]) / ext[a], 0.0, 1.0)
                    : 0.5;
            return color_a + (color_b - color_a).cwiseProduct(t);
        }
        case Kind::face_color:
            if (palette.empty())
                return color_a;
            return palette[static_cast<std::size_t>(face_id >= 0 ? face_id : 0)
                           % palette.size()];
        }
        return color_a;
    }
};

struct SurfaceHit {
    double t = std::numeric_limits<double>::infinity();
    Eigen::Vector3d point = Eigen::Vector3d::Zero();
    Eigen::Vector3d normal = Eigen::Vector3d::Zero();
    const Albedo* albedo = nullptr;
    int face_id = -1;

    bool valid() const { return std::isfinite(t); }
};

class SceneShape {
public:
    virtual ~SceneShape() = default;

    /* Nearest intersection with t > t_min; returns false on a miss. */
    virtual bool intersect(const Eigen::Vector3d& origin,
                           const Eigen::Vector3d& dir, double t_min,
                           SurfaceHit* hit) const = 0;

    /* Signed distance, negative inside. Exact for primitives; meshes use
     * unsigned distance with a parity-based sign. */
    virtual double signed_distance(const Eigen::Vector3d& p) const = 0;

    virtual Aabb bounds() const = 0;
};

class SphereShape final : public SceneShape {
public:
    SphereShape(const Eigen::Vector3d& center, double radius, Albedo albedo)
        : center_(center), radius_(radius), albedo_(std::move(albedo))
    {
        if (!(radius > 0.0))
            throw ConfigError("scene-synth: sphere radius must be > 0");
    }

    bool intersect(const Eigen::Vector3d& origin, const Eigen::Vector3d& dir,
                   double t_min, SurfaceHit* hit) const override
    {
        const Eigen::Vector3d oc = origin - center_;
        const double b = oc.dot(dir);
        const double c = oc.squaredNorm() - radius_ * radius_;
        const double disc = b * b - c;
        if (disc < 0.0)
            return false;
        const double sq = std::sqrt(disc);
        double t = -b - sq;
        if (t <= t_min)
            t = -b + sq;
        if (t <= t_min)
            return false;
        hit->t = t;
        hit->point = origin + t * dir;
        hit->normal = (hit->point - center_) / radius_;
        hit->albedo = &albedo_;
        hit->face_id = -1;
        return true;
    }

    double signed_distance(const Eigen::Vector3d& p) const override
    {
        return (p - center_).norm() - radius_;
    }

    Aabb bounds() const override
    {
        const Eigen::Vector3d r(radius_, radius_, radius_);
        return Aabb{center_ - r, center_ + r};
    }

private:
    Eigen::Vector3d center_;
    double radius_;
    Albedo albedo_;
};

class BoxShape final : public SceneShape {
public:
    BoxShape(const Eigen::Vector3d& lo, const Eigen::Vector3d& hi, Albedo albedo)
        : box_{lo, hi}, albedo_(std::move(albedo))
    {
        if (!((hi - lo).minCoeff() > 0.0))
            throw ConfigError("scene-synth: box must have positive extent");
    }

    bool intersect(const Eigen::Vector3d& origin, const Eigen::Vector3d& dir,
                   double t_min, SurfaceHit* hit) const override
    {
        double t0, t1;
        if (!box_.clip_ray(origin, dir, &t0, &t1))
            return false;
        double t = t0 > t_min ? t0 : t1;
        if (t <= t_min)
            return false;
        hit->t = t;
        hit->point = origin + t * dir;
        hit->normal = face_normal(hit->point);
        hit->albedo = &albedo_;
        hit->face_id = -1;
        return true;
    }

    double signed_distance(const Eigen::Vector3d& p) const override
    {
        const Eigen::Vector3d c = box_.center();
        const Eigen::Vector3d h = 0.5 * box_.extent();
        const Eigen::Vector3d q = (p - c).cwiseAbs() - h;
        const double outside = q.cwiseMax(0.0).norm();
        const double inside = std::min(q.maxCoeff(), 0.0);
        return outside + inside;
    }

    Aabb bounds() const override { return box_; }

private:
    Eigen::Vector3d face_normal(const Eigen::Vector3d& p) const
    {
        const Eigen::Vector3d c = box_.center();
        const Eigen::Vector3d h = 0.5 * box_.extent();
        const Eigen::Vector3d r = (p - c).cwiseQuotient(h);
        int axis = 0;
        r.cwiseAbs().maxCoeff(&axis);
        Eigen::Vector3d n = Eigen::Vector3d::Zero();
        n[axis] = r[axis] > 0.0 ? 1.0 : -1.0;
        return n;
    }

    Aabb box_;
    Albedo albedo_;
};

class UnionShape final : public SceneShape {
public:
    explicit UnionShape(std::vector<std::unique_ptr<SceneShape>> children)
        : children_(std::move(children))
    {
        if (children_.empty())
            throw ConfigError("scene-synth: union needs at least one child");
    }

    bool intersect(const Eigen::Vector3d& origin, const Eigen::Vector3d& dir,
                   double t_min, SurfaceHit* hit) const override
    {
        bool any = false;
        SurfaceHit best;
        for (const auto& child : children_) {
            SurfaceHit h;
            if (child->intersect(origin, dir, t_min, &h) && h.t < best.t) {
                best = h;
                any = true;
            }
        }
        if (any)
            *hit = best;
        return any;
    }

    double signed_distance(const Eigen::Vector3d& p) const override
    {
        double d = std::numeric_limits<double>::infinity();
        for (const auto& child : children_)
            d = std::min(d, child->signed_distance(p));
        return d;
    }

    Aabb bounds() const override
    {
        Aabb b = children_.front()->bounds();
        for (const auto& child : children_) {
            const Aabb cb = child->bounds();
            b.min = b.min.cwiseMin(cb.min);
            b.max = b.max.cwiseMax(cb.max);
        }
        return b;
    }

private:
    std::vector<std::unique_ptr<SceneShape>> children_;
};

/* Triangle soup; intersection is brute force with an AABB early-out,
 * adequate for desk-scale inputs. */
class MeshShape final : public SceneShape {
public:
    MeshShape(TriangleMesh mesh, Albedo albedo)
        : mesh_(std::move(mesh)), albedo_(std::move(albedo))
    {
        if (mesh_.triangles.empty())
            throw ConfigError("scene-synth: mesh shape has no triangles");
        bounds_.min = bounds_.max = mesh_.vertices.front();
        for (const auto& v : mesh_.vertices) {
            bounds_.min = bounds_.min.cwiseMin(v);
            bounds_.max = bounds_.max.cwiseMax(v);
        }
    }

    bool intersect(const Eigen::Vector3d& origin, const Eigen::Vector3d& dir,
                   double t_min, SurfaceHit* hit) const override
    {
        double t0, t1;
        if (!bounds_.clip_ray(origin, dir, &t0, &t1))
            return false;
        bool any = false;
        double best = std::numeric_limits<double>::infinity();
        int best_face = -1;
        for (std::size_t f = 0; f < mesh_.triangles.size(); ++f) {
            double t;
            if (intersect_triangle(origin, dir, f, &t) && t > t_min && t < best) {
                best = t;
                best_face = static_cast<int>(f);
                any = true;
            }
        }
        if (!any)
            return false;
        hit->t = best;
        hit->point = origin + best * dir;
        hit->normal = face_normal(best_face, dir);
        hit->albedo = &albedo_;
        hit->face_id = best_face;
        return true;
    }

    double signed_distance(const Eigen::Vector3d& p) const override
    {
        double d2 = std::numeric_limits<double>::infinity();
        for (std::size_t f = 0; f < mesh_.triangles.size(); ++f)
            d2 = std::min(d2, point_triangle_sqdist(p, f));
        const double d = std::sqrt(d2);
        return is_inside(p) ? -d : d;
    }

    Aabb bounds() const override { return bounds_; }

    const TriangleMesh& mesh() const { return mesh_; }

private:
    bool intersect_triangle(const Eigen::Vector3d& origin,
                            const Eigen::Vector3d& dir, std::size_t f,
                            double* t_out) const
    {
        // Moeller-Trumbore
        const auto& tri = mesh_.triangles[f];
        const Eigen::Vector3d& a = mesh_.vertices[tri[0]];
        const Eigen::Vector3d e1 = mesh_.vertices[tri[1]] - a;
        const Eigen::Vector3d e2 = mesh_.vertices[tri[2]] - a;
        const Eigen::Vector3d pvec = dir.cross(e2);
        const double det = e1.dot(pvec);
        if (std::abs(det) < 1e-14)
            return false;
        const double inv = 1.0 / det;
        const Eigen::Vector3d tvec = origin - a;
        const double u = tvec.dot(pvec) * inv;
        if (u < 0.0 || u > 1.0)
            return false;
        const Eigen::Vector3d qvec = tvec.cross(e1);
        const double v = dir.dot(qvec) * inv;
        if (v < 0.0 || u + v > 1.0)
            return false;
        const double t = e2.dot(qvec) * inv;
        if (t <= 0.0)
            return false;
        *t_out = t;
        return true;
    }

    Eigen::Vector3d face_normal(int f, const Eigen::Vector3d& dir) const
    {
        const auto& tri = mesh_.triangles[f];
        const Eigen::Vector3d n =
            (mesh_.vertices[tri[1]] - mesh_.vertices[tri[0]])
                .cross(mesh_.vertices[tri[2]] - mesh_.vertices[tri[0]])
                .normalized();
        return n.dot(dir) > 0.0 ? Eigen::Vector3d(-n) : n;
    }

    double point_triangle_sqdist(const Eigen::Vector3d& p, std::size_t f) const
    {
        const auto& tri = mesh_.triangles[f];
        return point_triangle_squared_distance(p, mesh_.vertices[tri[0]],
                                               mesh_.vertices[tri[1]],
                                               mesh_.vertices[tri[2]]);
    }

    bool is_inside(const Eigen::Vector3d& p) const
    {
        // parity of crossings along +x
        int crossings = 0;
        const Eigen::Vector3d dir = Eigen::Vector3d::UnitX();
        for (std::size_t f = 0; f < mesh_.triangles.size(); ++f) {
            double t;
            if (intersect_triangle(p, dir, f, &t))
                ++crossings;
        }
        return (crossings & 1) != 0;
    }

    TriangleMesh mesh_;
    Albedo albedo_;
    Aabb bounds_;
};

struct SceneDescription {
    std::vector<std::unique_ptr<SceneShape>> shapes;
    Eigen::Vector3d background = Eigen::Vector3d::Zero();
    double noise_sigma = 0.0;       // additive RGB noise std-dev
    double diffuse = 1.0;           // fixed Lambertian shading term

    bool intersect(const Eigen::Vector3d& origin, const Eigen::Vector3d& dir,
                   SurfaceHit* hit) const
    {
        bool any = false;
        SurfaceHit best;
        for (const auto& shape : shapes) {
            SurfaceHit h;
            if (shape->intersect(origin, dir, 0.0, &h) && h.t < best.t) {
                best = h;
                any = true;
            }
        }
        if (any)
            *hit = best;
        return any;
    }

    double signed_distance(const Eigen::Vector3d& p) const
    {
        double d = std::numeric_limits<double>::infinity();
        for (const auto& shape : shapes)
            d = std::min(d, shape->signed_distance(p));
        return d;
    }

    Aabb shape_bounds() const
    {
        if (shapes.empty())
            throw ConfigError("scene-synth: scene has no shapes");
        Aabb b = shapes.front()->bounds();
        for (const auto& shape : shapes) {
            const Aabb sb = shape->bounds();
            b.min = b.min.cwiseMin(sb.min);
            b.max = b.max.cwiseMax(sb.max);
        }
        return b;
    }
};

} // namespace srdf
