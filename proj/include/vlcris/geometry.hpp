#pragma once

#include <Eigen/Dense>

namespace vlcris::geometry {

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;

/// Directed segment between two distinct points.
struct Segment3 {
    Vec3 a;
    Vec3 b;
};

/// Finite solid cylinder standing on the floor plane, axis parallel to z.
/// Models a walking human; footprint center at `center_xy`.
struct VerticalCylinder {
    Vec2 center_xy;
    double radius = 0.3;
    double height = 1.8;
};

/// Plane through `point` with unit normal; normal length is a class
/// invariant enforced on construction (within 1e-12).
struct OrientedPlane {
    Vec3 point;
    Vec3 unit_normal;
};

OrientedPlane make_plane(const Vec3& point, const Vec3& normal);

/// True iff any point of the segment lies strictly inside the cylinder
/// volume. Tangency counts as non-blocking. Exact quadratic solution with
/// z-clipping; no sampling.
bool segment_intersects_cylinder(const Segment3& seg, const VerticalCylinder& cyl);

/// Mirror image of p across the plane; an involution.
Vec3 reflect_point_across_plane(const Vec3& p, const OrientedPlane& plane);

/// Mirror image of a direction vector across the plane's normal.
inline Vec3 reflect_direction(const Vec3& d, const Vec3& unit_normal) {
    return d - 2.0 * d.dot(unit_normal) * unit_normal;
}

/// Angle in [0, pi] between two nonzero vectors. Throws std::domain_error
/// on a zero vector.
double angle_between(const Vec3& u, const Vec3& v);

}  // namespace vlcris::geometry
