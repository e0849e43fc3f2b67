#include "vlcris/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vlcris::geometry {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Open t-interval on which a + t*d satisfies lo < a + t*d < hi.
// Constant coordinate collapses to (-inf, inf) or empty.
struct Interval {
    double lo = -kInf;
    double hi = kInf;
    bool empty = false;
};

Interval strip_interval(double a, double d, double lo, double hi) {
    Interval iv;
    if (d == 0.0) {
        if (!(a > lo && a < hi)) iv.empty = true;
        return iv;
    }
    double t0 = (lo - a) / d;
    double t1 = (hi - a) / d;
    iv.lo = std::min(t0, t1);
    iv.hi = std::max(t0, t1);
    return iv;
}

}  // namespace

OrientedPlane make_plane(const Vec3& point, const Vec3& normal) {
    double n = normal.norm();
    if (n == 0.0) throw std::domain_error("plane normal must be nonzero");
    return OrientedPlane{point, normal / n};
}

bool segment_intersects_cylinder(const Segment3& seg, const VerticalCylinder& cyl) {
    const Vec2 a(seg.a.x() - cyl.center_xy.x(), seg.a.y() - cyl.center_xy.y());
    const Vec2 d(seg.b.x() - seg.a.x(), seg.b.y() - seg.a.y());

    // Lateral condition |a + t d|^2 < r^2 as an open interval in t.
    Interval lateral;
    const double dd = d.squaredNorm();
    const double r2 = cyl.radius * cyl.radius;
    if (dd == 0.0) {
        if (a.squaredNorm() >= r2) return false;
    } else {
        const double b = a.dot(d);
        const double c = a.squaredNorm() - r2;
        const double disc = b * b - dd * c;
        if (disc <= 0.0) return false;  // miss or tangent
        const double sq = std::sqrt(disc);
        lateral.lo = (-b - sq) / dd;
        lateral.hi = (-b + sq) / dd;
    }

    const Interval vertical =
        strip_interval(seg.a.z(), seg.b.z() - seg.a.z(), 0.0, cyl.height);
    if (vertical.empty) return false;

    const double lo = std::max({0.0, lateral.lo, vertical.lo});
    const double hi = std::min({1.0, lateral.hi, vertical.hi});
    return lo < hi;
}

Vec3 reflect_point_across_plane(const Vec3& p, const OrientedPlane& plane) {
    const double dist = (p - plane.point).dot(plane.unit_normal);
    return p - 2.0 * dist * plane.unit_normal;
}

double angle_between(const Vec3& u, const Vec3& v) {
    const double nu = u.norm();
    const double nv = v.norm();
    if (nu == 0.0 || nv == 0.0)
        throw std::domain_error("angle_between: zero-length vector");
    // atan2 form is stable near 0 and pi.
    return std::atan2(u.cross(v).norm(), u.dot(v));
}

}  // namespace vlcris::geometry
