#include "vlcris/optics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "vlcris/geometry.hpp"

namespace vlcris::optics {

using geometry::OrientedPlane;
using geometry::Segment3;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kRateScale = std::numbers::e / kTwoPi;

double pow_order(double c, double m) {
    if (m == 1.0) return c;  // dominant case in practice
    return std::pow(c, m);
}

// Lambertian pattern from a point source with a given emission axis to a
// face-up photodiode. Shared by the direct and the virtual-source paths.
double lambertian_core(const Vec3& source, const Vec3& axis, double order,
                       const Receiver& rx) {
    const Vec3 delta = rx.position - source;
    const double d2 = delta.squaredNorm();
    if (d2 == 0.0) throw std::domain_error("lambertian gain undefined at zero distance");
    const double d = std::sqrt(d2);

    const double cos_irradiance = axis.dot(delta) / d;
    if (cos_irradiance <= 0.0) return 0.0;

    const double cos_incidence = -delta.z() / d;  // PD normal is +z
    if (cos_incidence <= 0.0) return 0.0;
    if (std::acos(std::min(cos_incidence, 1.0)) > rx.fov) return 0.0;

    return (order + 1.0) * rx.area / (kTwoPi * d2) * pow_order(cos_irradiance, order) *
           rx.filter_gain * rx.concentrator_gain * cos_incidence;
}

}  // namespace

Vec3 wall_inward_normal(Wall w) {
    switch (w) {
        case Wall::XMin: return {1, 0, 0};
        case Wall::XMax: return {-1, 0, 0};
        case Wall::YMin: return {0, 1, 0};
        case Wall::YMax: return {0, -1, 0};
    }
    return {0, 1, 0};
}

double lambertian_gain(const AccessPoint& ap, const Receiver& rx) {
    return lambertian_core(ap.position, Vec3(0, 0, -1), ap.lambertian_order, rx);
}

double lambertian_gain_from(const Vec3& source, const Vec3& emission_axis,
                            double lambertian_order, const Receiver& rx) {
    return lambertian_core(source, emission_axis, lambertian_order, rx);
}

ElementFrame element_frame(Wall wall, double yaw, double roll) {
    const Vec3 n0 = wall_inward_normal(wall);
    const Vec3 up(0, 0, 1);
    const Vec3 u0 = up.cross(n0);  // horizontal, in the wall plane

    // Local frame: x = rest normal, y = u0, z = up. Yaw about z, then roll
    // about the fixed in-plane horizontal axis y.
    const double ca = std::cos(yaw), sa = std::sin(yaw);
    const double cb = std::cos(roll), sb = std::sin(roll);

    const Vec3 n_loc(ca * cb, sa, -ca * sb);
    const Vec3 u_loc(-sa * cb, ca, sa * sb);
    const Vec3 v_loc(sb, 0.0, cb);

    Eigen::Matrix3d basis;
    basis.col(0) = n0;
    basis.col(1) = u0;
    basis.col(2) = up;

    return ElementFrame{basis * n_loc, basis * u_loc, basis * v_loc};
}

ElementFrame element_frame(const RisElement& elem) {
    return element_frame(elem.wall, elem.yaw, elem.roll);
}

MirrorAngles compute_mirror_angles(const Vec3& ap_pos, const RisElement& elem,
                                   const Vec3& rx_pos) {
    const Vec3 n0 = wall_inward_normal(elem.wall);
    const Vec3 to_ap = ap_pos - elem.midpoint;
    const Vec3 to_rx = rx_pos - elem.midpoint;
    if (to_ap.dot(n0) <= 0.0 || to_rx.dot(n0) <= 0.0)
        throw std::domain_error("mirror steering infeasible: endpoint behind the wall plane");

    const Vec3 bisector = (to_ap.normalized() + to_rx.normalized()).normalized();

    // Express the target normal in the wall-local frame and invert the
    // yaw-then-roll parameterization n = (cos a cos b, sin a, -cos a sin b).
    const Vec3 up(0, 0, 1);
    const Vec3 u0 = up.cross(n0);
    const double tx = bisector.dot(n0);
    const double ty = bisector.dot(u0);
    const double tz = bisector.dot(up);

    MirrorAngles out;
    out.yaw = std::asin(std::clamp(ty, -1.0, 1.0));
    out.roll = std::atan2(-tz, tx);

    const double lim = elem.mech_limit;
    if (std::abs(out.yaw) > lim || std::abs(out.roll) > lim) {
        out.saturated = true;
        out.yaw = std::clamp(out.yaw, -lim, lim);
        out.roll = std::clamp(out.roll, -lim, lim);
    }
    return out;
}

double mirror_element_gain(const AccessPoint& ap, const RisElement& elem,
                           const Receiver& rx,
                           std::span<const VerticalCylinder> blockers) {
    const ElementFrame frame = element_frame(elem);
    const Vec3& q = elem.midpoint;

    // Both endpoints must face the reflective side of the steered element.
    if ((ap.position - q).dot(frame.normal) <= 0.0) return 0.0;
    if ((rx.position - q).dot(frame.normal) <= 0.0) return 0.0;

    const OrientedPlane plane{q, frame.normal};
    const Vec3 virtual_source = geometry::reflect_point_across_plane(ap.position, plane);

    // Unfolded specular ray: straight line from the image to the receiver.
    const Vec3 ray = rx.position - virtual_source;
    const double denom = frame.normal.dot(ray);
    if (denom <= 0.0) return 0.0;
    const double t = frame.normal.dot(q - virtual_source) / denom;
    if (t <= 0.0 || t >= 1.0) return 0.0;
    const Vec3 hit = virtual_source + t * ray;

    const Vec3 offset = hit - q;
    if (std::abs(offset.dot(frame.u)) > 0.5 * elem.width) return 0.0;
    if (std::abs(offset.dot(frame.v)) > 0.5 * elem.height) return 0.0;

    for (const auto& blocker : blockers) {
        if (geometry::segment_intersects_cylinder({ap.position, hit}, blocker)) return 0.0;
        if (geometry::segment_intersects_cylinder({hit, rx.position}, blocker)) return 0.0;
    }

    const Vec3 mirrored_axis = geometry::reflect_direction(Vec3(0, 0, -1), frame.normal);
    return elem.reflectance *
           lambertian_gain_from(virtual_source, mirrored_axis, ap.lambertian_order, rx);
}

double steered_element_gain(const AccessPoint& ap, RisElement elem, const Receiver& rx,
                            std::span<const VerticalCylinder> blockers) {
    MirrorAngles angles;
    try {
        angles = compute_mirror_angles(ap.position, elem, rx.position);
    } catch (const std::domain_error&) {
        return 0.0;
    }
    elem.yaw = angles.yaw;
    elem.roll = angles.roll;
    return mirror_element_gain(ap, elem, rx, blockers);
}

double total_gain(int los_indicator, double los_gain, std::span<const double> ris_gains) {
    double h = los_indicator ? los_gain : 0.0;
    for (double g : ris_gains) h += g;
    return h;
}

double snr(double gain, const AccessPoint& ap, const Receiver& rx, const NoiseModel& noise) {
    const double noise_power = noise.psd * noise.bandwidth;
    if (noise_power <= 0.0) throw std::invalid_argument("noise power must be positive");
    const double current = rx.responsivity * gain * ap.optical_power;
    return current * current / noise_power;
}

double achievable_rate(double bandwidth, double eta) {
    return bandwidth * std::log2(1.0 + kRateScale * eta);
}

double combined_rate(double bandwidth, std::span<const double> snrs) {
    if (snrs.empty()) throw std::domain_error("combined_rate needs at least one link");
    double total = 0.0;
    for (double eta : snrs) total += eta;
    return achievable_rate(bandwidth, total);
}

}  // namespace vlcris::optics
