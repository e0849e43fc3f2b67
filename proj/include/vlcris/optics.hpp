#pragma once

#include <span>
#include <vector>

#include "vlcris/geometry.hpp"

namespace vlcris::optics {

using geometry::Vec3;
using geometry::VerticalCylinder;

/// Rectangular room with the floor at z = 0.
struct Room {
    double width = 5.0;   // x extent [m]
    double depth = 5.0;   // y extent [m]
    double height = 3.0;  // z extent [m]
};

enum class Wall { XMin, XMax, YMin, YMax };

/// Unit normal pointing from the wall into the room.
Vec3 wall_inward_normal(Wall w);

/// Ceiling LED luminaire. Emits a Lambertian pattern about the downward
/// vertical axis.
struct AccessPoint {
    int id = 1;                    // 1-based, used in file outputs
    Vec3 position{0, 0, 3};       // on the ceiling plane z = room height
    double optical_power = 3.0;    // [W]
    double lambertian_order = 1.0; // >= 1
    int code_index = 1;            // spreading-code row
};

/// Photodiode receiver, face-up.
struct Receiver {
    Vec3 position{0, 0, 0};
    double area = 1e-4;            // [m^2]
    double fov = 1.4835298641951802;  // [rad], 85 degrees
    double responsivity = 0.5;     // [A/W]
    double filter_gain = 1.0;
    double concentrator_gain = 1.0;
};

/// One steerable mirror element mounted on a wall. Yaw rotates the rest
/// normal about the room's vertical axis, roll about the horizontal axis
/// lying in the wall plane; yaw is applied first.
struct RisElement {
    int id = 1;
    Wall wall = Wall::YMin;
    Vec3 midpoint{2.5, 0.0, 2.0};
    double width = 0.08;   // [m]
    double height = 0.08;  // [m]
    double yaw = 0.0;      // [rad]
    double roll = 0.0;     // [rad]
    double reflectance = 0.95;          // in (0, 1]
    double mech_limit = 0.7853981633974483;  // |yaw|,|roll| bound [rad]
};

/// Steering solution; angles are clamped to the mechanical limit and
/// `saturated` reports whether clamping occurred.
struct MirrorAngles {
    double yaw = 0.0;
    double roll = 0.0;
    bool saturated = false;
};

/// Additive white noise: electrical noise power is psd * bandwidth [A^2].
struct NoiseModel {
    double psd = 1.5e-24;      // [A^2/Hz]
    double bandwidth = 2.0e7;  // [Hz]
};

/// Per-AP instantaneous channel state.
struct LinkSnapshot {
    int ap_id = 1;
    double los_gain = 0.0;        // unblocked Lambertian gain
    int los_indicator = 1;        // 1 when the direct ray is clear
    double blockage_degree = 0.0; // fraction of sample rays blocked
    std::vector<double> ris_gains;
    double total_gain = 0.0;
    double snr = 0.0;
};

/// Line-of-sight Lambertian gain from an AP to the receiver. Zero outside
/// the receiver field of view. Throws std::domain_error for coincident
/// positions.
double lambertian_gain(const AccessPoint& ap, const Receiver& rx);

/// Same pattern evaluated from an arbitrary source point and emission axis;
/// used for virtual (mirrored) sources.
double lambertian_gain_from(const Vec3& source, const Vec3& emission_axis,
                            double lambertian_order, const Receiver& rx);

/// Element orientation derived from (yaw, roll): unit normal and the
/// in-plane width/height axes.
struct ElementFrame {
    Vec3 normal;
    Vec3 u;  // width direction
    Vec3 v;  // height direction
};
ElementFrame element_frame(const RisElement& elem);
ElementFrame element_frame(Wall wall, double yaw, double roll);

/// Yaw/roll that make the element normal bisect the directions to the AP
/// and to the receiver, so the specular ray from the AP lands on the
/// receiver. Throws std::domain_error when either endpoint is not strictly
/// on the reflective side of the wall plane.
MirrorAngles compute_mirror_angles(const Vec3& ap_pos, const RisElement& elem,
                                   const Vec3& rx_pos);

/// Reflected-path gain of one element at its current (yaw, roll): the
/// virtual-source image model with a hard aperture-hit indicator. When
/// `blockers` is non-empty both hops (AP->element, element->PD) must be
/// clear. Total function; all infeasible geometry yields 0.
double mirror_element_gain(const AccessPoint& ap, const RisElement& elem,
                           const Receiver& rx,
                           std::span<const VerticalCylinder> blockers);

/// Gain of the element once steered for this AP/receiver pair. Saturated
/// angles are applied clamped; infeasible steering yields 0.
double steered_element_gain(const AccessPoint& ap, RisElement elem, const Receiver& rx,
                            std::span<const VerticalCylinder> blockers);

/// Channel gain composition: los_indicator * los_gain + sum of RIS-path
/// gains from the elements assigned to this AP.
double total_gain(int los_indicator, double los_gain, std::span<const double> ris_gains);

/// Electrical SNR of an intensity-modulated link. Throws
/// std::invalid_argument when the noise power is not positive.
double snr(double gain, const AccessPoint& ap, const Receiver& rx, const NoiseModel& noise);

/// Achievable rate [bit/s] of a single link at SNR eta.
double achievable_rate(double bandwidth, double eta);

/// Achievable rate when combining signals from several APs carrying the
/// same data; SNRs add. Throws std::domain_error on an empty list.
double combined_rate(double bandwidth, std::span<const double> snrs);

}  // namespace vlcris::optics
