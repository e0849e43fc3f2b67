#include "vlcris/mobility.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vlcris::mobility {

WaypointTrack::WaypointTrack(const Room& room, double speed, rng::Stream stream)
    : room_(room), speed_(speed), stream_(stream) {
    if (speed <= 0.0) throw std::invalid_argument("waypoint speed must be positive");
    start_ = Vec3(stream_.uniform(0.0, room_.width), stream_.uniform(0.0, room_.depth), 0.0);
    end_ = start_;
    leg_duration_ = 0.0;
    next_leg();
}

void WaypointTrack::next_leg() {
    leg_begin_ += leg_duration_;
    start_ = end_;
    do {
        end_ = Vec3(stream_.uniform(0.0, room_.width), stream_.uniform(0.0, room_.depth), 0.0);
    } while ((end_ - start_).norm() < 1e-9);
    leg_duration_ = (end_ - start_).norm() / speed_;
}

Vec3 WaypointTrack::position_at(double t) {
    while (t > leg_begin_ + leg_duration_) next_leg();
    const double frac = (t - leg_begin_) / leg_duration_;
    return start_ + frac * (end_ - start_);
}

int blockage_indicator(const Vec3& ap_pos, const Vec3& rx_pos,
                       std::span<const VerticalCylinder> bodies) {
    const geometry::Segment3 ray{ap_pos, rx_pos};
    for (const auto& body : bodies)
        if (geometry::segment_intersects_cylinder(ray, body)) return 0;
    return 1;
}

std::vector<geometry::Vec2> sample_disc(int k, double radius) {
    if (k < 1) throw std::invalid_argument("blockage sampling needs k >= 1");
    std::vector<geometry::Vec2> offsets;
    offsets.reserve(k);
    offsets.emplace_back(0.0, 0.0);
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 1; i < k; ++i) {
        const double r = radius * std::sqrt(static_cast<double>(i) / (k - 1));
        const double theta = golden * i;
        offsets.emplace_back(r * std::cos(theta), r * std::sin(theta));
    }
    return offsets;
}

double blockage_degree(const Vec3& ap_pos, const Vec3& rx_pos,
                       std::span<const VerticalCylinder> bodies,
                       std::span<const geometry::Vec2> disc_offsets) {
    int blocked = 0;
    for (const auto& off : disc_offsets) {
        const Vec3 target(rx_pos.x() + off.x(), rx_pos.y() + off.y(), rx_pos.z());
        const geometry::Segment3 ray{ap_pos, target};
        for (const auto& body : bodies) {
            if (geometry::segment_intersects_cylinder(ray, body)) {
                ++blocked;
                break;
            }
        }
    }
    return static_cast<double>(blocked) / static_cast<double>(disc_offsets.size());
}

}  // namespace vlcris::mobility
