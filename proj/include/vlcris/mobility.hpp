#pragma once

#include <span>
#include <vector>

#include "vlcris/geometry.hpp"
#include "vlcris/optics.hpp"
#include "vlcris/rng.hpp"

namespace vlcris::mobility {

using geometry::Vec3;
using geometry::VerticalCylinder;
using optics::AccessPoint;
using optics::Receiver;
using optics::Room;

/// Random-waypoint track on the floor plane. Walks in straight legs at a
/// fixed speed; on arrival the next endpoint is drawn uniformly from the
/// room footprint. Fully determined by the seed.
class WaypointTrack {
  public:
    WaypointTrack(const Room& room, double speed, rng::Stream stream);

    /// Position (z = 0) at time t. Calls must use nondecreasing t; a
    /// repeated t returns the identical position.
    Vec3 position_at(double t);

    const Vec3& current_start() const { return start_; }
    const Vec3& current_end() const { return end_; }
    double speed() const { return speed_; }

  private:
    void next_leg();

    Room room_;
    double speed_;
    rng::Stream stream_;
    Vec3 start_;
    Vec3 end_;
    double leg_begin_ = 0.0;
    double leg_duration_ = 0.0;
};

/// Walking human: a waypoint track carrying a vertical cylinder.
struct Blocker {
    WaypointTrack track;
    double radius = 0.3;
    double height = 1.8;

    VerticalCylinder body_at(double t) {
        Vec3 p = track.position_at(t);
        return VerticalCylinder{{p.x(), p.y()}, radius, height};
    }
};

/// 1 when the direct AP->PD ray is clear of every cylinder, else 0.
/// Product form over blockers.
int blockage_indicator(const Vec3& ap_pos, const Vec3& rx_pos,
                       std::span<const VerticalCylinder> bodies);

/// Deterministic sample offsets used by blockage_degree: point 0 is the
/// disc center, the rest follow a sunflower layout.
std::vector<geometry::Vec2> sample_disc(int k, double radius);

/// Fraction in [0,1] of K sample rays blocked; rays run from the AP to
/// fixed jitter points in a horizontal disc around the PD. K=1 degenerates
/// to 1 - blockage_indicator.
double blockage_degree(const Vec3& ap_pos, const Vec3& rx_pos,
                       std::span<const VerticalCylinder> bodies,
                       std::span<const geometry::Vec2> disc_offsets);

}  // namespace vlcris::mobility
