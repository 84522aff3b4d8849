#include "manetsim/mobility.hpp"

#include <algorithm>
#include <stdexcept>

namespace manetsim {

RandomWaypointMobility::RandomWaypointMobility(Params params, int node_count)
    : params_(params),
      initial_(static_cast<std::size_t>(node_count) + 1),
      legs_(static_cast<std::size_t>(node_count) + 1),
      pinned_(static_cast<std::size_t>(node_count) + 1) {
  if (node_count < 1) throw std::invalid_argument("mobility: node_count must be >= 1");
}

std::vector<Point> RandomWaypointMobility::init_placement(int node_count,
                                                          const Terrain& terrain,
                                                          RngStream& rng) {
  if (node_count < 1) throw std::invalid_argument("init_placement: node_count must be >= 1");
  if (terrain.width <= 0 || terrain.height <= 0) {
    throw std::invalid_argument("init_placement: degenerate terrain");
  }
  std::vector<Point> points;
  points.reserve(static_cast<std::size_t>(node_count));
  for (int i = 0; i < node_count; ++i) {
    Point p;
    p.x = rng.uniform(0.0, terrain.width);
    p.y = rng.uniform(0.0, terrain.height);
    points.push_back(p);
  }
  return points;
}

void RandomWaypointMobility::set_initial_position(NodeId node, Point p) {
  initial_[node] = p;
}

MotionLeg RandomWaypointMobility::next_leg(NodeId node, Point at, SimTime t,
                                           RngStream& rng) const {
  (void)node;
  MotionLeg leg;
  leg.origin = at;
  leg.waypoint.x = rng.uniform(0.0, params_.terrain.width);
  leg.waypoint.y = rng.uniform(0.0, params_.terrain.height);
  double lo = std::max(params_.speed_min_mps, kSpeedFloor);
  double hi = std::max(params_.speed_max_mps, lo);
  leg.speed_mps = rng.uniform(lo, hi);
  leg.depart_time = t + params_.pause_time;
  double dist = distance(leg.origin, leg.waypoint);
  leg.arrival_time = leg.depart_time + from_seconds(dist / leg.speed_mps);
  if (leg.arrival_time <= leg.depart_time) leg.arrival_time = leg.depart_time + 1;
  return leg;
}

Point RandomWaypointMobility::position_at(NodeId node, SimTime t) const {
  if (pinned_[node]) return *pinned_[node];
  const auto& leg = legs_[node];
  if (!leg || t < params_.start_time) return initial_[node];
  if (t <= leg->depart_time) return leg->origin;
  if (t >= leg->arrival_time) return leg->waypoint;
  double frac = static_cast<double>(t - leg->depart_time) /
                static_cast<double>(leg->arrival_time - leg->depart_time);
  Point p;
  p.x = leg->origin.x + frac * (leg->waypoint.x - leg->origin.x);
  p.y = leg->origin.y + frac * (leg->waypoint.y - leg->origin.y);
  return p;
}

void RandomWaypointMobility::pin(NodeId node, Point p) { pinned_[node] = p; }

void RandomWaypointMobility::unpin(NodeId node) { pinned_[node].reset(); }

}  // namespace manetsim
