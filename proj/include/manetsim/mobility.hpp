#ifndef MANETSIM_MOBILITY_HPP
#define MANETSIM_MOBILITY_HPP

#include <optional>
#include <vector>

#include "manetsim/event_queue.hpp"
#include "manetsim/geometry.hpp"
#include "manetsim/rng.hpp"
#include "manetsim/sim_time.hpp"

namespace manetsim {

struct MotionLeg {
  Point origin;
  Point waypoint;
  double speed_mps = 0.0;
  SimTime depart_time = 0;   // motion begins (pause already applied)
  SimTime arrival_time = 0;  // waypoint reached
};

// Random waypoint motion over a bounded terrain. Positions are computed
// lazily from the active leg; there are no per-tick updates. Speeds below
// 0.1 m/s are floored to avoid the classic stuck-node degeneracy of the
// model when the configured range includes zero.
class RandomWaypointMobility {
 public:
  struct Params {
    Terrain terrain;
    double speed_min_mps = 0.0;
    double speed_max_mps = 10.0;
    SimTime pause_time = 0;
    SimTime start_time = from_seconds(10.0);
  };

  static constexpr double kSpeedFloor = 0.1;

  RandomWaypointMobility(Params params, int node_count);

  // Uniform placement over the terrain, one draw pair per node in id order.
  static std::vector<Point> init_placement(int node_count, const Terrain& terrain,
                                           RngStream& rng);

  void set_initial_position(NodeId node, Point p);
  Point initial_position(NodeId node) const { return initial_[node]; }

  // Draws the next leg for a node standing at `at` at time `t`.
  MotionLeg next_leg(NodeId node, Point at, SimTime t, RngStream& rng) const;

  void begin_leg(NodeId node, const MotionLeg& leg) { legs_[node] = leg; }
  const std::optional<MotionLeg>& current_leg(NodeId node) const { return legs_[node]; }

  Point position_at(NodeId node, SimTime t) const;

  // Pins a node in place; used for static and scripted topologies.
  void pin(NodeId node, Point p);
  void unpin(NodeId node);

  const Params& params() const { return params_; }
  int node_count() const { return static_cast<int>(initial_.size()) - 1; }

 private:
  Params params_;
  std::vector<Point> initial_;               // 1-based
  std::vector<std::optional<MotionLeg>> legs_;
  std::vector<std::optional<Point>> pinned_;
};

}  // namespace manetsim

#endif
