#ifndef MANETSIM_RADIO_HPP
#define MANETSIM_RADIO_HPP

#include <vector>

#include "manetsim/frame.hpp"
#include "manetsim/mobility.hpp"
#include "manetsim/sim_time.hpp"

namespace manetsim {

struct RadioParams {
  double tx_range_m = 250.0;
  double propagation_mps = 3e8;
  double bitrate_bps = 2e6;
};

// Unit-disk channel: a link exists iff Euclidean distance <= tx_range.
class RadioLink {
 public:
  RadioLink(RadioParams params, const RandomWaypointMobility& mobility)
      : params_(params), mobility_(&mobility) {}

  bool in_range(NodeId a, NodeId b, SimTime t) const;

  // Nodes able to hear `sender` at t, ascending id, sender excluded.
  std::vector<NodeId> receivers_of(NodeId sender, SimTime t) const;

  SimTime airtime(const Frame& frame) const;
  SimTime propagation_delay(NodeId from, NodeId to, SimTime t) const;

  const RadioParams& params() const { return params_; }

 private:
  RadioParams params_;
  const RandomWaypointMobility* mobility_;
};

}  // namespace manetsim

#endif
