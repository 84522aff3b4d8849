#include "manetsim/radio.hpp"

#include <stdexcept>

namespace manetsim {

bool RadioLink::in_range(NodeId a, NodeId b, SimTime t) const {
  if (a == b) throw std::invalid_argument("in_range: a == b");
  return distance(mobility_->position_at(a, t), mobility_->position_at(b, t)) <=
         params_.tx_range_m;
}

std::vector<NodeId> RadioLink::receivers_of(NodeId sender, SimTime t) const {
  std::vector<NodeId> out;
  Point origin = mobility_->position_at(sender, t);
  for (NodeId id = 1; id <= mobility_->node_count(); ++id) {
    if (id == sender) continue;
    if (distance(origin, mobility_->position_at(id, t)) <= params_.tx_range_m) {
      out.push_back(id);
    }
  }
  return out;
}

SimTime RadioLink::airtime(const Frame& frame) const {
  int bytes = frame.size_bytes();
  if (bytes <= 0) throw std::invalid_argument("airtime: empty frame");
  double bits = 8.0 * static_cast<double>(bytes);
  return from_seconds(bits / params_.bitrate_bps);
}

SimTime RadioLink::propagation_delay(NodeId from, NodeId to, SimTime t) const {
  double d = distance(mobility_->position_at(from, t), mobility_->position_at(to, t));
  return from_seconds(d / params_.propagation_mps);
}

}  // namespace manetsim
