#include "manetsim/clustering.hpp"

#include <algorithm>

namespace manetsim {

ClusterProtocol::ClusterProtocol(Params params, EventQueue& engine, int node_count)
    : params_(params), engine_(&engine), nodes_(static_cast<std::size_t>(node_count) + 1) {
  for (NodeId id = 1; id <= node_count; ++id) nodes_[id].cluster_id = id;
}

void ClusterProtocol::set_pinned_roles(const std::map<int, PinnedRole>& pins) {
  if (pins.empty()) return;
  pinned_ = true;
  for (const auto& [id, role] : pins) {
    NodeState& ns = nodes_[id];
    switch (role) {
      case PinnedRole::Head:
        ns.role = ClusterRoleKind::ClusterHead;
        ns.cluster_id = id;
        break;
      case PinnedRole::Chg:
        ns.role = ClusterRoleKind::ClusterHeadGateway;
        ns.cluster_id = id;
        break;
      case PinnedRole::Gateway:
        ns.role = ClusterRoleKind::Gateway;
        break;
    }
  }
  for (std::size_t id = 1; id < nodes_.size(); ++id) {
    if (nodes_[id].role == ClusterRoleKind::Undecided) {
      nodes_[id].role = ClusterRoleKind::Ordinary;
    }
  }
}

void ClusterProtocol::start(RngStream& jitter_rng) {
  SimTime interval = params_.beacon_interval;
  for (std::size_t id = 1; id < nodes_.size(); ++id) {
    NodeId node = static_cast<NodeId>(id);
    double frac = jitter_rng.uniform(0.05, 0.9);
    SimTime first = static_cast<SimTime>(frac * static_cast<double>(interval));
    nodes_[id].decide_after = first + 2 * interval;
    nodes_[id].beacon_anchor = first;
    nodes_[id].beacon_round = 0;
    nodes_[id].beacon_event = engine_->schedule(first, EventKind::BeaconTimer, node,
                                                [this, node] { emit_beacon(node); });
  }
}

void ClusterProtocol::emit_beacon(NodeId node) {
  NodeState& ns = nodes_[node];
  BeaconBody body;
  body.sender = node;
  body.cluster_id = ns.cluster_id;
  body.role = ns.role;
  body.seq = ns.beacon_seq++;
  body.boundary = self_boundary(node);
  body.settled = self_settled(node);
  body.transfer_to = ns.transfer_to;
  if (send_beacon_) send_beacon_(node, body);

  // Next emission sits on the node's grid with a fresh phase. The phase cap
  // keeps anchor + phase under one interval, so every interval still carries
  // exactly one beacon regardless of the draws.
  SimTime interval = params_.beacon_interval;
  SimTime now = engine_->now();
  std::int64_t next_round =
      std::max(ns.beacon_round + 1, (now - ns.beacon_anchor) / interval + 1);
  SimTime phase = jitter_draw_ ? jitter_draw_(0, interval / 10) : 0;
  SimTime next = ns.beacon_anchor + next_round * interval + phase;
  if (next <= now) next = now + 1;
  ns.beacon_round = next_round;
  ns.beacon_event = engine_->schedule(next, EventKind::BeaconTimer, node,
                                      [this, node] { emit_beacon(node); });
}

void ClusterProtocol::accelerate_beacon(NodeId node) {
  engine_->cancel(nodes_[node].beacon_event);
  emit_beacon(node);
}

void ClusterProtocol::set_role(NodeId node, ClusterRoleKind role, NodeId cluster_id) {
  NodeState& ns = nodes_[node];
  if (ns.role == role && ns.cluster_id == cluster_id) return;
  ClusterRoleKind old_role = ns.role;
  ns.cluster_id = cluster_id;
  last_change_ = engine_->now();
  if (role != old_role) {
    ns.role = role;
    ++role_changes_;
    if (role_changed_) role_changed_(node, old_role, role, cluster_id);
  }
}

bool ClusterProtocol::self_boundary(NodeId node) const {
  const NodeState& ns = nodes_[node];
  for (const auto& [id, entry] : ns.table) {
    if (entry.role == ClusterRoleKind::Undecided) continue;
    if (entry.cluster_id != 0 && entry.cluster_id != ns.cluster_id) return true;
  }
  return false;
}

bool ClusterProtocol::self_settled(NodeId node) const {
  for (const auto& [id, entry] : nodes_[node].table) {
    if (entry.role == ClusterRoleKind::Undecided) return false;
  }
  return true;
}

NodeId ClusterProtocol::lowest_head_neighbor(NodeId node) const {
  for (const auto& [id, entry] : nodes_[node].table) {  // map is id-ordered
    if (is_head_kind(entry.role)) return id;
  }
  return 0;
}

bool ClusterProtocol::has_cluster_contact(NodeId node) const {
  const NodeState& ns = nodes_[node];
  if (params_.mode == ClusterMode::ChAndGateway) {
    // Contact with the head itself.
    return ns.table.count(ns.cluster_id) > 0;
  }
  // chg: any node still advertising this cluster keeps the member attached;
  // the promoted head may sit more than one hop away.
  for (const auto& [id, entry] : ns.table) {
    if (entry.cluster_id == ns.cluster_id) return true;
  }
  return false;
}

void ClusterProtocol::try_decide(NodeId node) {
  NodeState& ns = nodes_[node];
  if (ns.role != ClusterRoleKind::Undecided) return;
  if (engine_->now() < ns.decide_after) return;
  for (const auto& [id, entry] : ns.table) {
    if (id < node && entry.role == ClusterRoleKind::Undecided) return;  // their turn first
  }
  NodeId head = lowest_head_neighbor(node);
  if (head != 0) {
    set_role(node, ClusterRoleKind::Ordinary, head);
  } else {
    set_role(node, head_kind(), node);
  }
}

void ClusterProtocol::reevaluate_member(NodeId node) {
  NodeState& ns = nodes_[node];
  if (ns.role == ClusterRoleKind::Undecided || is_head_kind(ns.role)) return;
  // A demoted head announcing a handover stays put until the candidate
  // confirms; nobody advertises the new cluster id yet.
  if (ns.transfer_to != 0) return;

  if (!has_cluster_contact(node)) {
    NodeId head = lowest_head_neighbor(node);
    ns.boundary_since = -1;
    ns.interior_since = -1;
    ns.transfer_to = 0;
    ClusterRoleKind old_kind = ns.role;
    if (head != 0) {
      set_role(node, ClusterRoleKind::Ordinary, head);
    } else {
      set_role(node, head_kind(), node);
    }
    if (ns.role != old_kind) accelerate_beacon(node);
    return;
  }

  if (params_.mode != ClusterMode::ChAndGateway) return;

  SimTime now = engine_->now();
  bool boundary = self_boundary(node);
  if (boundary) {
    ns.interior_since = -1;
    if (ns.boundary_since < 0) ns.boundary_since = now;
    if (ns.role == ClusterRoleKind::Ordinary &&
        now - ns.boundary_since >= params_.stability_window) {
      set_role(node, ClusterRoleKind::Gateway, ns.cluster_id);
      if (ns.classified_once) accelerate_beacon(node);
      ns.classified_once = true;
    }
  } else {
    ns.boundary_since = -1;
    if (ns.interior_since < 0) ns.interior_since = now;
    if (ns.role == ClusterRoleKind::Gateway &&
        now - ns.interior_since >= params_.stability_window) {
      set_role(node, ClusterRoleKind::Ordinary, ns.cluster_id);
      if (ns.classified_once) accelerate_beacon(node);
      ns.classified_once = true;
    }
  }
}

void ClusterProtocol::evaluate_promotion(NodeId node) {
  NodeState& ns = nodes_[node];
  if (params_.mode != ClusterMode::Chg || !is_head_kind(ns.role)) return;

  NodeId best = self_boundary(node) ? node : 0;
  for (const auto& [id, entry] : ns.table) {
    if (entry.cluster_id != ns.cluster_id || !entry.boundary) continue;
    if (entry.role != ClusterRoleKind::Ordinary) continue;
    if (best == 0 || id < best) best = id;
  }

  if (best == 0 || best == node) {
    ns.promote_candidate = 0;
    ns.candidate_since = -1;
    return;
  }
  SimTime now = engine_->now();
  if (ns.promote_candidate != best) {
    ns.promote_candidate = best;
    ns.candidate_since = now;
    return;
  }
  if (now - ns.candidate_since < params_.stability_window) return;

  // A member's boundary bit is only final once all of its own neighbors have
  // decided, and the handover target is the minimum over those bits. Hold
  // the transfer until the head and every member report settled
  // neighborhoods, or an early transfer can pick the wrong candidate and
  // strand members behind chained handovers.
  if (!self_settled(node)) return;
  for (const auto& [id, entry] : ns.table) {
    if (entry.cluster_id == ns.cluster_id && !entry.settled) return;
  }

  // Hand the role over: step down and keep announcing the handover until
  // the candidate is heard beaconing as head.
  ns.promote_candidate = 0;
  ns.candidate_since = -1;
  ns.transfer_to = best;
  set_role(node, ClusterRoleKind::Ordinary, best);
}

void ClusterProtocol::expire_neighbors(NodeId node) {
  NodeState& ns = nodes_[node];
  SimTime now = engine_->now();
  std::vector<NodeId> gone;
  for (const auto& [id, entry] : ns.table) {
    if (entry.last_heard + params_.neighbor_timeout <= now) gone.push_back(id);
  }
  for (NodeId id : gone) {
    ns.table.erase(id);
    if (neighbor_lost_) neighbor_lost_(node, id);
  }
}

void ClusterProtocol::on_beacon(NodeId node, const BeaconBody& body, NodeId from) {
  NodeState& ns = nodes_[node];
  NeighborEntry& entry = ns.table[from];
  entry.last_heard = engine_->now();
  entry.cluster_id = body.cluster_id;
  entry.role = body.role;
  entry.boundary = body.boundary;
  entry.settled = body.settled;

  if (pinned_) {
    if (!is_head_kind(ns.role)) {
      NodeId head = lowest_head_neighbor(node);
      if (head != 0 && head != ns.cluster_id) {
        ns.cluster_id = head;
        last_change_ = engine_->now();
      }
    }
    return;
  }

  // Accept a pending handover addressed to us by our own head.
  if (body.transfer_to == node && from == ns.cluster_id && !is_head_kind(ns.role)) {
    ns.boundary_since = -1;
    ns.interior_since = -1;
    set_role(node, head_kind(), node);
    return;
  }

  // Follow the head when it renames (or hands over) the cluster. A demoted
  // head mid-handshake ignores the candidate's stale beacons.
  if (!is_head_kind(ns.role) && ns.role != ClusterRoleKind::Undecided &&
      ns.transfer_to == 0 && from == ns.cluster_id) {
    NodeId advertised = body.transfer_to != 0 ? body.transfer_to : body.cluster_id;
    if (advertised != 0 && advertised != ns.cluster_id) {
      set_role(node, ns.role, advertised);
    }
  }

  // Handover confirmed: the candidate beacons as head of its own cluster.
  if (ns.transfer_to == from && is_head_kind(body.role) && body.cluster_id == from) {
    ns.transfer_to = 0;
  }

  if (ns.role == ClusterRoleKind::Undecided) {
    try_decide(node);
  } else {
    reevaluate_member(node);
  }
}

void ClusterProtocol::on_tick() {
  for (std::size_t id = 1; id < nodes_.size(); ++id) {
    NodeId node = static_cast<NodeId>(id);
    expire_neighbors(node);
    if (pinned_) continue;
    NodeState& ns = nodes_[node];
    if (ns.transfer_to != 0) {
      // The handover is void if the candidate vanished or re-homed to a
      // third cluster before accepting. Its stale beacons still advertise
      // the old cluster (this node's id) during a normal handshake.
      auto candidate = ns.table.find(ns.transfer_to);
      bool moved_on = candidate != ns.table.end() &&
                      candidate->second.role != ClusterRoleKind::Undecided &&
                      !is_head_kind(candidate->second.role) &&
                      candidate->second.cluster_id != node &&
                      candidate->second.cluster_id != ns.cluster_id;
      if (candidate == ns.table.end() || moved_on) {
        ns.transfer_to = 0;
        set_role(node, head_kind(), node);
        continue;
      }
    }
    if (ns.role == ClusterRoleKind::Undecided) {
      try_decide(node);
    } else if (is_head_kind(ns.role)) {
      evaluate_promotion(node);
    } else {
      reevaluate_member(node);
    }
  }
}

bool ClusterProtocol::is_backbone(NodeId node) const {
  ClusterRoleKind kind = nodes_[node].role;
  if (params_.mode == ClusterMode::Chg) {
    return kind == ClusterRoleKind::ClusterHeadGateway;
  }
  return kind == ClusterRoleKind::ClusterHead || kind == ClusterRoleKind::Gateway;
}

int ClusterProtocol::backbone_size() const {
  int count = 0;
  for (std::size_t id = 1; id < nodes_.size(); ++id) {
    if (is_backbone(static_cast<NodeId>(id))) ++count;
  }
  return count;
}

bool ClusterProtocol::stabilized() const {
  if (pinned_) return true;
  for (std::size_t id = 1; id < nodes_.size(); ++id) {
    const NodeState& ns = nodes_[id];
    if (ns.role == ClusterRoleKind::Undecided) return false;
    if (ns.transfer_to != 0 || ns.promote_candidate != 0) return false;
  }
  return engine_->now() - last_change_ >= params_.stability_window;
}

}  // namespace manetsim
