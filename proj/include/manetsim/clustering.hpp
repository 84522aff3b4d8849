#ifndef MANETSIM_CLUSTERING_HPP
#define MANETSIM_CLUSTERING_HPP

#include <functional>
#include <map>
#include <vector>

#include "manetsim/event_queue.hpp"
#include "manetsim/frame.hpp"
#include "manetsim/rng.hpp"
#include "manetsim/scenario.hpp"
#include "manetsim/sim_time.hpp"

namespace manetsim {

// Beacon-driven lowest-ID clustering with two architectures.
//
// ch_g: lowest-ID formation; members that hear a foreign cluster classify
//       as Gateway, the rest stay Ordinary. Backbone = heads + gateways.
// chg:  the same formation, then each head hands its role to the lowest-id
//       boundary member of the cluster (itself included), merging head and
//       gateway duty in one ClusterHeadGateway node. Backbone = the CHGs.
//
// A node is undecided until every known lower-id neighbor has decided; it
// then joins the lowest-id head it hears, or declares itself head. Role
// flips driven by transient conditions are damped by stability_window.
class ClusterProtocol {
 public:
  struct Params {
    ClusterMode mode = ClusterMode::ChAndGateway;
    SimTime beacon_interval = from_seconds(1.0);
    SimTime neighbor_timeout = from_seconds(3.0);
    SimTime stability_window = from_seconds(2.0);
  };

  struct NeighborEntry {
    SimTime last_heard = 0;
    NodeId cluster_id = 0;
    ClusterRoleKind role = ClusterRoleKind::Undecided;
    bool boundary = false;
    bool settled = false;
  };

  using SendBeacon = std::function<void(NodeId node, const BeaconBody&)>;
  using NeighborLost = std::function<void(NodeId node, NodeId neighbor)>;
  using RoleChanged = std::function<void(NodeId node, ClusterRoleKind old_role,
                                         ClusterRoleKind new_role, NodeId cluster_id)>;
  using JitterDraw = std::function<std::int64_t(std::int64_t lo, std::int64_t hi)>;

  ClusterProtocol(Params params, EventQueue& engine, int node_count);

  // Per-round phase jitter source; keeps hidden-terminal beacon pairs from
  // staying aligned forever.
  void set_jitter_draw(JitterDraw draw) { jitter_draw_ = std::move(draw); }

  void set_send_beacon(SendBeacon cb) { send_beacon_ = std::move(cb); }
  void set_neighbor_lost(NeighborLost cb) { neighbor_lost_ = std::move(cb); }
  void set_role_changed(RoleChanged cb) { role_changed_ = std::move(cb); }

  // Fixed role assignment; disables election and maintenance transitions.
  void set_pinned_roles(const std::map<int, PinnedRole>& pins);

  // Schedules the per-node beacon timers. Start offsets are jittered within
  // the first interval so synchronized beacons do not collide forever.
  void start(RngStream& jitter_rng);

  void on_beacon(NodeId node, const BeaconBody& body, NodeId from);

  // Periodic housekeeping: neighbor expiry, pending decisions, promotion.
  void on_tick();

  ClusterRoleKind role(NodeId node) const { return nodes_[node].role; }
  NodeId cluster_id(NodeId node) const { return nodes_[node].cluster_id; }
  bool is_backbone(NodeId node) const;
  int backbone_size() const;
  const std::map<NodeId, NeighborEntry>& neighbors(NodeId node) const {
    return nodes_[node].table;
  }

  // True when no transfer handshake is pending and nothing changed within
  // the stability window; snapshot comparisons sample only such instants.
  bool stabilized() const;
  SimTime last_change_time() const { return last_change_; }

  long role_change_count() const { return role_changes_; }

 private:
  struct NodeState {
    ClusterRoleKind role = ClusterRoleKind::Undecided;
    NodeId cluster_id = 0;
    std::uint32_t beacon_seq = 0;
    std::map<NodeId, NeighborEntry> table;
    SimTime decide_after = 0;       // end of the formation listen window
    SimTime boundary_since = -1;    // gateway-condition onset (ch_g members)
    SimTime interior_since = -1;    // ordinary-condition onset
    NodeId promote_candidate = 0;   // chg heads: pending transfer candidate
    SimTime candidate_since = -1;
    NodeId transfer_to = 0;         // demoted head still announcing the handover
    EventHandle beacon_event;
    SimTime beacon_anchor = 0;      // grid origin; emissions sit on
                                    // anchor + k*interval + small phase
    std::int64_t beacon_round = 0;
    bool classified_once = false;   // first gateway classification is formation
  };

  ClusterRoleKind head_kind() const {
    return params_.mode == ClusterMode::Chg ? ClusterRoleKind::ClusterHeadGateway
                                            : ClusterRoleKind::ClusterHead;
  }
  bool is_head_kind(ClusterRoleKind kind) const {
    return kind == ClusterRoleKind::ClusterHead ||
           kind == ClusterRoleKind::ClusterHeadGateway;
  }

  void emit_beacon(NodeId node);
  void set_role(NodeId node, ClusterRoleKind role, NodeId cluster_id);
  // Maintenance role changes announce themselves with an out-of-schedule
  // beacon; formation and promotion transitions ride the regular grid.
  void accelerate_beacon(NodeId node);
  bool self_boundary(NodeId node) const;
  bool self_settled(NodeId node) const;
  NodeId lowest_head_neighbor(NodeId node) const;
  void try_decide(NodeId node);
  void reevaluate_member(NodeId node);
  void evaluate_promotion(NodeId node);
  void expire_neighbors(NodeId node);
  bool has_cluster_contact(NodeId node) const;

  Params params_;
  EventQueue* engine_;
  std::vector<NodeState> nodes_;
  bool pinned_ = false;
  SimTime last_change_ = 0;
  long role_changes_ = 0;
  bool transfer_pending_ = false;

  SendBeacon send_beacon_;
  NeighborLost neighbor_lost_;
  RoleChanged role_changed_;
  JitterDraw jitter_draw_;
};

}  // namespace manetsim

#endif
