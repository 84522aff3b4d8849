#include "manetsim/simulation.hpp"

#include <stdexcept>

namespace manetsim {

Simulation::Simulation(ScenarioConfig config)
    : config_(std::move(config)),
      placement_rng_(config_.master_seed, "placement"),
      mobility_rng_(config_.master_seed, "mobility"),
      mac_backoff_rng_(config_.master_seed, "mac-backoff"),
      traffic_rng_(config_.master_seed, "traffic") {
  config_.validate();

  RandomWaypointMobility::Params mob;
  mob.terrain = config_.terrain;
  mob.speed_min_mps = config_.speed_min_mps;
  mob.speed_max_mps = config_.speed_max_mps;
  mob.pause_time = from_seconds(config_.pause_time_s);
  mob.start_time = from_seconds(config_.mobility_start_s);
  mobility_ = std::make_unique<RandomWaypointMobility>(mob, config_.node_count);

  std::vector<Point> points =
      RandomWaypointMobility::init_placement(config_.node_count, config_.terrain,
                                             placement_rng_);
  for (NodeId id = 1; id <= config_.node_count; ++id) {
    mobility_->set_initial_position(id, points[static_cast<std::size_t>(id - 1)]);
  }
  for (const auto& [id, point] : config_.placements) {
    mobility_->set_initial_position(id, point);
  }

  RadioParams radio;
  radio.tx_range_m = config_.tx_range_m;
  radio.bitrate_bps = config_.bitrate_bps;
  radio_ = std::make_unique<RadioLink>(radio, *mobility_);

  DcfMac::Params mac;
  mac.queue_capacity = config_.queue_capacity;
  mac.retry_limit = config_.retry_limit;
  mac_ = std::make_unique<DcfMac>(mac, engine_, *radio_, config_.node_count);
  mac_->set_backoff_draw([this](std::int64_t lo, std::int64_t hi) {
    return mac_backoff_rng_.uniform_int(lo, hi);
  });

  ClusterProtocol::Params cluster;
  cluster.mode = config_.mode;
  cluster.beacon_interval = from_seconds(config_.beacon_interval_s);
  cluster.neighbor_timeout = from_seconds(config_.neighbor_timeout_s);
  cluster.stability_window = from_seconds(config_.stability_window_s);
  clustering_ = std::make_unique<ClusterProtocol>(cluster, engine_, config_.node_count);
  clustering_->set_pinned_roles(config_.pinned_roles);
  clustering_->set_jitter_draw([this](std::int64_t lo, std::int64_t hi) {
    return mac_backoff_rng_.uniform_int(lo, hi);
  });

  AodvProtocol::Params aodv;
  aodv.flooding = config_.flooding;
  aodv.rreq_retries = config_.rreq_retries;
  aodv.active_route_timeout = from_seconds(config_.active_route_timeout_s);
  aodv_ = std::make_unique<AodvProtocol>(aodv, engine_, config_.node_count);
  aodv_->set_jitter_draw([this](std::int64_t lo, std::int64_t hi) {
    return mac_backoff_rng_.uniform_int(lo, hi);
  });

  traffic_ = std::make_unique<CbrTraffic>(config_.flows, engine_);

  // Wiring.
  clustering_->set_send_beacon([this](NodeId node, const BeaconBody& body) {
    Frame frame;
    frame.kind = FrameKind::Beacon;
    frame.src = node;
    frame.mac_dst = kBroadcastAddr;
    frame.body = body;
    mac_->enqueue(node, std::move(frame));
  });
  clustering_->set_neighbor_lost(
      [this](NodeId node, NodeId neighbor) { aodv_->on_link_failure(node, neighbor); });
  clustering_->set_role_changed([this](NodeId node, ClusterRoleKind old_role,
                                       ClusterRoleKind new_role, NodeId cluster_id) {
    if (role_log_) {
      (*role_log_) << engine_.now() << ',' << node << ',' << role_kind_name(old_role)
                   << ',' << role_kind_name(new_role) << ',' << cluster_id << '\n';
    }
  });

  mac_->set_deliver_callback([this](NodeId receiver, const Frame& frame, NodeId from) {
    switch (frame.kind) {
      case FrameKind::Data:
        aodv_->on_data(receiver, std::get<DataBody>(frame.body), from);
        break;
      case FrameKind::Beacon:
        clustering_->on_beacon(receiver, std::get<BeaconBody>(frame.body), from);
        break;
      case FrameKind::Rreq:
        aodv_->on_rreq(receiver, std::get<RreqBody>(frame.body), from);
        break;
      case FrameKind::Rrep:
        aodv_->on_rrep(receiver, std::get<RrepBody>(frame.body), from);
        break;
      case FrameKind::Rerr:
        aodv_->on_rerr(receiver, std::get<RerrBody>(frame.body), from);
        break;
    }
  });
  mac_->set_tx_start_callback([this](NodeId node, const Frame& frame) {
    (void)node;
    switch (frame.kind) {
      case FrameKind::Beacon: ++control_.beacon_tx; break;
      case FrameKind::Rreq: ++control_.rreq_tx; break;
      case FrameKind::Rrep: ++control_.rrep_tx; break;
      case FrameKind::Rerr: ++control_.rerr_tx; break;
      case FrameKind::Data: break;
    }
  });
  mac_->set_link_fail_callback(
      [this](NodeId node, NodeId next_hop) { aodv_->on_link_failure(node, next_hop); });
  mac_->set_drop_callback([this](NodeId node, const Frame& frame, MacDropReason reason) {
    (void)node;
    if (frame.kind != FrameKind::Data) return;
    traffic_->on_mac_drop(std::get<DataBody>(frame.body),
                          reason == MacDropReason::QueueFull);
  });

  aodv_->set_send_frame(
      [this](NodeId node, Frame frame) { mac_->enqueue(node, std::move(frame)); });
  aodv_->set_is_backbone([this](NodeId node) { return clustering_->is_backbone(node); });
  aodv_->set_deliver_app(
      [this](NodeId node, const DataBody& data) { traffic_->on_delivered(node, data); });
  aodv_->set_data_dropped(
      [this](const DataBody& data) { traffic_->on_no_route_drop(data); });

  traffic_->set_send(
      [this](NodeId src, const DataBody& data) { aodv_->send_data(src, data); });
}

void Simulation::set_snapshot_observer(SimTime start, SimTime interval,
                                       SnapshotObserver observer) {
  snapshot_start_ = start;
  snapshot_interval_ = interval;
  snapshot_observer_ = std::move(observer);
}

void Simulation::schedule_mobility() {
  SimTime start = from_seconds(config_.mobility_start_s);
  SimTime end = from_seconds(config_.sim_time_s);
  if (start >= end) return;  // static scenario
  engine_.schedule(start, EventKind::MobilityWaypoint, kEngineGlobal, [this] {
    for (NodeId id = 1; id <= config_.node_count; ++id) on_waypoint(id);
  });
}

void Simulation::on_waypoint(NodeId node) {
  Point at = mobility_->position_at(node, engine_.now());
  MotionLeg leg = mobility_->next_leg(node, at, engine_.now(), mobility_rng_);
  mobility_->begin_leg(node, leg);
  engine_.schedule(leg.arrival_time, EventKind::MobilityWaypoint, node,
                   [this, node] { on_waypoint(node); });
}

void Simulation::schedule_ticks() {
  SimTime interval = from_seconds(config_.link_check_interval_s);
  SimTime end = from_seconds(config_.sim_time_s);
  for (SimTime t = interval; t <= end; t += interval) {
    engine_.schedule(t, EventKind::LinkCheck, kEngineGlobal, [this] {
      clustering_->on_tick();
      aodv_->on_tick();
    });
  }
  if (snapshot_observer_) {
    for (SimTime t = snapshot_start_; t <= end; t += snapshot_interval_) {
      engine_.schedule(t, EventKind::Snapshot, kEngineGlobal,
                       [this] { snapshot_observer_(*this, engine_.now()); });
    }
  }
  engine_.schedule(end, EventKind::SimEnd, kEngineGlobal, [] {});
}

RunReport Simulation::run() {
  if (ran_) throw std::logic_error("Simulation::run: already ran");
  ran_ = true;

  clustering_->start(mac_backoff_rng_);
  schedule_mobility();
  traffic_->start();
  schedule_ticks();

  engine_.run_until(from_seconds(config_.sim_time_s));
  return build_report();
}

RunReport Simulation::build_report() const {
  RunReport report;
  report.seed = config_.master_seed;
  report.mode = cluster_mode_name(config_.mode);
  report.sent = traffic_->total_sent();
  report.delivered = traffic_->total_delivered();
  if (auto d = traffic_->mean_delay_s()) report.e2e_delay_ms = *d * 1e3;
  if (auto j = traffic_->mean_jitter_s()) report.jitter_ms = *j * 1e3;
  MacCounters mac = mac_->totals();
  report.mac_drops = mac.drops_retry + mac.drops_queue;
  report.control_tx = control_.total();
  report.suppressed_forwards = aodv_->counters().suppressed_forwards;
  report.throughput_bps = traffic_->total_throughput_bps();
  return report;
}

long Simulation::flow_in_flight(int flow_index) const {
  long count = 0;
  for (NodeId id = 1; id <= config_.node_count; ++id) {
    for (const Frame& frame : mac_->pending_frames(id)) {
      if (frame.kind != FrameKind::Data) continue;
      if (std::get<DataBody>(frame.body).flow_index == flow_index) ++count;
    }
  }
  for (const Frame& frame : mac_->handoff_frames()) {
    if (frame.kind != FrameKind::Data) continue;
    if (std::get<DataBody>(frame.body).flow_index == flow_index) ++count;
  }
  for (const DataBody& data : aodv_->buffered_packets()) {
    if (data.flow_index == flow_index) ++count;
  }
  return count;
}

}  // namespace manetsim
