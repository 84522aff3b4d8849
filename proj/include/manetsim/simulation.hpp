#ifndef MANETSIM_SIMULATION_HPP
#define MANETSIM_SIMULATION_HPP

#include <functional>
#include <memory>
#include <ostream>

#include "manetsim/aodv.hpp"
#include "manetsim/clustering.hpp"
#include "manetsim/event_queue.hpp"
#include "manetsim/mac.hpp"
#include "manetsim/mobility.hpp"
#include "manetsim/radio.hpp"
#include "manetsim/report.hpp"
#include "manetsim/rng.hpp"
#include "manetsim/scenario.hpp"
#include "manetsim/traffic.hpp"

namespace manetsim {

struct ControlCounters {
  long beacon_tx = 0;
  long rreq_tx = 0;
  long rrep_tx = 0;
  long rerr_tx = 0;
  long total() const { return beacon_tx + rreq_tx + rrep_tx + rerr_tx; }
};

// One self-contained run: engine, channel, protocols and traffic wired
// together. Fully deterministic given the scenario's master seed; nothing
// is shared between instances, so independent runs may execute in parallel.
class Simulation {
 public:
  using SnapshotObserver = std::function<void(Simulation&, SimTime)>;

  explicit Simulation(ScenarioConfig config);

  void set_trace(std::ostream* trace) { engine_.set_trace(trace); }
  void set_role_log(std::ostream* log) { role_log_ = log; }
  void set_snapshot_observer(SimTime start, SimTime interval, SnapshotObserver observer);

  RunReport run();

  const ScenarioConfig& config() const { return config_; }
  EventQueue& engine() { return engine_; }
  RandomWaypointMobility& mobility() { return *mobility_; }
  RadioLink& radio() { return *radio_; }
  DcfMac& mac() { return *mac_; }
  ClusterProtocol& clustering() { return *clustering_; }
  AodvProtocol& aodv() { return *aodv_; }
  CbrTraffic& traffic() { return *traffic_; }
  const ControlCounters& control() const { return control_; }

  // Data packets of one flow still travelling at the current instant:
  // MAC queues, decode-to-handoff gaps, and discovery buffers.
  long flow_in_flight(int flow_index) const;

 private:
  void schedule_mobility();
  void on_waypoint(NodeId node);
  void schedule_ticks();
  RunReport build_report() const;

  ScenarioConfig config_;
  EventQueue engine_;
  RngStream placement_rng_;
  RngStream mobility_rng_;
  RngStream mac_backoff_rng_;
  RngStream traffic_rng_;

  std::unique_ptr<RandomWaypointMobility> mobility_;
  std::unique_ptr<RadioLink> radio_;
  std::unique_ptr<DcfMac> mac_;
  std::unique_ptr<ClusterProtocol> clustering_;
  std::unique_ptr<AodvProtocol> aodv_;
  std::unique_ptr<CbrTraffic> traffic_;

  ControlCounters control_;
  std::ostream* role_log_ = nullptr;
  bool ran_ = false;

  SimTime snapshot_start_ = 0;
  SimTime snapshot_interval_ = 0;
  SnapshotObserver snapshot_observer_;
};

}  // namespace manetsim

#endif
