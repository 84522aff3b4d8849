#ifndef MANETSIM_SCENARIO_HPP
#define MANETSIM_SCENARIO_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "manetsim/geometry.hpp"
#include "manetsim/sim_time.hpp"

namespace manetsim {

enum class ClusterMode { ChAndGateway, Chg };
enum class FloodingPolicy { Full, Backbone };

// Role names usable as pins in scenario files.
enum class PinnedRole { Head, Gateway, Chg };

std::string cluster_mode_name(ClusterMode mode);
std::string flooding_policy_name(FloodingPolicy policy);

struct CbrFlowConfig {
  int src = 0;
  int dst = 0;
  double rate_pps = 4.0;       // packets per second
  int payload_bytes = 512;
  double start_s = 15.0;
  double end_s = 295.0;
};

// Raised for any scenario file problem; carries a key/line diagnostic.
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScenarioConfig {
  Terrain terrain;                        // 1500 x 1500 m
  int node_count = 30;                    // node ids are 1..node_count
  double speed_min_mps = 0.0;
  double speed_max_mps = 10.0;
  double pause_time_s = 0.0;
  double mobility_start_s = 10.0;
  double sim_time_s = 300.0;
  double tx_range_m = 250.0;
  double bitrate_bps = 2e6;
  ClusterMode mode = ClusterMode::ChAndGateway;
  FloodingPolicy flooding = FloodingPolicy::Backbone;
  std::uint64_t master_seed = 1;
  std::vector<CbrFlowConfig> flows;
  std::map<int, PinnedRole> pinned_roles;
  std::map<int, Point> placements;        // optional fixed initial positions

  // Protocol timers; defaults match the shipped scenarios.
  double beacon_interval_s = 1.0;
  double neighbor_timeout_s = 3.0;
  double stability_window_s = 2.0;
  double link_check_interval_s = 0.25;
  int queue_capacity = 50;
  int retry_limit = 7;
  int rreq_retries = 2;
  double active_route_timeout_s = 3.0;

  void validate() const;

  // Stable key=value form used for config diffing and report embedding.
  std::vector<std::pair<std::string, std::string>> canonical_items() const;
};

ScenarioConfig load_scenario(const std::string& path);
ScenarioConfig parse_scenario(const std::string& text, const std::string& origin);

}  // namespace manetsim

#endif
