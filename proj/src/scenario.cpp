#include "manetsim/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace manetsim {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Shortest round-trip representation, stable across runs.
std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& value, const std::string& diag) {
  try {
    std::size_t pos = 0;
    double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw ScenarioError(diag + ": expected a number, got '" + value + "'");
  }
}

std::int64_t parse_int(const std::string& value, const std::string& diag) {
  try {
    std::size_t pos = 0;
    std::int64_t v = std::stoll(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw ScenarioError(diag + ": expected an integer, got '" + value + "'");
  }
}

PinnedRole parse_role(const std::string& value, const std::string& diag) {
  if (value == "head") return PinnedRole::Head;
  if (value == "gateway") return PinnedRole::Gateway;
  if (value == "chg") return PinnedRole::Chg;
  throw ScenarioError(diag + ": unknown role '" + value + "' (head|gateway|chg)");
}

std::string role_name(PinnedRole role) {
  switch (role) {
    case PinnedRole::Head: return "head";
    case PinnedRole::Gateway: return "gateway";
    case PinnedRole::Chg: return "chg";
  }
  return "?";
}

}  // namespace

std::string cluster_mode_name(ClusterMode mode) {
  return mode == ClusterMode::Chg ? "chg" : "ch_g";
}

std::string flooding_policy_name(FloodingPolicy policy) {
  return policy == FloodingPolicy::Backbone ? "backbone" : "full";
}

ScenarioConfig parse_scenario(const std::string& text, const std::string& origin) {
  ScenarioConfig cfg;
  cfg.flows.clear();
  std::map<int, CbrFlowConfig> flows;

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    std::string diag = origin + ":" + std::to_string(line_no);
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ScenarioError(diag + ": expected key=value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    diag += " (" + key + ")";
    if (key.empty()) throw ScenarioError(diag + ": empty key");
    if (value.empty()) throw ScenarioError(diag + ": empty value");

    if (key == "terrain.width") {
      cfg.terrain.width = parse_double(value, diag);
    } else if (key == "terrain.height") {
      cfg.terrain.height = parse_double(value, diag);
    } else if (key == "node_count") {
      cfg.node_count = static_cast<int>(parse_int(value, diag));
    } else if (key == "speed_min") {
      cfg.speed_min_mps = parse_double(value, diag);
    } else if (key == "speed_max") {
      cfg.speed_max_mps = parse_double(value, diag);
    } else if (key == "pause_time") {
      cfg.pause_time_s = parse_double(value, diag);
    } else if (key == "mobility_start") {
      cfg.mobility_start_s = parse_double(value, diag);
    } else if (key == "sim_time") {
      cfg.sim_time_s = parse_double(value, diag);
    } else if (key == "tx_range") {
      cfg.tx_range_m = parse_double(value, diag);
    } else if (key == "bitrate") {
      cfg.bitrate_bps = parse_double(value, diag);
    } else if (key == "mode") {
      if (value == "ch_g") cfg.mode = ClusterMode::ChAndGateway;
      else if (value == "chg") cfg.mode = ClusterMode::Chg;
      else throw ScenarioError(diag + ": unknown mode '" + value + "' (ch_g|chg)");
    } else if (key == "flooding") {
      if (value == "full") cfg.flooding = FloodingPolicy::Full;
      else if (value == "backbone") cfg.flooding = FloodingPolicy::Backbone;
      else throw ScenarioError(diag + ": unknown flooding '" + value + "' (full|backbone)");
    } else if (key == "master_seed") {
      cfg.master_seed = static_cast<std::uint64_t>(parse_int(value, diag));
    } else if (key == "beacon_interval") {
      cfg.beacon_interval_s = parse_double(value, diag);
    } else if (key == "neighbor_timeout") {
      cfg.neighbor_timeout_s = parse_double(value, diag);
    } else if (key == "stability_window") {
      cfg.stability_window_s = parse_double(value, diag);
    } else if (key == "link_check_interval") {
      cfg.link_check_interval_s = parse_double(value, diag);
    } else if (key == "queue_capacity") {
      cfg.queue_capacity = static_cast<int>(parse_int(value, diag));
    } else if (key == "retry_limit") {
      cfg.retry_limit = static_cast<int>(parse_int(value, diag));
    } else if (key == "rreq_retries") {
      cfg.rreq_retries = static_cast<int>(parse_int(value, diag));
    } else if (key == "active_route_timeout") {
      cfg.active_route_timeout_s = parse_double(value, diag);
    } else if (key.rfind("flow.", 0) == 0) {
      std::string rest = key.substr(5);
      auto dot = rest.find('.');
      if (dot == std::string::npos) throw ScenarioError(diag + ": expected flow.<n>.<field>");
      int index = static_cast<int>(parse_int(rest.substr(0, dot), diag));
      std::string field = rest.substr(dot + 1);
      CbrFlowConfig& flow = flows[index];
      if (field == "src") flow.src = static_cast<int>(parse_int(value, diag));
      else if (field == "dst") flow.dst = static_cast<int>(parse_int(value, diag));
      else if (field == "rate") flow.rate_pps = parse_double(value, diag);
      else if (field == "payload") flow.payload_bytes = static_cast<int>(parse_int(value, diag));
      else if (field == "start") flow.start_s = parse_double(value, diag);
      else if (field == "end") flow.end_s = parse_double(value, diag);
      else throw ScenarioError(diag + ": unknown flow field '" + field + "'");
    } else if (key.rfind("pin.", 0) == 0) {
      int id = static_cast<int>(parse_int(key.substr(4), diag));
      cfg.pinned_roles[id] = parse_role(value, diag);
    } else if (key.rfind("place.", 0) == 0) {
      int id = static_cast<int>(parse_int(key.substr(6), diag));
      auto comma = value.find(',');
      if (comma == std::string::npos) throw ScenarioError(diag + ": expected x,y");
      Point p;
      p.x = parse_double(trim(value.substr(0, comma)), diag);
      p.y = parse_double(trim(value.substr(comma + 1)), diag);
      cfg.placements[id] = p;
    } else {
      throw ScenarioError(diag + ": unknown key");
    }
  }

  for (auto& [index, flow] : flows) cfg.flows.push_back(flow);
  cfg.validate();
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(path + ": cannot open scenario file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path);
}

void ScenarioConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ScenarioError("config: " + msg); };

  if (node_count < 1) fail("node_count must be >= 1");
  if (terrain.width <= 0 || terrain.height <= 0) fail("terrain dimensions must be positive");
  if (speed_min_mps < 0) fail("speed_min must be >= 0");
  if (speed_max_mps < speed_min_mps) fail("speed_max must be >= speed_min");
  if (speed_max_mps <= 0) fail("speed_max must be positive");
  if (pause_time_s < 0) fail("pause_time must be >= 0");
  if (mobility_start_s < 0) fail("mobility_start must be >= 0");
  if (sim_time_s <= 0) fail("sim_time must be positive");
  if (tx_range_m <= 0) fail("tx_range must be positive");
  if (bitrate_bps <= 0) fail("bitrate must be positive");
  if (queue_capacity < 1) fail("queue_capacity must be >= 1");
  if (retry_limit < 0) fail("retry_limit must be >= 0");
  if (rreq_retries < 0) fail("rreq_retries must be >= 0");
  if (beacon_interval_s <= 0) fail("beacon_interval must be positive");
  if (neighbor_timeout_s <= 0) fail("neighbor_timeout must be positive");
  if (stability_window_s <= 0) fail("stability_window must be positive");
  if (link_check_interval_s <= 0) fail("link_check_interval must be positive");
  if (active_route_timeout_s <= 0) fail("active_route_timeout must be positive");

  auto check_node = [&](int id, const std::string& what) {
    if (id < 1 || id > node_count) {
      fail(what + " refers to node " + std::to_string(id) + " outside 1.." +
           std::to_string(node_count));
    }
  };

  for (std::size_t i = 0; i < flows.size(); ++i) {
    const CbrFlowConfig& flow = flows[i];
    std::string what = "flow." + std::to_string(i);
    check_node(flow.src, what + ".src");
    check_node(flow.dst, what + ".dst");
    if (flow.src == flow.dst) fail(what + ": src and dst must differ");
    if (flow.rate_pps <= 0) fail(what + ": rate must be positive");
    if (flow.payload_bytes <= 0) fail(what + ": payload must be positive");
    if (flow.start_s >= flow.end_s) fail(what + ": start must be before end");
    if (flow.end_s > sim_time_s) fail(what + ": end must be <= sim_time");
  }

  for (const auto& [id, role] : pinned_roles) {
    check_node(id, "pin");
    if (mode == ClusterMode::Chg && role != PinnedRole::Chg) {
      fail("pin." + std::to_string(id) + ": only chg pins are valid in chg mode");
    }
    if (mode == ClusterMode::ChAndGateway && role == PinnedRole::Chg) {
      fail("pin." + std::to_string(id) + ": chg pins are invalid in ch_g mode");
    }
  }

  for (const auto& [id, point] : placements) {
    check_node(id, "place");
    if (!terrain.contains(point)) {
      fail("place." + std::to_string(id) + ": point outside terrain");
    }
  }
}

std::vector<std::pair<std::string, std::string>> ScenarioConfig::canonical_items() const {
  std::vector<std::pair<std::string, std::string>> items;
  auto add = [&](const std::string& k, const std::string& v) { items.emplace_back(k, v); };

  add("terrain.width", format_double(terrain.width));
  add("terrain.height", format_double(terrain.height));
  add("node_count", std::to_string(node_count));
  add("speed_min", format_double(speed_min_mps));
  add("speed_max", format_double(speed_max_mps));
  add("pause_time", format_double(pause_time_s));
  add("mobility_start", format_double(mobility_start_s));
  add("sim_time", format_double(sim_time_s));
  add("tx_range", format_double(tx_range_m));
  add("bitrate", format_double(bitrate_bps));
  add("mode", cluster_mode_name(mode));
  add("flooding", flooding_policy_name(flooding));
  add("master_seed", std::to_string(master_seed));
  add("beacon_interval", format_double(beacon_interval_s));
  add("neighbor_timeout", format_double(neighbor_timeout_s));
  add("stability_window", format_double(stability_window_s));
  add("link_check_interval", format_double(link_check_interval_s));
  add("queue_capacity", std::to_string(queue_capacity));
  add("retry_limit", std::to_string(retry_limit));
  add("rreq_retries", std::to_string(rreq_retries));
  add("active_route_timeout", format_double(active_route_timeout_s));
  for (std::size_t i = 0; i < flows.size(); ++i) {
    const CbrFlowConfig& flow = flows[i];
    std::string prefix = "flow." + std::to_string(i) + ".";
    add(prefix + "src", std::to_string(flow.src));
    add(prefix + "dst", std::to_string(flow.dst));
    add(prefix + "rate", format_double(flow.rate_pps));
    add(prefix + "payload", std::to_string(flow.payload_bytes));
    add(prefix + "start", format_double(flow.start_s));
    add(prefix + "end", format_double(flow.end_s));
  }
  for (const auto& [id, role] : pinned_roles) {
    add("pin." + std::to_string(id), role_name(role));
  }
  for (const auto& [id, point] : placements) {
    add("place." + std::to_string(id), format_double(point.x) + "," + format_double(point.y));
  }
  return items;
}

}  // namespace manetsim
