#include "manetsim/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <future>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "manetsim/simulation.hpp"

namespace manetsim {

RunReport run_scenario(const ScenarioConfig& config, std::optional<std::uint64_t> seed,
                       std::ostream* trace, std::ostream* role_log) {
  ScenarioConfig cfg = config;
  if (seed) cfg.master_seed = *seed;
  Simulation sim(cfg);
  if (trace) sim.set_trace(trace);
  if (role_log) sim.set_role_log(role_log);
  return sim.run();
}

SweepResult sweep_scenario(const ScenarioConfig& config,
                           const std::vector<std::uint64_t>& seeds, bool parallel) {
  if (seeds.empty()) throw std::invalid_argument("sweep: need at least one seed");
  SweepResult result;
  result.config = config;
  result.rows.reserve(seeds.size());
  if (!parallel) {
    for (std::uint64_t seed : seeds) {
      result.rows.push_back(run_scenario(config, seed));
    }
    return result;
  }
  std::vector<std::future<RunReport>> futures;
  futures.reserve(seeds.size());
  for (std::uint64_t seed : seeds) {
    futures.push_back(std::async(std::launch::async, [&config, seed] {
      return run_scenario(config, seed);
    }));
  }
  for (auto& f : futures) result.rows.push_back(f.get());
  return result;
}

namespace {

struct MetricColumn {
  std::string name;
  std::optional<double> (*get)(const RunReport&);
};

std::optional<double> get_sent(const RunReport& r) { return static_cast<double>(r.sent); }
std::optional<double> get_delivered(const RunReport& r) {
  return static_cast<double>(r.delivered);
}
std::optional<double> get_delay(const RunReport& r) { return r.e2e_delay_ms; }
std::optional<double> get_jitter(const RunReport& r) { return r.jitter_ms; }
std::optional<double> get_mac_drops(const RunReport& r) {
  return static_cast<double>(r.mac_drops);
}
std::optional<double> get_control(const RunReport& r) {
  return static_cast<double>(r.control_tx);
}
std::optional<double> get_suppressed(const RunReport& r) {
  return static_cast<double>(r.suppressed_forwards);
}
std::optional<double> get_throughput(const RunReport& r) { return r.throughput_bps; }
std::optional<double> get_delivery_ratio(const RunReport& r) {
  if (r.sent == 0) return std::nullopt;
  return static_cast<double>(r.delivered) / static_cast<double>(r.sent);
}

const MetricColumn kAggregateColumns[] = {
    {"sent", get_sent},
    {"delivered", get_delivered},
    {"e2e_delay_ms", get_delay},
    {"jitter_ms", get_jitter},
    {"mac_drops", get_mac_drops},
    {"control_tx", get_control},
    {"suppressed_forwards", get_suppressed},
    {"throughput_bps", get_throughput},
};

const MetricColumn kCompareColumns[] = {
    {"e2e_delay_ms", get_delay},
    {"jitter_ms", get_jitter},
    {"mac_drops", get_mac_drops},
    {"control_tx", get_control},
    {"suppressed_forwards", get_suppressed},
    {"throughput_bps", get_throughput},
    {"delivery_ratio", get_delivery_ratio},
};

std::string opt_cell(const std::optional<double>& v) {
  return v ? format_double_exact(*v) : std::string("NA");
}

}  // namespace

void write_report_csv(std::ostream& out, const SweepResult& result, bool with_aggregate) {
  for (const auto& [key, value] : result.config.canonical_items()) {
    out << "# " << key << '=' << value << '\n';
  }
  out << kReportHeader << '\n';
  for (const RunReport& row : result.rows) out << report_csv_row(row) << '\n';
  if (!with_aggregate) return;

  const char* labels[3] = {"median", "min", "max"};
  for (int which = 0; which < 3; ++which) {
    out << labels[which] << ',' << cluster_mode_name(result.config.mode);
    for (const MetricColumn& col : kAggregateColumns) {
      std::vector<std::optional<double>> values;
      values.reserve(result.rows.size());
      for (const RunReport& row : result.rows) values.push_back(col.get(row));
      Aggregate agg = aggregate_values(std::move(values));
      const std::optional<double>& v =
          which == 0 ? agg.median : (which == 1 ? agg.min : agg.max);
      out << ',' << opt_cell(v);
    }
    out << '\n';
  }
}

SweepResult read_report_csv(std::istream& in, const std::string& origin) {
  SweepResult result;
  std::ostringstream config_text;
  std::string line;
  bool saw_header = false;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = line.substr(1);
      config_text << body << '\n';
      continue;
    }
    if (!saw_header) {
      if (line != kReportHeader) {
        throw std::runtime_error(origin + ":" + std::to_string(line_no) +
                                 ": unexpected header");
      }
      saw_header = true;
      continue;
    }
    // Aggregate rows carry a label instead of a numeric seed.
    if (!line.empty() && !std::isdigit(static_cast<unsigned char>(line[0]))) continue;
    result.rows.push_back(parse_report_row(line));
  }
  if (!saw_header) throw std::runtime_error(origin + ": missing report header");
  result.config = parse_scenario(config_text.str(), origin + "(embedded config)");
  return result;
}

std::vector<ComparisonRow> compare_sweeps(const SweepResult& a, const SweepResult& b) {
  std::vector<std::uint64_t> seeds_a, seeds_b;
  for (const RunReport& r : a.rows) seeds_a.push_back(r.seed);
  for (const RunReport& r : b.rows) seeds_b.push_back(r.seed);
  if (seeds_a != seeds_b) {
    throw std::runtime_error("compare: seed sets differ between inputs");
  }

  // Configs must match apart from mode and pinned roles.
  std::map<std::string, std::string> items_a, items_b;
  for (const auto& [k, v] : a.config.canonical_items()) items_a[k] = v;
  for (const auto& [k, v] : b.config.canonical_items()) items_b[k] = v;
  auto exempt = [](const std::string& key) {
    return key == "mode" || key.rfind("pin.", 0) == 0;
  };
  std::vector<std::string> differing;
  for (const auto& [k, v] : items_a) {
    if (exempt(k)) continue;
    auto it = items_b.find(k);
    if (it == items_b.end() || it->second != v) differing.push_back(k);
  }
  for (const auto& [k, v] : items_b) {
    if (exempt(k) || items_a.count(k)) continue;
    differing.push_back(k);
  }
  if (!differing.empty()) {
    std::string msg = "compare: configs differ beyond mode/pins:";
    for (const std::string& k : differing) msg += " " + k;
    throw std::runtime_error(msg);
  }

  std::vector<ComparisonRow> rows;
  for (const MetricColumn& col : kCompareColumns) {
    std::vector<std::optional<double>> va, vb, vdiff, vratio;
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
      ComparisonRow row;
      row.metric = col.name;
      row.seed_label = std::to_string(a.rows[i].seed);
      row.a = col.get(a.rows[i]);
      row.b = col.get(b.rows[i]);
      if (row.a && row.b) {
        row.diff = *row.b - *row.a;
        if (*row.a != 0.0) {
          row.ratio = *row.b / *row.a;
        } else if (*row.b == 0.0) {
          row.ratio = 1.0;  // 0/0: equal
        }
      }
      va.push_back(row.a);
      vb.push_back(row.b);
      vdiff.push_back(row.diff);
      vratio.push_back(row.ratio);
      rows.push_back(std::move(row));
    }
    ComparisonRow median;
    median.metric = col.name;
    median.seed_label = "median";
    median.a = aggregate_values(va).median;
    median.b = aggregate_values(vb).median;
    median.diff = aggregate_values(vdiff).median;
    median.ratio = aggregate_values(vratio).median;
    rows.push_back(std::move(median));
  }
  return rows;
}

void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows) {
  out << "metric,seed,a,b,diff,ratio\n";
  for (const ComparisonRow& row : rows) {
    out << row.metric << ',' << row.seed_label << ',' << opt_cell(row.a) << ','
        << opt_cell(row.b) << ',' << opt_cell(row.diff) << ',' << opt_cell(row.ratio)
        << '\n';
  }
}

}  // namespace manetsim
