#include <doctest.h>

#include <sstream>

#include "manetsim/experiment.hpp"
#include "manetsim/simulation.hpp"
#include "test_support.hpp"

using namespace manetsim;
using namespace manetsim::test;

#ifndef MANETSIM_SCENARIO_DIR
#define MANETSIM_SCENARIO_DIR "scenarios"
#endif

namespace {

const std::string kDir = MANETSIM_SCENARIO_DIR;

ScenarioConfig two_node_flow() {
  StaticGraph g;
  g.n = 2;
  g.pos.assign(3, Point{});
  g.pos[1] = {0, 0};
  g.pos[2] = {120, 0};
  auto cfg = static_scenario(g, ClusterMode::ChAndGateway, 30.0, 4);
  cfg.flooding = FloodingPolicy::Full;
  CbrFlowConfig flow;
  flow.src = 1;
  flow.dst = 2;
  flow.rate_pps = 4.0;
  flow.payload_bytes = 512;
  flow.start_s = 5.0;
  flow.end_s = 25.0;
  cfg.flows = {flow};
  return cfg;
}

void check_flow_conservation(Simulation& sim) {
  for (int i = 0; i < sim.traffic().flow_count(); ++i) {
    const auto& flow = sim.traffic().flow(i);
    long accounted = static_cast<long>(flow.samples.size()) + flow.drop_mac_retry +
                     flow.drop_mac_queue + flow.drop_no_route + sim.flow_in_flight(i);
    INFO("flow ", i, ": sent ", flow.sent, " accounted ", accounted);
    CHECK(flow.sent == accounted);
  }
}

}  // namespace

TEST_CASE("uncontended two-node flow delivers everything") {
  Simulation sim(two_node_flow());
  RunReport report = sim.run();
  CHECK(report.sent == 80);
  CHECK(report.delivered == report.sent);
  CHECK(report.mac_drops == 0);
  CHECK(report.throughput_bps > 0.0);
  check_flow_conservation(sim);
}

TEST_CASE("steady-state single-hop delay equals airtime plus propagation") {
  ScenarioConfig cfg = two_node_flow();
  cfg.beacon_interval_s = 1e6;  // no control traffic at all
  Simulation sim(cfg);
  sim.run();

  Frame probe;
  probe.kind = FrameKind::Data;
  DataBody body;
  body.payload_bytes = 512;
  probe.body = body;
  SimTime expected = sim.radio().airtime(probe) + sim.radio().propagation_delay(1, 2, 0);

  const auto& samples = sim.traffic().flow(0).samples;
  REQUIRE(samples.size() == 80);
  for (const DeliverySample& s : samples) {
    if (s.seq == 0) continue;  // the first packet pays for route discovery
    SimTime delay = s.recv_time - s.send_time;
    CHECK(std::abs(delay - expected) <= 20);  // within one slot
  }
}

TEST_CASE("same seed twice: identical reports and event traces") {
  ScenarioConfig cfg = load_scenario(kDir + "/sweep_chgw.scn");
  cfg.sim_time_s = 60.0;
  cfg.flows[0].end_s = 55.0;
  cfg.master_seed = 7;

  std::ostringstream trace_a, trace_b;
  RunReport a = run_scenario(cfg, std::nullopt, &trace_a);
  RunReport b = run_scenario(cfg, std::nullopt, &trace_b);
  CHECK(report_csv_row(a) == report_csv_row(b));
  CHECK(trace_a.str() == trace_b.str());
  CHECK_FALSE(trace_a.str().empty());
}

TEST_CASE("different seeds diverge") {
  ScenarioConfig cfg = load_scenario(kDir + "/sweep_chgw.scn");
  cfg.sim_time_s = 60.0;
  cfg.flows[0].end_s = 55.0;
  RunReport a = run_scenario(cfg, 1);
  RunReport b = run_scenario(cfg, 2);
  CHECK(report_csv_row(a) != report_csv_row(b));
}

TEST_CASE("packet conservation holds across scenario shapes") {
  SUBCASE("short study scenario, both modes") {
    for (const char* name : {"paper_chg.scn", "paper_chgw.scn"}) {
      ScenarioConfig cfg = load_scenario(kDir + "/" + std::string(name));
      cfg.sim_time_s = 90.0;
      cfg.flows[0].end_s = 85.0;
      cfg.master_seed = 3;
      Simulation sim(cfg);
      sim.run();
      check_flow_conservation(sim);
    }
  }
  SUBCASE("partitioned destination") {
    StaticGraph g;
    g.n = 2;
    g.pos.assign(3, Point{});
    g.pos[1] = {0, 0};
    g.pos[2] = {1200, 0};
    auto cfg = static_scenario(g, ClusterMode::ChAndGateway, 50.0, 5);
    CbrFlowConfig flow;
    flow.src = 1;
    flow.dst = 2;
    flow.rate_pps = 4.0;
    flow.payload_bytes = 512;
    flow.start_s = 5.0;
    flow.end_s = 45.0;
    cfg.flows = {flow};
    Simulation sim(cfg);
    sim.run();
    check_flow_conservation(sim);
  }
}

TEST_CASE("sweep rows are ordered by seed and reproducible") {
  ScenarioConfig cfg = load_scenario(kDir + "/sweep_chg.scn");
  cfg.sim_time_s = 45.0;
  cfg.flows[0].end_s = 40.0;
  SweepResult sweep = sweep_scenario(cfg, {1, 2, 3});
  REQUIRE(sweep.rows.size() == 3);
  CHECK(sweep.rows[0].seed == 1);
  CHECK(sweep.rows[1].seed == 2);
  CHECK(sweep.rows[2].seed == 3);

  SweepResult again = sweep_scenario(cfg, {1, 2, 3}, /*parallel=*/false);
  for (int i = 0; i < 3; ++i) {
    CHECK(report_csv_row(sweep.rows[i]) == report_csv_row(again.rows[i]));
  }
}

TEST_CASE("single-seed sweep aggregates collapse to the run itself") {
  ScenarioConfig cfg = load_scenario(kDir + "/sweep_chg.scn");
  cfg.sim_time_s = 45.0;
  cfg.flows[0].end_s = 40.0;
  SweepResult sweep = sweep_scenario(cfg, {1});
  REQUIRE(sweep.rows.size() == 1);

  std::ostringstream out;
  write_report_csv(out, sweep, true);
  std::string text = out.str();
  // median, min and max rows all carry the single run's values.
  std::string row = report_csv_row(sweep.rows[0]);
  std::string tail = row.substr(row.find(',', row.find(',') + 1) + 1);  // drop seed,mode
  int found = 0;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    for (const char* label : {"median,", "min,", "max,"}) {
      if (line.rfind(label, 0) == 0) {
        CHECK(line.substr(line.find(',', line.find(',') + 1) + 1) == tail);
        ++found;
      }
    }
  }
  CHECK(found == 3);
}

TEST_CASE("sweep csv round-trips and carries the config") {
  ScenarioConfig cfg = load_scenario(kDir + "/sweep_chg.scn");
  cfg.sim_time_s = 45.0;
  cfg.flows[0].end_s = 40.0;
  SweepResult sweep = sweep_scenario(cfg, {1, 2});

  std::ostringstream out;
  write_report_csv(out, sweep, true);
  std::istringstream in(out.str());
  SweepResult back = read_report_csv(in, "mem");
  REQUIRE(back.rows.size() == 2);
  for (int i = 0; i < 2; ++i) {
    CHECK(report_csv_row(back.rows[i]) == report_csv_row(sweep.rows[i]));
  }
  CHECK(back.config.canonical_items() == sweep.config.canonical_items());

  std::ostringstream out2;
  write_report_csv(out2, back, true);
  CHECK(out2.str() == out.str());
}

TEST_CASE("comparing a sweep with itself gives zero diffs and unit ratios") {
  ScenarioConfig cfg = load_scenario(kDir + "/sweep_chgw.scn");
  cfg.sim_time_s = 45.0;
  cfg.flows[0].end_s = 40.0;
  SweepResult sweep = sweep_scenario(cfg, {1, 2});
  auto rows = compare_sweeps(sweep, sweep);
  REQUIRE_FALSE(rows.empty());
  for (const ComparisonRow& row : rows) {
    if (row.diff) CHECK(*row.diff == 0.0);
    if (row.ratio) CHECK(*row.ratio == 1.0);
    if (row.a && row.b) CHECK(*row.a == *row.b);
  }
}

TEST_CASE("compare rejects mismatched seed sets and configs") {
  ScenarioConfig cfg = load_scenario(kDir + "/sweep_chgw.scn");
  cfg.sim_time_s = 45.0;
  cfg.flows[0].end_s = 40.0;
  SweepResult a = sweep_scenario(cfg, {1, 2});
  SweepResult b = sweep_scenario(cfg, {1, 3});
  CHECK_THROWS_WITH_AS(compare_sweeps(a, b), doctest::Contains("seed"),
                       std::runtime_error);

  SweepResult c = a;
  c.config.tx_range_m = 300.0;
  CHECK_THROWS_WITH_AS(compare_sweeps(a, c), doctest::Contains("tx_range"),
                       std::runtime_error);

  // Mode and pins may differ: that is the whole point of the comparison.
  SweepResult d = a;
  d.config.mode = ClusterMode::Chg;
  CHECK_NOTHROW(compare_sweeps(a, d));
}

TEST_CASE("snapshot observers do not perturb the metrics") {
  ScenarioConfig cfg = load_scenario(kDir + "/sweep_chg.scn");
  cfg.sim_time_s = 45.0;
  cfg.flows[0].end_s = 40.0;
  cfg.master_seed = 9;

  Simulation plain(cfg);
  RunReport without = plain.run();

  Simulation observed(cfg);
  int snapshots = 0;
  observed.set_snapshot_observer(from_seconds(10), from_seconds(5),
                                 [&](Simulation&, SimTime) { ++snapshots; });
  RunReport with = observed.run();

  CHECK(snapshots == 8);
  CHECK(report_csv_row(without) == report_csv_row(with));
}
