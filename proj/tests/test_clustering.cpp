#include <doctest.h>

#include <map>
#include <set>

#include "manetsim/simulation.hpp"
#include "test_support.hpp"

using namespace manetsim;
using namespace manetsim::test;

namespace {

StaticGraph chain5() {
  StaticGraph g;
  g.n = 5;
  g.pos.assign(6, Point{});
  for (int i = 1; i <= 5; ++i) g.pos[i] = Point{200.0 * (i - 1), 0.0};
  return g;  // adjacent-only links at 200 m spacing, range 250
}

StaticGraph clique5() {
  StaticGraph g;
  g.n = 5;
  g.pos.assign(6, Point{});
  g.pos[1] = {0, 0};
  g.pos[2] = {50, 0};
  g.pos[3] = {0, 50};
  g.pos[4] = {50, 50};
  g.pos[5] = {25, 25};
  return g;
}

StaticGraph bridged_triangles() {
  StaticGraph g;
  g.n = 6;
  g.pos.assign(7, Point{});
  g.pos[1] = {0, 0};
  g.pos[2] = {240, 0};
  g.pos[3] = {120, 200};
  g.pos[4] = {120, 440};
  g.pos[5] = {0, 640};
  g.pos[6] = {240, 640};
  return g;  // single bridge 3-4
}

// Runs formation to quiescence and returns the simulation for inspection.
std::unique_ptr<Simulation> settle(const StaticGraph& graph, ClusterMode mode,
                                   double sim_time_s = 30.0, std::uint64_t seed = 1) {
  auto cfg = static_scenario(graph, mode, sim_time_s, seed);
  auto sim = std::make_unique<Simulation>(cfg);
  sim->run();
  return sim;
}

void check_matches_oracle(Simulation& sim, const StaticGraph& graph, ClusterMode mode) {
  OracleRoles oracle = cluster_oracle(graph, mode);
  for (int u = 1; u <= graph.n; ++u) {
    INFO("node ", u);
    CHECK(sim.clustering().role(u) == oracle.role[u]);
    CHECK(sim.clustering().cluster_id(u) == oracle.cluster[u]);
  }
}

}  // namespace

TEST_CASE("chain 1..5 elects heads 1,3,5 and gateways 2,4") {
  StaticGraph g = chain5();
  auto sim = settle(g, ClusterMode::ChAndGateway);
  CHECK(sim->clustering().role(1) == ClusterRoleKind::ClusterHead);
  CHECK(sim->clustering().role(2) == ClusterRoleKind::Gateway);
  CHECK(sim->clustering().role(3) == ClusterRoleKind::ClusterHead);
  CHECK(sim->clustering().role(4) == ClusterRoleKind::Gateway);
  CHECK(sim->clustering().role(5) == ClusterRoleKind::ClusterHead);
  CHECK(sim->clustering().cluster_id(2) == 1);
  CHECK(sim->clustering().cluster_id(4) == 3);
  check_matches_oracle(*sim, g, ClusterMode::ChAndGateway);
}

TEST_CASE("fully connected 1..5 forms a single cluster under head 1") {
  StaticGraph g = clique5();
  auto sim = settle(g, ClusterMode::ChAndGateway);
  CHECK(sim->clustering().role(1) == ClusterRoleKind::ClusterHead);
  for (int u = 2; u <= 5; ++u) {
    CHECK(sim->clustering().role(u) == ClusterRoleKind::Ordinary);
    CHECK(sim->clustering().cluster_id(u) == 1);
  }
}

TEST_CASE("isolated node becomes its own head") {
  StaticGraph g;
  g.n = 1;
  g.pos.assign(2, Point{});
  g.pos[1] = {10, 10};
  auto sim = settle(g, ClusterMode::ChAndGateway, 10.0);
  CHECK(sim->clustering().role(1) == ClusterRoleKind::ClusterHead);
  CHECK(sim->clustering().cluster_id(1) == 1);

  auto chg = settle(g, ClusterMode::Chg, 10.0);
  CHECK(chg->clustering().role(1) == ClusterRoleKind::ClusterHeadGateway);
}

TEST_CASE("bridged triangles: CHG roles land on the bridge endpoints") {
  StaticGraph g = bridged_triangles();
  auto sim = settle(g, ClusterMode::Chg);
  CHECK(sim->clustering().role(3) == ClusterRoleKind::ClusterHeadGateway);
  CHECK(sim->clustering().role(4) == ClusterRoleKind::ClusterHeadGateway);
  CHECK(sim->clustering().cluster_id(1) == 3);
  CHECK(sim->clustering().cluster_id(2) == 3);
  CHECK(sim->clustering().cluster_id(5) == 4);
  CHECK(sim->clustering().cluster_id(6) == 4);
  CHECK(sim->clustering().role(1) == ClusterRoleKind::Ordinary);
  check_matches_oracle(*sim, g, ClusterMode::Chg);
}

TEST_CASE("chain in chg mode: backbone shrinks against ch_g") {
  StaticGraph g = chain5();
  auto chg = settle(g, ClusterMode::Chg);
  auto chgw = settle(g, ClusterMode::ChAndGateway);
  CHECK(chg->clustering().backbone_size() <= chgw->clustering().backbone_size());
  check_matches_oracle(*chg, g, ClusterMode::Chg);
}

TEST_CASE("election matches the brute-force oracle on random graphs") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    StaticGraph g = random_connected_graph(seed, 4, 12);
    for (ClusterMode mode : {ClusterMode::ChAndGateway, ClusterMode::Chg}) {
      auto sim = settle(g, mode, 40.0, seed);
      INFO("graph seed ", seed, " mode ", cluster_mode_name(mode));
      check_matches_oracle(*sim, g, mode);
    }
  }
}

TEST_CASE("pinned roles fix the backbone without election") {
  ScenarioConfig cfg;
  cfg.node_count = 30;
  cfg.sim_time_s = 20.0;
  cfg.mobility_start_s = 10.0;
  cfg.master_seed = 5;
  cfg.flows.clear();

  SUBCASE("ch_g pins 6,15 heads and 18,30 gateways") {
    cfg.mode = ClusterMode::ChAndGateway;
    cfg.pinned_roles = {{6, PinnedRole::Head},
                        {15, PinnedRole::Head},
                        {18, PinnedRole::Gateway},
                        {30, PinnedRole::Gateway}};
    Simulation sim(cfg);
    sim.run();
    std::set<NodeId> backbone;
    for (NodeId id = 1; id <= 30; ++id) {
      if (sim.clustering().is_backbone(id)) backbone.insert(id);
    }
    CHECK(backbone == std::set<NodeId>{6, 15, 18, 30});
    CHECK(sim.clustering().backbone_size() == 4);
  }

  SUBCASE("chg pins 15 and 30") {
    cfg.mode = ClusterMode::Chg;
    cfg.pinned_roles = {{15, PinnedRole::Chg}, {30, PinnedRole::Chg}};
    Simulation sim(cfg);
    sim.run();
    std::set<NodeId> backbone;
    for (NodeId id = 1; id <= 30; ++id) {
      if (sim.clustering().is_backbone(id)) backbone.insert(id);
    }
    CHECK(backbone == std::set<NodeId>{15, 30});
  }
}

TEST_CASE("transient beacon loss does not flip roles") {
  // Two clusters: nodes 1,2 and 3,4 with 2-3 as the only cross link.
  StaticGraph g;
  g.n = 4;
  g.pos.assign(5, Point{});
  g.pos[1] = {0, 0};
  g.pos[2] = {200, 0};
  g.pos[3] = {400, 0};
  g.pos[4] = {600, 0};
  auto cfg = static_scenario(g, ClusterMode::ChAndGateway, 30.0, 3);
  Simulation sim(cfg);

  // After stabilization, role flips would have to survive the stability
  // window; a single missed beacon (interval 1 s < window 2 s) cannot.
  long changes_at_20 = -1;
  sim.set_snapshot_observer(from_seconds(20), from_seconds(5),
                            [&](Simulation& s, SimTime t) {
                              if (t == from_seconds(20)) {
                                changes_at_20 = s.clustering().role_change_count();
                              } else {
                                CHECK(s.clustering().role_change_count() == changes_at_20);
                              }
                            });
  sim.run();
  CHECK(changes_at_20 >= 0);
}

TEST_CASE("member rejoins another head after losing its own") {
  // 2 sits between heads 1 and 3 (which cannot hear each other); when head 1
  // disappears, the neighbor timeout sends 2 to the remaining head.
  StaticGraph g;
  g.n = 3;
  g.pos.assign(4, Point{});
  g.pos[1] = {0, 0};
  g.pos[2] = {200, 0};
  g.pos[3] = {400, 0};
  auto cfg = static_scenario(g, ClusterMode::ChAndGateway, 30.0, 6);
  Simulation sim(cfg);
  sim.engine().schedule(from_seconds(15.0), EventKind::LinkCheck, kEngineGlobal, [&] {
    REQUIRE(sim.clustering().role(2) == ClusterRoleKind::Gateway);  // hears cluster 3
    REQUIRE(sim.clustering().cluster_id(2) == 1);
    sim.mobility().pin(1, Point{5000, 5000});
  });
  sim.run();
  CHECK(sim.clustering().cluster_id(2) == 3);
  CHECK(sim.clustering().role(3) == ClusterRoleKind::ClusterHead);
}

TEST_CASE("static idle network: control traffic is exactly the beacon grid") {
  // Formation, classification and promotion all ride scheduled beacons, so
  // with no data traffic control_tx = node_count * floor(T / interval).
  StaticGraph g = bridged_triangles();
  for (ClusterMode mode : {ClusterMode::ChAndGateway, ClusterMode::Chg}) {
    auto cfg = static_scenario(g, mode, 50.0, 8);
    Simulation sim(cfg);
    RunReport report = sim.run();
    CHECK(report.control_tx == 6 * 50);
    CHECK(sim.control().beacon_tx == 6 * 50);
    CHECK(sim.control().rreq_tx == 0);
    CHECK(sim.control().rerr_tx == 0);
  }
}

TEST_CASE("mobile churn keeps role bookkeeping consistent") {
  ScenarioConfig cfg;
  cfg.node_count = 20;
  cfg.sim_time_s = 60.0;
  cfg.mobility_start_s = 5.0;
  cfg.speed_max_mps = 10.0;
  cfg.master_seed = 11;
  cfg.flows.clear();

  for (ClusterMode mode : {ClusterMode::ChAndGateway, ClusterMode::Chg}) {
    cfg.mode = mode;
    Simulation sim(cfg);
    sim.set_snapshot_observer(from_seconds(10), from_seconds(2), [&](Simulation& s, SimTime) {
      for (NodeId id = 1; id <= cfg.node_count; ++id) {
        ClusterRoleKind kind = s.clustering().role(id);
        NodeId cluster = s.clustering().cluster_id(id);
        CHECK(cluster != 0);
        if (kind == ClusterRoleKind::ClusterHead ||
            kind == ClusterRoleKind::ClusterHeadGateway) {
          CHECK(cluster == id);
        }
        if (mode == ClusterMode::Chg) {
          CHECK(kind != ClusterRoleKind::Gateway);
          CHECK(kind != ClusterRoleKind::ClusterHead);
        } else {
          CHECK(kind != ClusterRoleKind::ClusterHeadGateway);
        }
      }
    });
    sim.run();
  }
}
