#include <doctest.h>

#include <algorithm>

#include "manetsim/radio.hpp"

using namespace manetsim;

namespace {

RandomWaypointMobility make_static(int n) {
  RandomWaypointMobility::Params p;
  p.terrain = Terrain{1500.0, 1500.0};
  p.start_time = from_seconds(1e9);
  return RandomWaypointMobility(p, n);
}

}  // namespace

TEST_CASE("in_range boundary behaviour") {
  auto mob = make_static(3);
  mob.set_initial_position(1, Point{0, 0});
  mob.set_initial_position(2, Point{0, 0});
  mob.set_initial_position(3, Point{250.001, 0});
  RadioLink radio(RadioParams{}, mob);

  CHECK(radio.in_range(1, 2, 0));        // distance 0
  CHECK_FALSE(radio.in_range(1, 3, 0));  // just past the range
  CHECK_THROWS(radio.in_range(1, 1, 0));
}

TEST_CASE("in_range is symmetric") {
  auto mob = make_static(8);
  RngStream rng(17, "placement");
  for (NodeId id = 1; id <= 8; ++id) {
    mob.set_initial_position(id, Point{rng.uniform(0, 1500), rng.uniform(0, 1500)});
  }
  RadioLink radio(RadioParams{}, mob);
  for (NodeId a = 1; a <= 8; ++a) {
    for (NodeId b = 1; b <= 8; ++b) {
      if (a == b) continue;
      CHECK(radio.in_range(a, b, 0) == radio.in_range(b, a, 0));
    }
  }
}

TEST_CASE("collinear spacing at 0.6 range: middle hears both ends") {
  auto mob = make_static(3);
  mob.set_initial_position(1, Point{0, 0});
  mob.set_initial_position(2, Point{150, 0});
  mob.set_initial_position(3, Point{300, 0});
  RadioLink radio(RadioParams{}, mob);

  CHECK(radio.receivers_of(2, 0) == std::vector<NodeId>{1, 3});
  CHECK(radio.receivers_of(1, 0) == std::vector<NodeId>{2});
  CHECK(radio.receivers_of(3, 0) == std::vector<NodeId>{2});
}

TEST_CASE("isolated node has no receivers") {
  auto mob = make_static(2);
  mob.set_initial_position(1, Point{0, 0});
  mob.set_initial_position(2, Point{1400, 1400});
  RadioLink radio(RadioParams{}, mob);
  CHECK(radio.receivers_of(1, 0).empty());
}

TEST_CASE("receivers_of equals the brute-force pairwise filter") {
  auto mob = make_static(30);
  RngStream rng(23, "placement");
  for (NodeId id = 1; id <= 30; ++id) {
    mob.set_initial_position(id, Point{rng.uniform(0, 1500), rng.uniform(0, 1500)});
  }
  RadioLink radio(RadioParams{}, mob);
  for (NodeId sender = 1; sender <= 30; ++sender) {
    std::vector<NodeId> expected;
    for (NodeId other = 1; other <= 30; ++other) {
      if (other == sender) continue;
      if (distance(mob.position_at(sender, 0), mob.position_at(other, 0)) <= 250.0) {
        expected.push_back(other);
      }
    }
    CHECK(radio.receivers_of(sender, 0) == expected);
  }
}

TEST_CASE("airtime of a 512-byte payload at 2 Mb/s is 2.28 ms") {
  auto mob = make_static(2);
  RadioLink radio(RadioParams{}, mob);
  Frame frame;
  frame.kind = FrameKind::Data;
  DataBody data;
  data.payload_bytes = 512;
  frame.body = data;
  // 512 + 58 header bytes = 4560 bits at 2 Mb/s.
  CHECK(radio.airtime(frame) == 2280);
}

TEST_CASE("empty frames cannot be put on the air") {
  auto mob = make_static(2);
  RadioLink radio(RadioParams{}, mob);
  Frame frame;
  frame.kind = FrameKind::Data;
  DataBody body;
  body.payload_bytes = -kHeaderBytes;  // degenerate size
  frame.body = body;
  CHECK_THROWS(radio.airtime(frame));
}

TEST_CASE("airtime grows strictly with payload") {
  auto mob = make_static(2);
  RadioLink radio(RadioParams{}, mob);
  Frame small;
  DataBody body;
  body.payload_bytes = 256;
  small.body = body;
  Frame big;
  body.payload_bytes = 512;
  big.body = body;
  CHECK(radio.airtime(big) > radio.airtime(small));
}

TEST_CASE("frames always carry their headers") {
  Frame beacon;
  beacon.kind = FrameKind::Beacon;
  beacon.body = BeaconBody{};
  CHECK(beacon.size_bytes() == 16 + kHeaderBytes);
  Frame rreq;
  rreq.kind = FrameKind::Rreq;
  rreq.body = RreqBody{};
  CHECK(rreq.size_bytes() == 24 + kHeaderBytes);
}
