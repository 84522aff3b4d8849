#include <doctest.h>

#include <vector>

#include "manetsim/report.hpp"
#include "manetsim/traffic.hpp"

using namespace manetsim;

namespace {

DeliverySample sample(std::uint32_t seq, double send_s, double delay_ms) {
  DeliverySample s;
  s.seq = seq;
  s.send_time = from_seconds(send_s);
  s.recv_time = s.send_time + from_millis(static_cast<std::int64_t>(delay_ms));
  return s;
}

}  // namespace

TEST_CASE("mean end-to-end delay") {
  std::vector<DeliverySample> constant = {sample(0, 1.0, 10), sample(1, 1.25, 10),
                                          sample(2, 1.5, 10)};
  CHECK(*end_to_end_delay_s(constant) == doctest::Approx(0.010));

  std::vector<DeliverySample> two = {sample(0, 1.0, 10), sample(1, 1.25, 20)};
  CHECK(*end_to_end_delay_s(two) == doctest::Approx(0.015));

  CHECK_FALSE(end_to_end_delay_s({}).has_value());
}

TEST_CASE("average jitter over consecutive delays") {
  std::vector<DeliverySample> constant = {sample(0, 1.0, 10), sample(1, 1.25, 10),
                                          sample(2, 1.5, 10)};
  CHECK(*avg_jitter_s(constant) == 0.0);

  std::vector<DeliverySample> wave = {sample(0, 1.0, 10), sample(1, 1.25, 20),
                                      sample(2, 1.5, 10)};
  CHECK(*avg_jitter_s(wave) == doctest::Approx(0.010));

  CHECK_FALSE(avg_jitter_s({sample(0, 1.0, 10)}).has_value());
}

TEST_CASE("constant-delay jitter is zero regardless of the delay value") {
  for (double delay_ms : {1.0, 25.0, 400.0}) {
    std::vector<DeliverySample> samples;
    for (std::uint32_t seq = 0; seq < 20; ++seq) {
      samples.push_back(sample(seq, 1.0 + 0.25 * seq, delay_ms));
    }
    CHECK(*avg_jitter_s(samples) == 0.0);
  }
}

TEST_CASE("losses pair the surviving samples in seq order") {
  // seq 1 lost; the 20 ms value pairs against both survivors.
  std::vector<DeliverySample> gappy = {sample(0, 1.0, 10), sample(2, 1.5, 30),
                                       sample(3, 1.75, 10)};
  CHECK(*avg_jitter_s(gappy) == doctest::Approx(0.020));
  // Arrival order must not matter, only seq order.
  std::vector<DeliverySample> shuffled = {gappy[2], gappy[0], gappy[1]};
  CHECK(*avg_jitter_s(shuffled) == doctest::Approx(0.020));
}

TEST_CASE("throughput over the delivery window") {
  CbrFlowConfig flow;
  flow.payload_bytes = 512;
  flow.start_s = 15.0;

  std::vector<DeliverySample> samples;
  for (std::uint32_t seq = 0; seq < 1120; ++seq) {
    samples.push_back(sample(seq, 15.0 + 0.25 * seq, 10));
  }
  // 1120 * 4096 bits over ~279.76 s.
  CHECK(throughput_bps(samples, flow) == doctest::Approx(16384.0).epsilon(0.01));
  CHECK(throughput_bps({}, flow) == 0.0);
  // Conservation bound: never above rate * payload bits.
  CHECK(throughput_bps(samples, flow) <= 4.0 * 512 * 8 * 1.01);
}

TEST_CASE("cbr generator emits on the exact grid") {
  EventQueue engine;
  CbrFlowConfig flow;
  flow.src = 1;
  flow.dst = 2;
  flow.rate_pps = 4.0;
  flow.payload_bytes = 512;
  flow.start_s = 15.0;
  flow.end_s = 295.0;
  CbrTraffic traffic({flow}, engine);
  std::vector<SimTime> sends;
  traffic.set_send([&](NodeId, const DataBody& data) {
    sends.push_back(data.sent_at);
    CHECK(data.seq == sends.size() - 1);
  });
  traffic.start();
  engine.run_until(from_seconds(300.0));

  REQUIRE(sends.size() == 1120);
  CHECK(sends.front() == from_seconds(15.0));
  CHECK(sends[1] == from_seconds(15.25));
  CHECK(sends.back() == from_seconds(294.75));
  CHECK(traffic.flow(0).sent == 1120);
}

TEST_CASE("flow spanning exactly one period sends exactly one packet") {
  EventQueue engine;
  CbrFlowConfig flow;
  flow.src = 1;
  flow.dst = 2;
  flow.rate_pps = 4.0;
  flow.start_s = 10.0;
  flow.end_s = 10.25;
  CbrTraffic traffic({flow}, engine);
  int sends = 0;
  traffic.set_send([&](NodeId, const DataBody&) { ++sends; });
  traffic.start();
  engine.run_until(from_seconds(20.0));
  CHECK(sends == 1);
}

TEST_CASE("duplicate deliveries are suppressed by seq") {
  EventQueue engine;
  CbrFlowConfig flow;
  flow.src = 1;
  flow.dst = 2;
  CbrTraffic traffic({flow}, engine);
  DataBody data;
  data.flow_index = 0;
  data.seq = 7;
  data.sent_at = from_seconds(1.0);
  engine.run_until(from_seconds(2.0));
  traffic.on_delivered(2, data);
  traffic.on_delivered(2, data);
  CHECK(traffic.flow(0).samples.size() == 1);
}

TEST_CASE("report rows round-trip exactly, NA included") {
  RunReport r;
  r.seed = 17;
  r.mode = "chg";
  r.sent = 1120;
  r.delivered = 1087;
  r.e2e_delay_ms = 12.3456789;
  r.jitter_ms = std::nullopt;
  r.mac_drops = 33;
  r.control_tx = 9310;
  r.suppressed_forwards = 141;
  r.throughput_bps = 16301.127;

  std::string row = report_csv_row(r);
  RunReport back = parse_report_row(row);
  CHECK(report_csv_row(back) == row);
  CHECK_FALSE(back.jitter_ms.has_value());
  CHECK(*back.e2e_delay_ms == *r.e2e_delay_ms);
}

TEST_CASE("aggregates skip NA values") {
  Aggregate agg = aggregate_values({1.0, std::nullopt, 3.0, 2.0});
  CHECK(*agg.median == 2.0);
  CHECK(*agg.min == 1.0);
  CHECK(*agg.max == 3.0);
  CHECK_FALSE(aggregate_values({std::nullopt}).median.has_value());
  CHECK(*median_of({4.0, 1.0, 3.0, 2.0}) == 2.5);
}
