#include "manetsim/traffic.hpp"

#include <algorithm>
#include <cmath>

namespace manetsim {

std::optional<double> end_to_end_delay_s(const std::vector<DeliverySample>& samples) {
  if (samples.empty()) return std::nullopt;
  double sum = 0.0;
  for (const DeliverySample& s : samples) sum += to_seconds(s.recv_time - s.send_time);
  return sum / static_cast<double>(samples.size());
}

std::optional<double> avg_jitter_s(std::vector<DeliverySample> samples) {
  if (samples.size() < 2) return std::nullopt;
  std::sort(samples.begin(), samples.end(),
            [](const DeliverySample& a, const DeliverySample& b) { return a.seq < b.seq; });
  double sum = 0.0;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    double prev = to_seconds(samples[i - 1].recv_time - samples[i - 1].send_time);
    double cur = to_seconds(samples[i].recv_time - samples[i].send_time);
    sum += std::abs(cur - prev);
  }
  return sum / static_cast<double>(samples.size() - 1);
}

double throughput_bps(const std::vector<DeliverySample>& samples, const CbrFlowConfig& flow) {
  if (samples.empty()) return 0.0;
  SimTime last = 0;
  for (const DeliverySample& s : samples) last = std::max(last, s.recv_time);
  double window = to_seconds(last - from_seconds(flow.start_s));
  if (window <= 0.0) return 0.0;
  double bits = 8.0 * static_cast<double>(flow.payload_bytes) *
                static_cast<double>(samples.size());
  return bits / window;
}

CbrTraffic::CbrTraffic(std::vector<CbrFlowConfig> flows, EventQueue& engine)
    : engine_(&engine) {
  flows_.reserve(flows.size());
  for (CbrFlowConfig& cfg : flows) {
    FlowState state;
    state.cfg = cfg;
    flows_.push_back(std::move(state));
  }
}

void CbrTraffic::start() {
  for (int i = 0; i < flow_count(); ++i) {
    SimTime first = from_seconds(flows_[i].cfg.start_s);
    engine_->schedule(first, EventKind::TrafficSend, flows_[i].cfg.src,
                      [this, i] { send_packet(i, 0); });
  }
}

void CbrTraffic::send_packet(int flow_index, std::uint32_t seq) {
  FlowState& flow = flows_[flow_index];
  SimTime now = engine_->now();

  DataBody data;
  data.flow_src = flow.cfg.src;
  data.flow_dst = flow.cfg.dst;
  data.flow_index = flow_index;
  data.seq = seq;
  data.sent_at = now;
  data.payload_bytes = flow.cfg.payload_bytes;
  ++flow.sent;
  if (send_) send_(flow.cfg.src, data);

  SimTime period = from_seconds(1.0 / flow.cfg.rate_pps);
  SimTime next = now + period;
  if (next < from_seconds(flow.cfg.end_s)) {
    engine_->schedule(next, EventKind::TrafficSend, flow.cfg.src,
                      [this, flow_index, seq] { send_packet(flow_index, seq + 1); });
  }
}

void CbrTraffic::on_delivered(NodeId node, const DataBody& data) {
  (void)node;
  FlowState& flow = flows_[data.flow_index];
  if (!flow.seen.insert(data.seq).second) return;  // duplicate
  DeliverySample sample;
  sample.seq = data.seq;
  sample.send_time = data.sent_at;
  sample.recv_time = engine_->now();
  flow.samples.push_back(sample);
}

void CbrTraffic::on_mac_drop(const DataBody& data, bool queue_drop) {
  FlowState& flow = flows_[data.flow_index];
  if (queue_drop) {
    ++flow.drop_mac_queue;
  } else {
    ++flow.drop_mac_retry;
  }
}

void CbrTraffic::on_no_route_drop(const DataBody& data) {
  ++flows_[data.flow_index].drop_no_route;
}

long CbrTraffic::total_sent() const {
  long total = 0;
  for (const FlowState& flow : flows_) total += flow.sent;
  return total;
}

long CbrTraffic::total_delivered() const {
  long total = 0;
  for (const FlowState& flow : flows_) total += static_cast<long>(flow.samples.size());
  return total;
}

std::optional<double> CbrTraffic::mean_delay_s() const {
  double sum = 0.0;
  long count = 0;
  for (const FlowState& flow : flows_) {
    for (const DeliverySample& s : flow.samples) {
      sum += to_seconds(s.recv_time - s.send_time);
      ++count;
    }
  }
  if (count == 0) return std::nullopt;
  return sum / static_cast<double>(count);
}

std::optional<double> CbrTraffic::mean_jitter_s() const {
  // Consecutive-delay differences pooled across flows.
  double sum = 0.0;
  long pairs = 0;
  for (const FlowState& flow : flows_) {
    std::vector<DeliverySample> samples = flow.samples;
    if (samples.size() < 2) continue;
    std::sort(samples.begin(), samples.end(),
              [](const DeliverySample& a, const DeliverySample& b) { return a.seq < b.seq; });
    for (std::size_t i = 1; i < samples.size(); ++i) {
      double prev = to_seconds(samples[i - 1].recv_time - samples[i - 1].send_time);
      double cur = to_seconds(samples[i].recv_time - samples[i].send_time);
      sum += std::abs(cur - prev);
      ++pairs;
    }
  }
  if (pairs == 0) return std::nullopt;
  return sum / static_cast<double>(pairs);
}

double CbrTraffic::total_throughput_bps() const {
  double total = 0.0;
  for (const FlowState& flow : flows_) total += throughput_bps(flow.samples, flow.cfg);
  return total;
}

}  // namespace manetsim
