#ifndef MANETSIM_TRAFFIC_HPP
#define MANETSIM_TRAFFIC_HPP

#include <functional>
#include <optional>
#include <set>
#include <vector>

#include "manetsim/event_queue.hpp"
#include "manetsim/frame.hpp"
#include "manetsim/scenario.hpp"
#include "manetsim/sim_time.hpp"

namespace manetsim {

struct DeliverySample {
  std::uint32_t seq = 0;
  SimTime send_time = 0;
  SimTime recv_time = 0;
};

// Pure metric helpers over delivery samples.
// Mean end-to-end delay; unset when no packet arrived.
std::optional<double> end_to_end_delay_s(const std::vector<DeliverySample>& samples);
// Mean absolute difference of consecutive delays in seq order; losses pair
// the surviving neighbors. Unset below two samples.
std::optional<double> avg_jitter_s(std::vector<DeliverySample> samples);
// Delivered payload bits over (last arrival - flow start); 0 when nothing
// arrived.
double throughput_bps(const std::vector<DeliverySample>& samples, const CbrFlowConfig& flow);

// Constant-bit-rate sources plus per-flow delivery/drop accounting.
class CbrTraffic {
 public:
  struct FlowState {
    CbrFlowConfig cfg;
    long sent = 0;
    std::vector<DeliverySample> samples;
    std::set<std::uint32_t> seen;  // duplicate delivery suppression
    long drop_mac_retry = 0;
    long drop_mac_queue = 0;
    long drop_no_route = 0;
  };

  using SendData = std::function<void(NodeId src, const DataBody&)>;

  CbrTraffic(std::vector<CbrFlowConfig> flows, EventQueue& engine);

  void set_send(SendData cb) { send_ = std::move(cb); }

  // Schedules every flow's first packet; each send schedules the next.
  void start();

  void on_delivered(NodeId node, const DataBody& data);
  void on_mac_drop(const DataBody& data, bool queue_drop);
  void on_no_route_drop(const DataBody& data);

  const FlowState& flow(int index) const { return flows_[index]; }
  int flow_count() const { return static_cast<int>(flows_.size()); }

  long total_sent() const;
  long total_delivered() const;
  std::optional<double> mean_delay_s() const;
  std::optional<double> mean_jitter_s() const;
  double total_throughput_bps() const;

 private:
  void send_packet(int flow_index, std::uint32_t seq);

  EventQueue* engine_;
  std::vector<FlowState> flows_;
  SendData send_;
};

}  // namespace manetsim

#endif
