#ifndef MANETSIM_AODV_HPP
#define MANETSIM_AODV_HPP

#include <deque>
#include <functional>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "manetsim/event_queue.hpp"
#include "manetsim/frame.hpp"
#include "manetsim/scenario.hpp"
#include "manetsim/sim_time.hpp"

namespace manetsim {

struct RouteEntry {
  NodeId next_hop = 0;
  int hop_count = 0;
  std::uint32_t dest_seq = 0;
  bool seq_known = false;
  SimTime lifetime = 0;
  bool valid = false;
  std::set<NodeId> precursors;
};

struct AodvCounters {
  long rreq_originated = 0;
  long rreq_forwarded = 0;
  long rrep_generated = 0;
  long suppressed_forwards = 0;
  long rrep_discarded = 0;   // no reverse route
  long no_route_drops = 0;   // buffered/relayed data given up on
};

// AODV on-demand routing with duplicate-suppressed request flooding.
//
// Under the backbone policy only cluster heads, gateways and CHGs
// rebroadcast route requests; everyone else records the request, installs
// the reverse route, and suppresses the forward. Forwards are delayed by a
// short jitter during which better (shorter) copies of the same request can
// still lower the carried hop count, so discovered routes settle on
// shortest paths instead of first-arrival races.
class AodvProtocol {
 public:
  struct Params {
    FloodingPolicy flooding = FloodingPolicy::Backbone;
    SimTime active_route_timeout = from_seconds(3.0);
    int rreq_retries = 2;
    // 2 * node traversal time (40 ms) * net diameter (35)
    SimTime net_traversal_time = from_millis(2800);
    SimTime forward_jitter_min = from_millis(4);
    SimTime forward_jitter_max = from_millis(12);
    int buffer_capacity = 64;
  };

  using SendFrame = std::function<void(NodeId node, Frame frame)>;
  using IsBackbone = std::function<bool(NodeId node)>;
  using DeliverApp = std::function<void(NodeId node, const DataBody&)>;
  using DataDropped = std::function<void(const DataBody&)>;
  using JitterDraw = std::function<std::int64_t(std::int64_t lo, std::int64_t hi)>;

  AodvProtocol(Params params, EventQueue& engine, int node_count);

  void set_send_frame(SendFrame cb) { send_frame_ = std::move(cb); }
  void set_is_backbone(IsBackbone cb) { is_backbone_ = std::move(cb); }
  void set_deliver_app(DeliverApp cb) { deliver_app_ = std::move(cb); }
  void set_data_dropped(DataDropped cb) { data_dropped_ = std::move(cb); }
  void set_jitter_draw(JitterDraw cb) { jitter_draw_ = std::move(cb); }

  // Application-originated packet: routes it or buffers it behind discovery.
  void send_data(NodeId src, const DataBody& data);

  void on_data(NodeId node, const DataBody& data, NodeId from);
  void on_rreq(NodeId node, const RreqBody& body, NodeId from);
  void on_rrep(NodeId node, const RrepBody& body, NodeId from);
  void on_rerr(NodeId node, const RerrBody& body, NodeId from);

  // MAC retry exhaustion or neighbor timeout toward `lost_next_hop`.
  void on_link_failure(NodeId node, NodeId lost_next_hop);

  void on_tick();  // route expiry + request-cache pruning

  // Valid unexpired next hop, or 0.
  NodeId route_lookup(NodeId node, NodeId dest) const;
  const RouteEntry* route(NodeId node, NodeId dest) const;
  const std::map<NodeId, RouteEntry>& route_table(NodeId node) const {
    return nodes_[node].routes;
  }

  const AodvCounters& counters() const { return counters_; }
  long buffered_count() const;
  std::vector<DataBody> buffered_packets() const;

 private:
  struct Discovery {
    std::uint32_t rreq_id = 0;
    int attempt = 0;
    EventHandle timer;
    std::deque<DataBody> buffer;
  };
  struct SeenRreq {
    SimTime first_seen = 0;
    int best_hop = 0;
    bool forward_scheduled = false;
    bool forwarded = false;
    EventHandle forward_event;
    RreqBody pending;      // forwarded copy; hop_count tracks the best seen
    bool replied = false;  // destination-side
    int replied_hop = 0;
  };
  struct NodeAodv {
    std::uint32_t own_seq = 0;
    std::uint32_t next_rreq_id = 0;
    std::map<NodeId, RouteEntry> routes;
    std::map<NodeId, Discovery> pending;
    std::map<std::pair<NodeId, std::uint32_t>, SeenRreq> seen;
  };

  void originate_rreq(NodeId node, NodeId dest);
  void on_discovery_timeout(NodeId node, NodeId dest);
  void flush_buffer(NodeId node, NodeId dest);
  void fail_discovery(NodeId node, NodeId dest);
  void forward_rreq(NodeId node, std::pair<NodeId, std::uint32_t> key);
  void generate_rrep(NodeId node, const RreqBody& rreq);
  bool install_route(NodeId node, NodeId dest, NodeId next_hop, int hop_count,
                     std::uint32_t seq, bool seq_known);
  void refresh_route(NodeId node, NodeId dest);
  void transmit_data(NodeId node, const DataBody& data, NodeId next_hop);
  void send_rerr(NodeId node, std::vector<std::pair<NodeId, std::uint32_t>> unreachable);

  Params params_;
  EventQueue* engine_;
  std::vector<NodeAodv> nodes_;
  AodvCounters counters_;

  SendFrame send_frame_;
  IsBackbone is_backbone_;
  DeliverApp deliver_app_;
  DataDropped data_dropped_;
  JitterDraw jitter_draw_;
};

}  // namespace manetsim

#endif
