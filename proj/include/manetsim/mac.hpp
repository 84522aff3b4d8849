#ifndef MANETSIM_MAC_HPP
#define MANETSIM_MAC_HPP

#include <deque>
#include <functional>
#include <map>
#include <vector>

#include "manetsim/event_queue.hpp"
#include "manetsim/frame.hpp"
#include "manetsim/radio.hpp"
#include "manetsim/sim_time.hpp"

namespace manetsim {

enum class MacDropReason { QueueFull, RetryExhausted };

struct MacCounters {
  long enqueued = 0;
  long tx_attempts = 0;
  long delivered = 0;      // unicast frames decoded at their target
  long collisions = 0;     // addressed receptions lost to overlap
  long drops_retry = 0;
  long drops_queue = 0;
  long broadcast_tx = 0;

  MacCounters& operator+=(const MacCounters& other);
};

// Simplified 802.11 DCF.
//
// Carrier sense is per node against every audible transmission; backoff is
// slotted binary-exponential and freezes while the medium is busy. A fresh
// head-of-line frame transmits immediately when the medium has been idle
// beyond DIFS; otherwise a uniform draw from [0, cw] slots applies. Unicast
// acknowledgments are abstract: the sender learns the decode outcome at the
// end of the frame and schedules the timeout/retry path only on failure.
// Broadcasts are sent once, unacknowledged. There is no capture: any
// temporal overlap of transmissions audible at a receiver corrupts all of
// them there, and a node never decodes while transmitting.
class DcfMac {
 public:
  struct Params {
    SimTime slot = 20;
    SimTime difs = 50;
    int cw_min = 31;
    int cw_max = 1023;
    int retry_limit = 7;
    SimTime ack_timeout = 1000;
    int queue_capacity = 50;
  };

  using DeliverCallback = std::function<void(NodeId receiver, const Frame&, NodeId from)>;
  using LinkFailCallback = std::function<void(NodeId node, NodeId lost_next_hop)>;
  using TxStartCallback = std::function<void(NodeId node, const Frame&)>;
  using DropCallback = std::function<void(NodeId node, const Frame&, MacDropReason)>;
  using BackoffDraw = std::function<std::int64_t(std::int64_t lo, std::int64_t hi)>;

  DcfMac(Params params, EventQueue& engine, const RadioLink& radio, int node_count);

  // Backoff slot source; tests may substitute a scripted draw.
  void set_backoff_draw(BackoffDraw draw) { rng_draw_ = std::move(draw); }

  void set_deliver_callback(DeliverCallback cb) { deliver_cb_ = std::move(cb); }
  void set_link_fail_callback(LinkFailCallback cb) { link_fail_cb_ = std::move(cb); }
  void set_tx_start_callback(TxStartCallback cb) { tx_start_cb_ = std::move(cb); }
  void set_drop_callback(DropCallback cb) { drop_cb_ = std::move(cb); }

  // Appends a frame to the node's FIFO; false when the queue is full (the
  // frame is dropped and counted, not an error).
  bool enqueue(NodeId node, Frame frame);

  const MacCounters& counters(NodeId node) const { return nodes_[node].counters; }
  MacCounters totals() const;

  std::size_t queue_length(NodeId node) const { return nodes_[node].queue.size(); }
  int contention_window(NodeId node) const { return nodes_[node].cw; }
  int retry_count(NodeId node) const { return nodes_[node].retry_count; }
  bool medium_busy(NodeId node) const;

  // Frames still owned by the MAC (queued or on the air), oldest first.
  std::vector<Frame> pending_frames(NodeId node) const;

  // Frames decoded but not yet handed to the upper layer (propagation gap).
  std::vector<Frame> handoff_frames() const;

  const Params& params() const { return params_; }

 private:
  struct Transmission {
    std::uint64_t id;
    NodeId sender;
    SimTime start;
    SimTime end;
    Frame frame;
    std::vector<NodeId> audible;
  };

  struct NodeMac {
    std::deque<Frame> queue;
    int cw = 31;
    int retry_count = 0;
    int backoff_slots = -1;      // -1: no backoff pending
    EventHandle backoff_event;
    SimTime backoff_base = 0;    // countdown origin for the armed expiry
    bool transmitting = false;
    bool awaiting_ack = false;
    SimTime busy_until = 0;
    MacCounters counters;
  };

  void access(NodeId node);
  void transmit(NodeId node);
  void on_tx_end(NodeId node, std::uint64_t tx_id);
  void on_ack_timeout(NodeId node);
  void finish_frame(NodeId node);
  void channel_busy_onset(NodeId node, SimTime tx_start, SimTime tx_end);
  bool reception_corrupted(const Transmission& tx, NodeId receiver) const;
  void prune_registry();

  Params params_;
  EventQueue* engine_;
  const RadioLink* radio_;
  std::vector<NodeMac> nodes_;
  std::deque<Transmission> registry_;
  std::uint64_t next_tx_id_ = 1;
  std::map<std::uint64_t, Frame> handoffs_;
  std::uint64_t next_handoff_id_ = 1;

  DeliverCallback deliver_cb_;
  LinkFailCallback link_fail_cb_;
  TxStartCallback tx_start_cb_;
  DropCallback drop_cb_;
  BackoffDraw rng_draw_;
};

}  // namespace manetsim

#endif
