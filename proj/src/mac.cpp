#include "manetsim/mac.hpp"

#include <algorithm>

namespace manetsim {

MacCounters& MacCounters::operator+=(const MacCounters& other) {
  enqueued += other.enqueued;
  tx_attempts += other.tx_attempts;
  delivered += other.delivered;
  collisions += other.collisions;
  drops_retry += other.drops_retry;
  drops_queue += other.drops_queue;
  broadcast_tx += other.broadcast_tx;
  return *this;
}

DcfMac::DcfMac(Params params, EventQueue& engine, const RadioLink& radio, int node_count)
    : params_(params),
      engine_(&engine),
      radio_(&radio),
      nodes_(static_cast<std::size_t>(node_count) + 1) {
  for (auto& node : nodes_) node.cw = params_.cw_min;
}

MacCounters DcfMac::totals() const {
  MacCounters sum;
  for (const auto& node : nodes_) sum += node.counters;
  return sum;
}

bool DcfMac::medium_busy(NodeId node) const {
  return engine_->now() < nodes_[node].busy_until;
}

std::vector<Frame> DcfMac::pending_frames(NodeId node) const {
  return {nodes_[node].queue.begin(), nodes_[node].queue.end()};
}

std::vector<Frame> DcfMac::handoff_frames() const {
  std::vector<Frame> out;
  out.reserve(handoffs_.size());
  for (const auto& [id, frame] : handoffs_) out.push_back(frame);
  return out;
}

bool DcfMac::enqueue(NodeId node, Frame frame) {
  NodeMac& mac = nodes_[node];
  ++mac.counters.enqueued;
  if (mac.queue.size() >= static_cast<std::size_t>(params_.queue_capacity)) {
    ++mac.counters.drops_queue;
    if (drop_cb_) drop_cb_(node, frame, MacDropReason::QueueFull);
    return false;
  }
  mac.queue.push_back(std::move(frame));
  if (mac.queue.size() == 1 && !mac.transmitting && !mac.awaiting_ack) access(node);
  return true;
}

void DcfMac::access(NodeId node) {
  NodeMac& mac = nodes_[node];
  if (mac.queue.empty() || mac.transmitting || mac.awaiting_ack) return;
  if (mac.backoff_event.valid()) return;  // countdown already armed

  SimTime now = engine_->now();
  if (now < mac.busy_until) {
    // Busy: draw (or keep) the backoff and wait for the idle notification.
    if (mac.backoff_slots < 0) {
      mac.backoff_slots =
          static_cast<int>(rng_draw_ ? rng_draw_(0, mac.cw) : 0);
    }
    return;
  }

  SimTime idle_since = mac.busy_until;
  if (mac.backoff_slots < 0) {
    if (now >= idle_since + params_.difs) {
      // Medium idle beyond DIFS: immediate transmission.
      transmit(node);
      return;
    }
    mac.backoff_slots = static_cast<int>(rng_draw_ ? rng_draw_(0, mac.cw) : 0);
  }
  SimTime base = std::max(now, idle_since + params_.difs);
  SimTime expiry = base + static_cast<SimTime>(mac.backoff_slots) * params_.slot;
  mac.backoff_base = base;
  mac.backoff_event = engine_->schedule(expiry, EventKind::BackoffExpiry, node, [this, node] {
    NodeMac& m = nodes_[node];
    m.backoff_event = EventHandle{};
    m.backoff_slots = -1;
    transmit(node);
  });
}

void DcfMac::channel_busy_onset(NodeId node, SimTime tx_start, SimTime tx_end) {
  NodeMac& mac = nodes_[node];
  mac.busy_until = std::max(mac.busy_until, tx_end);
  if (mac.backoff_event.valid()) {
    SimTime expiry = mac.backoff_base + static_cast<SimTime>(mac.backoff_slots) * params_.slot;
    if (expiry == tx_start) return;  // same-slot expiry still fires: both transmit
    engine_->cancel(mac.backoff_event);
    mac.backoff_event = EventHandle{};
    SimTime elapsed = tx_start - mac.backoff_base;
    int counted = elapsed > 0 ? static_cast<int>(elapsed / params_.slot) : 0;
    mac.backoff_slots = std::max(0, mac.backoff_slots - counted);
  }
}

void DcfMac::transmit(NodeId node) {
  NodeMac& mac = nodes_[node];
  SimTime now = engine_->now();
  const Frame& frame = mac.queue.front();

  ++mac.counters.tx_attempts;
  if (tx_start_cb_) tx_start_cb_(node, frame);

  Transmission tx;
  tx.id = next_tx_id_++;
  tx.sender = node;
  tx.start = now;
  tx.end = now + radio_->airtime(frame);
  tx.frame = frame;
  tx.audible = radio_->receivers_of(node, now);

  mac.transmitting = true;
  mac.busy_until = std::max(mac.busy_until, tx.end);
  for (NodeId r : tx.audible) channel_busy_onset(r, tx.start, tx.end);

  prune_registry();
  registry_.push_back(tx);

  std::uint64_t tx_id = tx.id;
  engine_->schedule(tx.end, EventKind::TxEnd, node,
                    [this, node, tx_id] { on_tx_end(node, tx_id); });
}

bool DcfMac::reception_corrupted(const Transmission& tx, NodeId receiver) const {
  for (const Transmission& other : registry_) {
    if (other.id == tx.id) continue;
    if (other.start >= tx.end || other.end <= tx.start) continue;  // no overlap
    if (other.sender == receiver) return true;  // half duplex
    if (std::binary_search(other.audible.begin(), other.audible.end(), receiver)) {
      return true;
    }
  }
  return false;
}

void DcfMac::on_tx_end(NodeId node, std::uint64_t tx_id) {
  auto it = std::find_if(registry_.begin(), registry_.end(),
                         [tx_id](const Transmission& t) { return t.id == tx_id; });
  if (it == registry_.end()) return;
  // Copy: finish_frame may start the next transmission and grow the registry.
  const Transmission tx = *it;
  NodeMac& mac = nodes_[node];
  mac.transmitting = false;

  auto deliver = [this, &tx](NodeId receiver) {
    SimTime when = tx.end + radio_->propagation_delay(tx.sender, receiver, tx.end);
    std::uint64_t id = next_handoff_id_++;
    handoffs_.emplace(id, tx.frame);
    NodeId from = tx.sender;
    engine_->schedule(when, EventKind::FrameDelivery, receiver,
                      [this, receiver, id, from] {
                        auto entry = handoffs_.find(id);
                        Frame frame = std::move(entry->second);
                        handoffs_.erase(entry);
                        if (deliver_cb_) deliver_cb_(receiver, frame, from);
                      });
  };

  if (tx.frame.is_broadcast()) {
    for (NodeId r : tx.audible) {
      if (reception_corrupted(tx, r)) {
        ++nodes_[r].counters.collisions;
      } else {
        deliver(r);
      }
    }
    ++mac.counters.broadcast_tx;
    finish_frame(node);
    for (NodeId r : tx.audible) access(r);
    return;
  }

  NodeId target = tx.frame.mac_dst;
  bool heard = std::binary_search(tx.audible.begin(), tx.audible.end(), target);
  bool decoded = heard && !reception_corrupted(tx, target);
  if (decoded) {
    ++nodes_[target].counters.delivered;
    deliver(target);
    mac.retry_count = 0;
    mac.cw = params_.cw_min;
    finish_frame(node);
  } else {
    if (heard) ++nodes_[target].counters.collisions;
    mac.awaiting_ack = true;
    engine_->schedule(tx.end + params_.ack_timeout, EventKind::AckTimeout, node,
                      [this, node] { on_ack_timeout(node); });
  }
  for (NodeId r : tx.audible) access(r);
}

void DcfMac::on_ack_timeout(NodeId node) {
  NodeMac& mac = nodes_[node];
  mac.awaiting_ack = false;
  if (mac.retry_count < params_.retry_limit) {
    ++mac.retry_count;
    mac.cw = std::min((mac.cw + 1) * 2 - 1, params_.cw_max);
    mac.backoff_slots = static_cast<int>(rng_draw_ ? rng_draw_(0, mac.cw) : 0);
    access(node);
    return;
  }
  Frame frame = mac.queue.front();
  ++mac.counters.drops_retry;
  if (drop_cb_) drop_cb_(node, frame, MacDropReason::RetryExhausted);
  mac.retry_count = 0;
  mac.cw = params_.cw_min;
  mac.queue.pop_front();
  if (link_fail_cb_) link_fail_cb_(node, frame.mac_dst);
  access(node);
}

void DcfMac::finish_frame(NodeId node) {
  NodeMac& mac = nodes_[node];
  mac.queue.pop_front();
  access(node);
}

void DcfMac::prune_registry() {
  SimTime horizon = engine_->now() - kMicrosPerSecond;
  while (!registry_.empty() && registry_.front().end < horizon) registry_.pop_front();
}

}  // namespace manetsim
