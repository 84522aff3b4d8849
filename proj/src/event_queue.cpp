#include "manetsim/event_queue.hpp"

#include <cassert>
#include <stdexcept>
#include <utility>

namespace manetsim {

std::string_view event_kind_name(EventKind kind) {
  switch (kind) {
    case EventKind::MobilityWaypoint: return "mobility-waypoint";
    case EventKind::FrameDelivery: return "frame-delivery";
    case EventKind::BackoffExpiry: return "backoff-expiry";
    case EventKind::BeaconTimer: return "beacon-timer";
    case EventKind::RouteTimeout: return "route-timeout";
    case EventKind::TrafficSend: return "traffic-send";
    case EventKind::SimEnd: return "sim-end";
    case EventKind::TxEnd: return "tx-end";
    case EventKind::AckTimeout: return "ack-timeout";
    case EventKind::LinkCheck: return "link-check";
    case EventKind::RreqForward: return "rreq-forward";
    case EventKind::Snapshot: return "snapshot";
  }
  return "unknown";
}

EventHandle EventQueue::schedule(SimTime fire_time, EventKind kind, NodeId target,
                                 Action action) {
  if (fire_time < now_) {
    throw std::logic_error("schedule: fire_time " + std::to_string(fire_time) +
                           "us is in the past (clock " + std::to_string(now_) + "us)");
  }
  std::uint64_t seq = next_seq_++;
  heap_.push(QueueEntry{fire_time, seq});
  live_.emplace(seq, Record{fire_time, kind, target, std::move(action)});
  return EventHandle{seq};
}

bool EventQueue::cancel(EventHandle handle) {
  if (!handle.valid()) return false;
  return live_.erase(handle.seq) > 0;
}

std::size_t EventQueue::run_until(SimTime t_end) {
  if (t_end < now_) throw std::logic_error("run_until: t_end before current clock");
  std::size_t count = 0;
  while (!heap_.empty()) {
    QueueEntry top = heap_.top();
    if (top.fire_time > t_end) break;
    heap_.pop();
    auto it = live_.find(top.seq);
    if (it == live_.end()) continue;  // cancelled
    Record record = std::move(it->second);
    live_.erase(it);

    // Strict total order over processed events.
    assert(record.fire_time > last_popped_time_ ||
           (record.fire_time == last_popped_time_ && top.seq > last_popped_seq_));
    last_popped_time_ = record.fire_time;
    last_popped_seq_ = top.seq;

    now_ = record.fire_time;
    if (trace_) {
      (*trace_) << record.fire_time << ',' << top.seq << ','
                << event_kind_name(record.kind) << ',' << record.target << '\n';
    }
    record.action();
    ++count;
    ++processed_;
  }
  now_ = t_end;
  return count;
}

}  // namespace manetsim
