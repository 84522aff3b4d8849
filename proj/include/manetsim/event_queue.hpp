#ifndef MANETSIM_EVENT_QUEUE_HPP
#define MANETSIM_EVENT_QUEUE_HPP

#include <cstdint>
#include <functional>
#include <ostream>
#include <queue>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "manetsim/sim_time.hpp"

namespace manetsim {

using NodeId = int;

// Target id used for engine-global events in traces.
constexpr NodeId kEngineGlobal = 0;

enum class EventKind {
  MobilityWaypoint,
  FrameDelivery,
  BackoffExpiry,
  BeaconTimer,
  RouteTimeout,
  TrafficSend,
  SimEnd,
  TxEnd,
  AckTimeout,
  LinkCheck,
  RreqForward,
  Snapshot,
};

std::string_view event_kind_name(EventKind kind);

struct EventHandle {
  std::uint64_t seq = 0;
  bool valid() const { return seq != 0; }
};

// Deterministic discrete-event engine. Events fire in strict
// (fire_time, insertion seq) order; ties broken by scheduling order.
class EventQueue {
 public:
  using Action = std::function<void()>;

  EventHandle schedule(SimTime fire_time, EventKind kind, NodeId target, Action action);

  // True if the event was live and is now inert; false if it already fired
  // or was cancelled before.
  bool cancel(EventHandle handle);

  // Processes every live event with fire_time <= t_end, then sets the clock
  // to t_end. Returns the number of events processed.
  std::size_t run_until(SimTime t_end);

  SimTime now() const { return now_; }
  bool empty() const { return live_.empty(); }
  std::size_t processed() const { return processed_; }

  // One line per processed event: time_us,seq,kind,target
  void set_trace(std::ostream* trace) { trace_ = trace; }

 private:
  struct QueueEntry {
    SimTime fire_time;
    std::uint64_t seq;
    bool operator>(const QueueEntry& other) const {
      if (fire_time != other.fire_time) return fire_time > other.fire_time;
      return seq > other.seq;
    }
  };
  struct Record {
    SimTime fire_time;
    EventKind kind;
    NodeId target;
    Action action;
  };

  SimTime now_ = 0;
  std::uint64_t next_seq_ = 1;
  std::size_t processed_ = 0;
  SimTime last_popped_time_ = -1;
  std::uint64_t last_popped_seq_ = 0;
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>> heap_;
  std::unordered_map<std::uint64_t, Record> live_;
  std::ostream* trace_ = nullptr;
};

}  // namespace manetsim

#endif
