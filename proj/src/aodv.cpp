#include "manetsim/aodv.hpp"

#include <algorithm>

namespace manetsim {

AodvProtocol::AodvProtocol(Params params, EventQueue& engine, int node_count)
    : params_(params), engine_(&engine), nodes_(static_cast<std::size_t>(node_count) + 1) {}

NodeId AodvProtocol::route_lookup(NodeId node, NodeId dest) const {
  auto it = nodes_[node].routes.find(dest);
  if (it == nodes_[node].routes.end()) return 0;
  const RouteEntry& entry = it->second;
  if (!entry.valid || entry.lifetime <= engine_->now()) return 0;
  return entry.next_hop;
}

const RouteEntry* AodvProtocol::route(NodeId node, NodeId dest) const {
  auto it = nodes_[node].routes.find(dest);
  return it == nodes_[node].routes.end() ? nullptr : &it->second;
}

bool AodvProtocol::install_route(NodeId node, NodeId dest, NodeId next_hop, int hop_count,
                                 std::uint32_t seq, bool seq_known) {
  auto [it, fresh] = nodes_[node].routes.try_emplace(dest);
  RouteEntry& entry = it->second;
  bool usable = !fresh && entry.valid && entry.lifetime > engine_->now();
  // Sequence numbers gate acceptance even for invalid entries: a stale
  // candidate must never resurrect a route that was invalidated with a
  // fresher number.
  bool accept;
  if (fresh || !entry.seq_known) {
    accept = true;
  } else if (!seq_known) {
    accept = !usable;
  } else if (seq != entry.dest_seq) {
    accept = static_cast<std::int32_t>(seq - entry.dest_seq) > 0;
  } else {
    accept = hop_count < entry.hop_count || !usable;
  }
  if (!accept) {
    if (usable && entry.next_hop == next_hop) {
      entry.lifetime = std::max(entry.lifetime, engine_->now() + params_.active_route_timeout);
    }
    return false;
  }
  entry.next_hop = next_hop;
  entry.hop_count = hop_count;
  if (seq_known) {
    entry.dest_seq = seq;
    entry.seq_known = true;
  }
  entry.lifetime = engine_->now() + params_.active_route_timeout;
  entry.valid = true;
  return true;
}

void AodvProtocol::refresh_route(NodeId node, NodeId dest) {
  auto it = nodes_[node].routes.find(dest);
  if (it != nodes_[node].routes.end() && it->second.valid) {
    it->second.lifetime = engine_->now() + params_.active_route_timeout;
  }
}

void AodvProtocol::transmit_data(NodeId node, const DataBody& data, NodeId next_hop) {
  refresh_route(node, data.flow_dst);
  Frame frame;
  frame.kind = FrameKind::Data;
  frame.src = node;
  frame.mac_dst = next_hop;
  frame.body = data;
  send_frame_(node, std::move(frame));
}

void AodvProtocol::send_data(NodeId src, const DataBody& data) {
  NodeId next = route_lookup(src, data.flow_dst);
  if (next != 0) {
    // A route that arrived by overhearing control traffic may leave an open
    // discovery behind; release its backlog first to keep delivery in order.
    if (nodes_[src].pending.count(data.flow_dst) > 0) flush_buffer(src, data.flow_dst);
    transmit_data(src, data, next);
    return;
  }
  NodeId dest = data.flow_dst;
  auto [it, fresh] = nodes_[src].pending.try_emplace(dest);
  Discovery& discovery = it->second;
  if (discovery.buffer.size() >= static_cast<std::size_t>(params_.buffer_capacity)) {
    ++counters_.no_route_drops;
    if (data_dropped_) data_dropped_(discovery.buffer.front());
    discovery.buffer.pop_front();
  }
  discovery.buffer.push_back(data);
  if (fresh) originate_rreq(src, dest);
}

void AodvProtocol::originate_rreq(NodeId node, NodeId dest) {
  NodeAodv& state = nodes_[node];
  Discovery& discovery = state.pending.at(dest);
  ++state.own_seq;
  discovery.rreq_id = state.next_rreq_id++;

  RreqBody body;
  body.origin = node;
  body.rreq_id = discovery.rreq_id;
  body.origin_seq = state.own_seq;
  body.dest = dest;
  const RouteEntry* known = route(node, dest);
  if (known && known->seq_known) {
    body.dest_seq = known->dest_seq;
    body.dest_seq_known = true;
  }
  body.hop_count = 0;

  ++counters_.rreq_originated;
  Frame frame;
  frame.kind = FrameKind::Rreq;
  frame.src = node;
  frame.mac_dst = kBroadcastAddr;
  frame.body = body;
  send_frame_(node, std::move(frame));

  SimTime wait = params_.net_traversal_time << discovery.attempt;
  discovery.timer = engine_->schedule(engine_->now() + wait, EventKind::RouteTimeout, node,
                                      [this, node, dest] { on_discovery_timeout(node, dest); });
}

void AodvProtocol::flush_buffer(NodeId node, NodeId dest) {
  auto it = nodes_[node].pending.find(dest);
  if (it == nodes_[node].pending.end()) return;
  engine_->cancel(it->second.timer);
  std::deque<DataBody> buffered = std::move(it->second.buffer);
  nodes_[node].pending.erase(it);
  // Packets that waited longer than a route lifetime are stale; forwarding
  // them now would only inject seconds-old traffic into a fresh route.
  SimTime horizon = engine_->now() - params_.active_route_timeout;
  for (const DataBody& data : buffered) {
    if (data.sent_at < horizon) {
      ++counters_.no_route_drops;
      if (data_dropped_) data_dropped_(data);
    } else {
      send_data(node, data);
    }
  }
}

void AodvProtocol::on_discovery_timeout(NodeId node, NodeId dest) {
  auto it = nodes_[node].pending.find(dest);
  if (it == nodes_[node].pending.end()) return;
  Discovery& discovery = it->second;
  discovery.timer = EventHandle{};
  if (route_lookup(node, dest) != 0) {
    // Route appeared without the reply reaching us first; flush now.
    flush_buffer(node, dest);
    return;
  }
  if (discovery.attempt < params_.rreq_retries) {
    ++discovery.attempt;
    originate_rreq(node, dest);
    return;
  }
  fail_discovery(node, dest);
}

void AodvProtocol::fail_discovery(NodeId node, NodeId dest) {
  auto it = nodes_[node].pending.find(dest);
  if (it == nodes_[node].pending.end()) return;
  for (const DataBody& data : it->second.buffer) {
    ++counters_.no_route_drops;
    if (data_dropped_) data_dropped_(data);
  }
  engine_->cancel(it->second.timer);
  nodes_[node].pending.erase(it);
}

void AodvProtocol::generate_rrep(NodeId node, const RreqBody& rreq) {
  NodeId back = route_lookup(node, rreq.origin);
  if (back == 0) {
    ++counters_.rrep_discarded;
    return;
  }
  RrepBody body;
  body.origin = rreq.origin;
  body.dest = node;
  body.dest_seq = nodes_[node].own_seq;
  body.hop_count = 0;

  ++counters_.rrep_generated;
  Frame frame;
  frame.kind = FrameKind::Rrep;
  frame.src = node;
  frame.mac_dst = back;
  frame.body = body;
  send_frame_(node, std::move(frame));
}

void AodvProtocol::on_rreq(NodeId node, const RreqBody& body, NodeId from) {
  if (body.origin == node) return;  // own flood echoed back
  NodeAodv& state = nodes_[node];

  // Reverse route toward the originator via the best copy seen so far.
  install_route(node, body.origin, from, body.hop_count + 1, body.origin_seq, true);

  auto key = std::make_pair(body.origin, body.rreq_id);
  auto seen_it = state.seen.find(key);
  if (seen_it != state.seen.end()) {
    SeenRreq& seen = seen_it->second;
    if (body.hop_count < seen.best_hop) {
      seen.best_hop = body.hop_count;
      if (seen.forward_scheduled && !seen.forwarded) {
        seen.pending.hop_count = body.hop_count;
      }
      if (node == body.dest && seen.replied && body.hop_count < seen.replied_hop) {
        seen.replied_hop = body.hop_count;
        generate_rrep(node, body);  // a strictly shorter reverse path appeared
      }
    }
    return;  // duplicates are never forwarded twice
  }

  SeenRreq seen;
  seen.first_seen = engine_->now();
  seen.best_hop = body.hop_count;

  if (node == body.dest) {
    std::uint32_t bumped = state.own_seq + 1;
    if (body.dest_seq_known &&
        static_cast<std::int32_t>(body.dest_seq - bumped) > 0) {
      bumped = body.dest_seq;
    }
    state.own_seq = bumped;
    seen.replied = true;
    seen.replied_hop = body.hop_count;
    state.seen.emplace(key, seen);
    generate_rrep(node, body);
    return;
  }

  const RouteEntry* cached = route(node, body.dest);
  bool can_answer = cached && cached->valid && cached->lifetime > engine_->now() &&
                    cached->seq_known &&
                    (!body.dest_seq_known ||
                     static_cast<std::int32_t>(cached->dest_seq - body.dest_seq) >= 0);
  if (can_answer) {
    NodeId back = route_lookup(node, body.origin);
    if (back != 0) {
      RrepBody reply;
      reply.origin = body.origin;
      reply.dest = body.dest;
      reply.dest_seq = cached->dest_seq;
      reply.hop_count = cached->hop_count;
      ++counters_.rrep_generated;
      Frame frame;
      frame.kind = FrameKind::Rrep;
      frame.src = node;
      frame.mac_dst = back;
      frame.body = reply;
      send_frame_(node, std::move(frame));
      seen.replied = true;
      seen.replied_hop = body.hop_count;
      state.seen.emplace(key, seen);
      return;
    }
  }

  bool eligible = params_.flooding == FloodingPolicy::Full ||
                  (is_backbone_ && is_backbone_(node));
  if (!eligible) {
    ++counters_.suppressed_forwards;
    state.seen.emplace(key, seen);
    return;
  }

  seen.forward_scheduled = true;
  seen.pending = body;
  SimTime jitter = jitter_draw_
                       ? jitter_draw_(params_.forward_jitter_min, params_.forward_jitter_max)
                       : params_.forward_jitter_min;
  seen.forward_event = engine_->schedule(
      engine_->now() + jitter, EventKind::RreqForward, node,
      [this, node, key] { forward_rreq(node, key); });
  state.seen.emplace(key, seen);
}

void AodvProtocol::forward_rreq(NodeId node, std::pair<NodeId, std::uint32_t> key) {
  auto it = nodes_[node].seen.find(key);
  if (it == nodes_[node].seen.end()) return;
  SeenRreq& seen = it->second;
  seen.forwarded = true;
  seen.forward_event = EventHandle{};

  RreqBody body = seen.pending;
  body.hop_count = seen.best_hop + 1;

  ++counters_.rreq_forwarded;
  Frame frame;
  frame.kind = FrameKind::Rreq;
  frame.src = node;
  frame.mac_dst = kBroadcastAddr;
  frame.body = body;
  send_frame_(node, std::move(frame));
}

void AodvProtocol::on_rrep(NodeId node, const RrepBody& body, NodeId from) {
  bool improved = install_route(node, body.dest, from, body.hop_count + 1, body.dest_seq, true);

  if (node == body.origin) {
    flush_buffer(node, body.dest);
    return;
  }

  NodeId back = route_lookup(node, body.origin);
  if (back == 0) {
    ++counters_.rrep_discarded;
    return;
  }
  if (!improved) return;  // only relay replies that improved our own route

  auto route_it = nodes_[node].routes.find(body.dest);
  if (route_it != nodes_[node].routes.end()) route_it->second.precursors.insert(back);

  RrepBody forward = body;
  ++forward.hop_count;
  Frame frame;
  frame.kind = FrameKind::Rrep;
  frame.src = node;
  frame.mac_dst = back;
  frame.body = forward;
  send_frame_(node, std::move(frame));
}

void AodvProtocol::on_data(NodeId node, const DataBody& data, NodeId from) {
  (void)from;
  if (data.flow_dst == node) {
    if (deliver_app_) deliver_app_(node, data);
    return;
  }
  NodeId next = route_lookup(node, data.flow_dst);
  if (next != 0) {
    transmit_data(node, data, next);
    refresh_route(node, data.flow_src);
    return;
  }
  // No live route at a relay: drop and warn the precursors, if any.
  ++counters_.no_route_drops;
  if (data_dropped_) data_dropped_(data);
  auto it = nodes_[node].routes.find(data.flow_dst);
  if (it != nodes_[node].routes.end() && !it->second.precursors.empty()) {
    std::uint32_t seq = it->second.seq_known ? it->second.dest_seq + 1 : 0;
    send_rerr(node, {{data.flow_dst, seq}});
  }
}

void AodvProtocol::send_rerr(NodeId node,
                             std::vector<std::pair<NodeId, std::uint32_t>> unreachable) {
  if (unreachable.empty()) return;
  RerrBody body;
  body.unreachable = std::move(unreachable);
  Frame frame;
  frame.kind = FrameKind::Rerr;
  frame.src = node;
  frame.mac_dst = kBroadcastAddr;
  frame.body = body;
  send_frame_(node, std::move(frame));
}

void AodvProtocol::on_link_failure(NodeId node, NodeId lost_next_hop) {
  std::vector<std::pair<NodeId, std::uint32_t>> with_precursors;
  for (auto& [dest, entry] : nodes_[node].routes) {
    if (!entry.valid || entry.next_hop != lost_next_hop) continue;
    entry.valid = false;
    if (entry.seq_known) ++entry.dest_seq;
    if (!entry.precursors.empty()) {
      with_precursors.emplace_back(dest, entry.dest_seq);
      entry.precursors.clear();
    }
  }
  send_rerr(node, std::move(with_precursors));
}

void AodvProtocol::on_rerr(NodeId node, const RerrBody& body, NodeId from) {
  std::vector<std::pair<NodeId, std::uint32_t>> propagate;
  for (const auto& [dest, seq] : body.unreachable) {
    auto it = nodes_[node].routes.find(dest);
    if (it == nodes_[node].routes.end()) continue;
    RouteEntry& entry = it->second;
    if (!entry.valid || entry.next_hop != from) continue;
    entry.valid = false;
    entry.dest_seq = seq;
    entry.seq_known = true;
    if (!entry.precursors.empty()) {
      propagate.emplace_back(dest, seq);
      entry.precursors.clear();
    }
  }
  send_rerr(node, std::move(propagate));
}

void AodvProtocol::on_tick() {
  SimTime now = engine_->now();
  for (auto& state : nodes_) {
    for (auto& [dest, entry] : state.routes) {
      if (entry.valid && entry.lifetime <= now) entry.valid = false;
    }
    // Request records age out well past any retry schedule.
    SimTime horizon = now - 8 * params_.net_traversal_time;
    for (auto it = state.seen.begin(); it != state.seen.end();) {
      if (it->second.first_seen < horizon && !it->second.forward_event.valid()) {
        it = state.seen.erase(it);
      } else {
        ++it;
      }
    }
  }
}

long AodvProtocol::buffered_count() const {
  long total = 0;
  for (const auto& state : nodes_) {
    for (const auto& [dest, discovery] : state.pending) {
      total += static_cast<long>(discovery.buffer.size());
    }
  }
  return total;
}

std::vector<DataBody> AodvProtocol::buffered_packets() const {
  std::vector<DataBody> out;
  for (const auto& state : nodes_) {
    for (const auto& [dest, discovery] : state.pending) {
      out.insert(out.end(), discovery.buffer.begin(), discovery.buffer.end());
    }
  }
  return out;
}

}  // namespace manetsim
