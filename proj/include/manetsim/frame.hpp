#ifndef MANETSIM_FRAME_HPP
#define MANETSIM_FRAME_HPP

#include <cstdint>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "manetsim/event_queue.hpp"
#include "manetsim/sim_time.hpp"

namespace manetsim {

// MAC destination for broadcast frames.
constexpr NodeId kBroadcastAddr = 0;

// Fixed per-frame header budget: 30 B MAC + 20 B IP + 8 B UDP.
constexpr int kHeaderBytes = 58;

enum class ClusterRoleKind { Undecided, Ordinary, Gateway, ClusterHead, ClusterHeadGateway };

std::string_view role_kind_name(ClusterRoleKind kind);

struct DataBody {
  NodeId flow_src = 0;
  NodeId flow_dst = 0;
  int flow_index = 0;
  std::uint32_t seq = 0;
  SimTime sent_at = 0;
  int payload_bytes = 0;
};

struct BeaconBody {
  NodeId sender = 0;
  NodeId cluster_id = 0;
  ClusterRoleKind role = ClusterRoleKind::Undecided;
  std::uint32_t seq = 0;
  bool boundary = false;       // hears a foreign-cluster neighbor
  bool settled = false;        // hears no undecided neighbor
  NodeId transfer_to = 0;      // nonzero: head hands the CHG role to this member
};

struct RreqBody {
  NodeId origin = 0;
  std::uint32_t rreq_id = 0;
  std::uint32_t origin_seq = 0;
  NodeId dest = 0;
  std::uint32_t dest_seq = 0;
  bool dest_seq_known = false;
  int hop_count = 0;
};

struct RrepBody {
  NodeId origin = 0;  // the route request originator the reply travels to
  NodeId dest = 0;
  std::uint32_t dest_seq = 0;
  int hop_count = 0;
};

struct RerrBody {
  std::vector<std::pair<NodeId, std::uint32_t>> unreachable;  // (dest, new seq)
};

enum class FrameKind { Data, Beacon, Rreq, Rrep, Rerr };

struct Frame {
  FrameKind kind = FrameKind::Data;
  NodeId src = 0;       // transmitting node
  NodeId mac_dst = kBroadcastAddr;
  std::variant<DataBody, BeaconBody, RreqBody, RrepBody, RerrBody> body;

  bool is_broadcast() const { return mac_dst == kBroadcastAddr; }
  int size_bytes() const;
};

}  // namespace manetsim

#endif
