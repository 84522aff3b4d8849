#include "manetsim/frame.hpp"

namespace manetsim {

std::string_view role_kind_name(ClusterRoleKind kind) {
  switch (kind) {
    case ClusterRoleKind::Undecided: return "undecided";
    case ClusterRoleKind::Ordinary: return "ordinary";
    case ClusterRoleKind::Gateway: return "gateway";
    case ClusterRoleKind::ClusterHead: return "head";
    case ClusterRoleKind::ClusterHeadGateway: return "chg";
  }
  return "?";
}

int Frame::size_bytes() const {
  int payload = 0;
  switch (kind) {
    case FrameKind::Data:
      payload = std::get<DataBody>(body).payload_bytes;
      break;
    case FrameKind::Beacon:
      payload = 16;
      break;
    case FrameKind::Rreq:
      payload = 24;
      break;
    case FrameKind::Rrep:
      payload = 20;
      break;
    case FrameKind::Rerr:
      payload = 4 + 8 * static_cast<int>(std::get<RerrBody>(body).unreachable.size());
      break;
  }
  return payload + kHeaderBytes;
}

}  // namespace manetsim
