#include "airan/sim/node.hpp"

namespace airan::sim {

std::string to_string(NodeKind k) {
  switch (k) {
    case NodeKind::AiNode: return "ai";
    case NodeKind::Gnb: return "gnb";
    case NodeKind::Ue: return "ue";
    case NodeKind::Oam: return "oam";
    case NodeKind::Core: return "core";
  }
  return "?";
}

std::string to_string(NodeId id) {
  switch (id.kind) {
    case NodeKind::AiNode:
    case NodeKind::Oam:
    case NodeKind::Core: return to_string(id.kind);
    default: return to_string(id.kind) + std::to_string(id.index);
  }
}

}  // namespace airan::sim
