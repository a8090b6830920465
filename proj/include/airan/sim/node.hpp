#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>

namespace airan::sim {

enum class NodeKind : std::uint8_t { AiNode = 0, Gnb, Ue, Oam, Core };

std::string to_string(NodeKind k);

/// Identity of a simulated node. The AI node, OAM and core are singletons
/// (index 0); gNBs and UEs are indexed. UE indices are global, not
/// per-cell, so a UE keeps its id across handovers.
struct NodeId {
  NodeKind kind = NodeKind::AiNode;
  std::uint32_t index = 0;

  static constexpr NodeId ai_node() { return {NodeKind::AiNode, 0}; }
  static constexpr NodeId oam() { return {NodeKind::Oam, 0}; }
  static constexpr NodeId core() { return {NodeKind::Core, 0}; }
  static constexpr NodeId gnb(std::uint32_t i) { return {NodeKind::Gnb, i}; }
  static constexpr NodeId ue(std::uint32_t i) { return {NodeKind::Ue, i}; }

  constexpr auto operator<=>(const NodeId&) const = default;
};

std::string to_string(NodeId id);

}  // namespace airan::sim

template <>
struct std::hash<airan::sim::NodeId> {
  std::size_t operator()(const airan::sim::NodeId& id) const noexcept {
    return (static_cast<std::size_t>(id.kind) << 32) ^ id.index;
  }
};
