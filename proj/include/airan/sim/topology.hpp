#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "airan/sim/node.hpp"
#include "airan/sim/time.hpp"

namespace airan::sim {

/// Static network shape: one AI node and one OAM over a cluster of gNBs,
/// each gNB serving a fixed block of UEs at start of run. Link latency is
/// keyed by (src kind, dst kind); capacity by node kind with optional
/// per-node overrides.
struct Topology {
  std::uint32_t gnb_count = 8;
  std::uint32_t ues_per_gnb = 600;
  double area_x_m = 2000.0;
  double area_y_m = 2000.0;

  std::map<std::pair<NodeKind, NodeKind>, SimTime> link_latency;
  std::map<NodeKind, std::uint64_t> capacity_bps;
  std::unordered_map<NodeId, std::uint64_t> capacity_override_bps;

  std::uint32_t ue_count() const { return gnb_count * ues_per_gnb; }

  bool has_link(NodeKind a, NodeKind b) const { return link_latency.count({a, b}) > 0; }
  SimTime latency(NodeKind a, NodeKind b) const { return link_latency.at({a, b}); }

  std::uint64_t capacity_of(NodeId n) const {
    if (auto it = capacity_override_bps.find(n); it != capacity_override_bps.end())
      return it->second;
    return capacity_bps.at(n.kind);
  }

  void add_link(NodeKind a, NodeKind b, SimTime lat) {
    link_latency[{a, b}] = lat;
    link_latency[{b, a}] = lat;
  }

  /// Default desk-scale cluster wiring. Latencies are scenario parameters,
  /// not measured figures.
  static Topology standard(std::uint32_t gnbs, std::uint32_t ues_per_gnb);
};

/// Mutable attachment state: which gNB serves each UE right now.
class Attachment {
 public:
  Attachment() = default;
  explicit Attachment(const Topology& topo);

  NodeId gnb_of(std::uint32_t ue) const { return NodeId::gnb(serving_.at(ue)); }
  void set(std::uint32_t ue, std::uint32_t gnb) { serving_.at(ue) = gnb; }
  std::uint32_t ue_count() const { return static_cast<std::uint32_t>(serving_.size()); }

 private:
  std::vector<std::uint32_t> serving_;
};

}  // namespace airan::sim
