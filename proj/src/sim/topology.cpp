#include "airan/sim/topology.hpp"

namespace airan::sim {

Topology Topology::standard(std::uint32_t gnbs, std::uint32_t ues) {
  Topology t;
  t.gnb_count = gnbs;
  t.ues_per_gnb = ues;

  t.add_link(NodeKind::Ue, NodeKind::Gnb, SimTime::msec(2));
  t.add_link(NodeKind::Gnb, NodeKind::AiNode, SimTime::usec(1500));
  t.add_link(NodeKind::Gnb, NodeKind::Gnb, SimTime::msec(1));
  t.add_link(NodeKind::AiNode, NodeKind::Oam, SimTime::msec(10));
  t.add_link(NodeKind::Gnb, NodeKind::Oam, SimTime::msec(10));
  t.add_link(NodeKind::AiNode, NodeKind::Core, SimTime::msec(5));
  t.add_link(NodeKind::Core, NodeKind::Gnb, SimTime::msec(5));

  t.capacity_bps[NodeKind::Ue] = 50'000'000;          // uplink air interface
  t.capacity_bps[NodeKind::Gnb] = 1'000'000'000;      // fronthaul/backhaul
  t.capacity_bps[NodeKind::AiNode] = 10'000'000'000;  // cluster fabric
  t.capacity_bps[NodeKind::Oam] = 1'000'000'000;
  t.capacity_bps[NodeKind::Core] = 1'000'000'000;
  return t;
}

Attachment::Attachment(const Topology& topo) {
  serving_.resize(topo.ue_count());
  for (std::uint32_t u = 0; u < topo.ue_count(); ++u) serving_[u] = u / topo.ues_per_gnb;
}

}  // namespace airan::sim
