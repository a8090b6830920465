#include "airan/sim/event.hpp"

#include "airan/sim/trace.hpp"

namespace airan::sim {

std::string payload_kind(const Payload& p) {
  switch (p.index()) {
    case 0: return "arrival";
    case 1: return "report";
    case 2: return "model_cmd";
    case 3: return "compute";
    case 4: return "handover";
    case 5: return "fl_bcast";
    case 6: return "fl_update";
    case 7: return "timer";
  }
  return "?";
}

std::string payload_detail(const Payload& p) {
  struct Fmt {
    std::string operator()(const TrafficArrival& a) const {
      return "ue=" + std::to_string(a.ue) + " app=" + std::to_string(a.app) +
             " bits=" + std::to_string(a.size_bits) + (a.vip ? " vip" : "");
    }
    std::string operator()(const CollectionReport& r) const {
      return "task=" + std::to_string(r.task) + " n=" + std::to_string(r.n_records) +
             " bits=" + std::to_string(r.bits);
    }
    std::string operator()(const ModelCommand& m) const {
      return "model=" + std::to_string(m.model) + " v=" + std::to_string(m.version) +
             " cmd=" + std::to_string(m.command);
    }
    std::string operator()(const ComputeRequest& c) const {
      return "task=" + std::to_string(c.task);
    }
    std::string operator()(const Handover& h) const {
      return "ue=" + std::to_string(h.ue) + " " + to_string(h.from) + ">" + to_string(h.to);
    }
    std::string operator()(const FlBroadcast& b) const {
      return "round=" + std::to_string(b.round);
    }
    std::string operator()(const FlUpdate& u) const {
      return "round=" + std::to_string(u.round) + " from=" + to_string(u.client) +
             " n=" + std::to_string(u.sample_count) + " loss=" + fmt_double(u.loss);
    }
    std::string operator()(const Timer& t) const {
      return "tag=" + std::to_string(t.tag) + " a=" + std::to_string(t.a) +
             " b=" + std::to_string(t.b);
    }
  };
  return std::visit(Fmt{}, p);
}

}  // namespace airan::sim
