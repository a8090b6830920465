#pragma once

#include <cstdint>
#include <initializer_list>

#include "airan/error.hpp"
#include "airan/sim/node.hpp"
#include "airan/sim/time.hpp"

namespace airan::collect {

// Payload categories an AI radio bearer is allowed to carry.  Everything else
// (user-plane traffic) stays on ordinary bearers and is competed with, never
// displaced.
enum class AiPayloadKind : std::uint8_t { TrainingData = 1, Model = 2, AssistData = 4 };

enum class Admission : std::uint8_t { Send, Defer };

// Dedicated bearer for AI payloads between a UE and its serving cell.  The
// bearer is strictly lower priority than basic connectivity: admission caps
// the AI share of link capacity and refuses to push the combined load past 1.
struct AiBearer {
  sim::NodeId owner_ue;
  double cap_fraction = 0.2;          // max fraction of link capacity for AI data
  std::uint8_t allowed = 0x7;         // bitmask of AiPayloadKind
  std::uint64_t link_capacity_bps = 50'000'000;
  sim::SimTime epoch = sim::SimTime::msec(100);  // admission epoch

  void validate() const {
    if (!(cap_fraction > 0.0 && cap_fraction < 1.0))
      raise(Errc::ValidationError, "bearer cap_fraction must be in (0,1)");
    if (link_capacity_bps == 0)
      raise(Errc::ValidationError, "bearer link capacity must be positive");
    if (epoch.us <= 0) raise(Errc::ValidationError, "bearer epoch must be positive");
  }

  bool allows(AiPayloadKind k) const {
    return (allowed & static_cast<std::uint8_t>(k)) != 0;
  }

  // Fraction of one epoch's link capacity that `bits` occupies.
  double share_of(std::uint64_t bits) const {
    return static_cast<double>(bits) /
           (static_cast<double>(link_capacity_bps) * epoch.seconds());
  }
};

// Decide whether AI data may be sent now.  `pending_bits` is the total AI
// volume that would have been sent in the current epoch if this send goes
// through (bits already admitted this epoch plus the new payload), and
// `link_load` is the basic-connectivity load on the link in [0,1].
inline Admission admit_ai_traffic(const AiBearer& bearer, std::uint64_t pending_bits,
                                  double link_load) {
  if (link_load < 0.0 || link_load > 1.0)
    raise(Errc::ValidationError, "link_load must be in [0,1]");
  const double share = bearer.share_of(pending_bits);
  if (share > bearer.cap_fraction) return Admission::Defer;
  if (link_load + share > 1.0) return Admission::Defer;
  return Admission::Send;
}

}  // namespace airan::collect
