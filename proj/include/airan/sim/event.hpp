#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "airan/sim/node.hpp"
#include "airan/sim/time.hpp"

namespace airan::sim {

/// One user-plane traffic arrival for a UE.
struct TrafficArrival {
  std::uint32_t ue = 0;
  std::uint16_t app = 0;  // index into the scenario app catalog
  std::uint64_t size_bits = 0;
  bool vip = false;
};

/// A batch of collected telemetry records in flight to a task destination.
/// Records live in the collector's store; the event carries a batch id.
struct CollectionReport {
  std::uint32_t task = 0;
  std::uint32_t batch = 0;
  std::uint32_t n_records = 0;
  std::uint64_t bits = 0;
  SimTime sampled_at{};  // generation time of the oldest record in the batch
};

struct ModelCommand {
  std::uint32_t model = 0;
  std::uint32_t version = 0;
  std::uint8_t command = 0;  // model::Command
};

struct ComputeRequest {
  std::uint32_t task = 0;
};

struct Handover {
  std::uint32_t ue = 0;
  NodeId from;
  NodeId to;
};

struct FlBroadcast {
  std::uint32_t round = 0;
  std::shared_ptr<const std::vector<double>> weights;
};

struct FlUpdate {
  std::uint32_t round = 0;
  NodeId client;
  std::shared_ptr<const std::vector<double>> weights;
  std::uint64_t sample_count = 0;
  double loss = 0.0;
};

/// Module-local timer. `tag` selects the handler branch, a/b are free slots.
struct Timer {
  std::uint32_t tag = 0;
  std::uint64_t a = 0;
  std::uint64_t b = 0;
};

/// Timer tag registry. Modules dispatch on these; keep values unique.
namespace timer {
inline constexpr std::uint32_t kCollectFlush = 1;   // a = task handle
inline constexpr std::uint32_t kBearerEpoch = 2;    // a = ue index
inline constexpr std::uint32_t kFlRound = 3;        // a = round
inline constexpr std::uint32_t kEnergySlot = 4;     // a = slot index
inline constexpr std::uint32_t kAssureTick = 5;     // a = loop index
inline constexpr std::uint32_t kMonitorTick = 6;    // a = model id
inline constexpr std::uint32_t kSample = 7;         // a = source index
inline constexpr std::uint32_t kHandover = 8;       // a = ue index
inline constexpr std::uint32_t kComputeDone = 9;    // a = compute task id
}  // namespace timer

using Payload = std::variant<TrafficArrival, CollectionReport, ModelCommand, ComputeRequest,
                             Handover, FlBroadcast, FlUpdate, Timer>;

/// (due, seq) is the total dequeue order: due first, then insertion
/// sequence, so simultaneous events replay in FIFO order.
struct Event {
  SimTime due{};
  std::uint64_t seq = 0;
  NodeId src;
  NodeId dst;
  Payload payload;
  bool is_message = false;  // true when produced by Engine::send()
};

std::string payload_kind(const Payload& p);
std::string payload_detail(const Payload& p);

}  // namespace airan::sim
