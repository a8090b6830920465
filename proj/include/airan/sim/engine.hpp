#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <queue>
#include <string>
#include <vector>

#include "airan/sim/event.hpp"
#include "airan/sim/node.hpp"
#include "airan/sim/time.hpp"
#include "airan/sim/topology.hpp"
#include "airan/sim/trace.hpp"

namespace airan::sim {

struct RunStats {
  SimTime end_clock{};
  std::uint64_t processed = 0;
  std::uint64_t sent = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped = 0;
  std::map<std::string, std::uint64_t> drop_reasons;
  std::uint64_t trace_hash = 0;

  bool conserved() const { return sent == delivered + dropped; }
};

/// Single-threaded deterministic event loop. Events dequeue strictly by
/// (due, seq); seq is assigned at schedule time, so ties replay in
/// insertion order. The clock never moves backwards.
class Engine {
 public:
  using Handler = std::function<void(Engine&, const Event&)>;

  Engine(Topology topo, std::uint64_t root_seed, bool retain_trace = false);

  SimTime now() const { return clock_; }
  std::uint64_t root_seed() const { return root_seed_; }
  const Topology& topology() const { return topo_; }
  Attachment& attachment() { return attachment_; }
  const Attachment& attachment() const { return attachment_; }
  Trace& trace() { return trace_; }

  void set_handler(Handler h) { handler_ = std::move(h); }

  /// Enqueue an event due at or after the current clock. Throws PastDue
  /// otherwise. Returns the assigned sequence number.
  std::uint64_t schedule(SimTime due, NodeId src, NodeId dst, Payload payload,
                         bool is_message = false);

  void schedule_in(SimTime delay, NodeId src, NodeId dst, Payload payload) {
    schedule(clock_ + delay, src, dst, std::move(payload));
  }

  /// Transit a message: delivery = now + link latency + serialization on
  /// the sender's capacity. Throws NoRoute when the kind pair has no link.
  /// Counts toward the sent/delivered/dropped conservation balance.
  SimTime send(NodeId src, NodeId dst, Payload payload, std::uint64_t size_bits);

  /// Record an explicit message drop (budget overflow, horizon cut, ...).
  void count_drop(std::string_view reason);

  /// Process every event with due <= until. `finalize` drains the queue
  /// afterwards, counting undelivered in-flight messages as dropped so the
  /// conservation balance closes.
  RunStats run(SimTime until, bool finalize = true);

  std::uint64_t sent() const { return sent_; }
  std::uint64_t delivered() const { return delivered_; }

 private:
  struct Order {
    bool operator()(const Event& a, const Event& b) const {
      if (a.due.us != b.due.us) return a.due.us > b.due.us;
      return a.seq > b.seq;
    }
  };

  Topology topo_;
  Attachment attachment_;
  std::uint64_t root_seed_ = 0;
  SimTime clock_{};
  std::uint64_t next_seq_ = 0;
  std::priority_queue<Event, std::vector<Event>, Order> queue_;
  Handler handler_;
  Trace trace_;

  std::uint64_t processed_ = 0;
  std::uint64_t sent_ = 0;
  std::uint64_t delivered_ = 0;
  std::uint64_t dropped_ = 0;
  std::map<std::string, std::uint64_t> drop_reasons_;
};

}  // namespace airan::sim
