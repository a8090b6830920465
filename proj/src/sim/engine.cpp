#include "airan/sim/engine.hpp"

#include "airan/error.hpp"

namespace airan::sim {

Engine::Engine(Topology topo, std::uint64_t root_seed, bool retain_trace)
    : topo_(std::move(topo)),
      attachment_(topo_),
      root_seed_(root_seed),
      trace_(retain_trace) {}

std::uint64_t Engine::schedule(SimTime due, NodeId src, NodeId dst, Payload payload,
                               bool is_message) {
  if (due < clock_)
    raise(Errc::PastDue, "event due " + to_string(due) + " before clock " + to_string(clock_));
  Event ev;
  ev.due = due;
  ev.seq = next_seq_++;
  ev.src = src;
  ev.dst = dst;
  ev.payload = std::move(payload);
  ev.is_message = is_message;
  queue_.push(std::move(ev));
  return next_seq_ - 1;
}

SimTime Engine::send(NodeId src, NodeId dst, Payload payload, std::uint64_t size_bits) {
  if (src == dst) raise(Errc::NoRoute, "send to self: " + to_string(src));
  if (!topo_.has_link(src.kind, dst.kind))
    raise(Errc::NoRoute, to_string(src.kind) + "->" + to_string(dst.kind));

  SimTime delay = topo_.latency(src.kind, dst.kind);
  if (size_bits > 0) {
    const std::uint64_t cap = topo_.capacity_of(src);
    // ceil(size * 1e6 / cap) microseconds of serialization, in 128-bit to
    // stay exact for large payloads.
    const auto num = static_cast<unsigned __int128>(size_bits) * 1'000'000u;
    delay += SimTime::usec(static_cast<std::int64_t>((num + cap - 1) / cap));
  }
  const SimTime at = clock_ + delay;
  schedule(at, src, dst, std::move(payload), /*is_message=*/true);
  ++sent_;
  return at;
}

void Engine::count_drop(std::string_view reason) {
  ++dropped_;
  drop_reasons_[std::string(reason)] += 1;
}

RunStats Engine::run(SimTime until, bool finalize) {
  while (!queue_.empty() && queue_.top().due <= until) {
    Event ev = queue_.top();
    queue_.pop();
    clock_ = ev.due;  // non-decreasing by queue order
    ++processed_;
    if (ev.is_message) ++delivered_;
    trace_.line(std::to_string(ev.due.us) + "|" + std::to_string(ev.seq) + "|" +
                to_string(ev.src) + ">" + to_string(ev.dst) + "|" + payload_kind(ev.payload) +
                "|" + payload_detail(ev.payload));
    if (handler_) handler_(*this, ev);
  }

  if (finalize) {
    // Messages still in flight past the horizon count as dropped so that
    // sent == delivered + dropped holds at end of run.
    while (!queue_.empty()) {
      if (queue_.top().is_message) count_drop("horizon_cut");
      queue_.pop();
    }
  }

  RunStats stats;
  stats.end_clock = clock_;
  stats.processed = processed_;
  stats.sent = sent_;
  stats.delivered = delivered_;
  stats.dropped = dropped_;
  stats.drop_reasons = drop_reasons_;
  stats.trace_hash = trace_.hash();
  return stats;
}

}  // namespace airan::sim
