#include "airan/collab/pool.hpp"

#include <algorithm>
#include <cmath>

namespace airan::collab {

std::string to_string(OffloadDecision d) {
  switch (d) {
    case OffloadDecision::Local: return "LOCAL";
    case OffloadDecision::Offload: return "OFFLOAD";
    case OffloadDecision::Reject: return "REJECT";
  }
  return "?";
}

OffloadDecision decide_offload(sim::SimTime local_queue_delay, sim::SimTime remote_rtt,
                               sim::SimTime remote_queue_delay, sim::SimTime deadline) {
  if (local_queue_delay.us < 0 || remote_rtt.us < 0 || remote_queue_delay.us < 0 ||
      deadline.us < 0)
    raise(Errc::ValidationError, "offload delays must be non-negative");
  if (local_queue_delay <= deadline) return OffloadDecision::Local;
  if (remote_rtt + remote_queue_delay <= deadline) return OffloadDecision::Offload;
  return OffloadDecision::Reject;
}

std::vector<sim::NodeId> select_participants(const std::vector<ComputeCapability>& candidates,
                                             std::size_t round_size,
                                             const std::map<sim::NodeId, double>& value_scores) {
  if (round_size < 1) raise(Errc::ValidationError, "round_size must be at least 1");
  std::vector<sim::NodeId> nodes;
  nodes.reserve(candidates.size());
  for (const ComputeCapability& c : candidates) {
    c.validate();
    nodes.push_back(c.node);
  }
  auto score = [&](sim::NodeId n) {
    auto it = value_scores.find(n);
    return it == value_scores.end() ? 0.0 : it->second;
  };
  std::stable_sort(nodes.begin(), nodes.end(), [&](sim::NodeId a, sim::NodeId b) {
    const double sa = score(a), sb = score(b);
    if (sa != sb) return sa > sb;
    return a.index < b.index;
  });
  if (nodes.size() > round_size) nodes.resize(round_size);
  return nodes;
}

ScheduleResult schedule_pool(std::vector<ComputeTask> tasks,
                             const std::vector<ComputeCapability>& pool, sim::SimTime now) {
  for (const ComputeCapability& c : pool) c.validate();
  for (const ComputeTask& t : tasks) {
    if (!(t.demand > 0.0)) raise(Errc::ValidationError, t.task_id + ": demand must be positive");
    if (!(t.deadline > now))
      raise(Errc::ValidationError, t.task_id + ": deadline must lie after submission");
  }

  // Priority tiers dominate; EDF inside a tier; task_id keeps ties stable.
  std::sort(tasks.begin(), tasks.end(), [](const ComputeTask& a, const ComputeTask& b) {
    if (a.priority != b.priority) return a.priority > b.priority;
    if (a.deadline != b.deadline) return a.deadline < b.deadline;
    return a.task_id < b.task_id;
  });

  ScheduleResult result;
  for (const ComputeCapability& c : pool) result.busy_until[c.node] = now;

  for (const ComputeTask& t : tasks) {
    const ComputeCapability* chosen = nullptr;
    sim::SimTime best_start{};
    for (const ComputeCapability& c : pool) {
      if (!std::includes(c.tags.begin(), c.tags.end(), t.required_tags.begin(),
                         t.required_tags.end()))
        continue;
      const sim::SimTime start = result.busy_until[c.node];
      const auto run_us =
          static_cast<std::int64_t>(std::ceil(t.demand / c.capacity * 1e6));
      if (start + sim::SimTime::usec(run_us) > t.deadline) continue;
      // Least-loaded member: the one free earliest, node index breaking ties.
      if (!chosen || start < best_start ||
          (start == best_start && c.node.index < chosen->node.index)) {
        chosen = &c;
        best_start = start;
      }
    }
    if (!chosen) {
      result.rejections.push_back({t.task_id, "CapacityExceeded"});
      continue;
    }
    const auto run_us =
        static_cast<std::int64_t>(std::ceil(t.demand / chosen->capacity * 1e6));
    const sim::SimTime finish = best_start + sim::SimTime::usec(run_us);
    result.assignments.push_back({t.task_id, chosen->node, best_start, finish});
    result.busy_until[chosen->node] = finish;
  }
  return result;
}

}  // namespace airan::collab
