#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "airan/error.hpp"
#include "airan/sim/node.hpp"
#include "airan/sim/time.hpp"

namespace airan::collab {

/// What a node advertised when it joined the compute pool. Tags carve
/// logical pools (geography zone, hardware class, service need).
struct ComputeCapability {
  sim::NodeId node;
  double capacity = 0.0;  // compute units per second
  std::uint64_t memory_bits = 0;
  std::set<std::string> tags;

  void validate() const {
    if (!(capacity > 0.0)) raise(Errc::ValidationError, "compute capacity must be positive");
  }
};

enum class TaskKind : std::uint8_t { Training, Inference, FineTune };

struct ComputeTask {
  std::string task_id;
  TaskKind kind = TaskKind::Inference;
  double demand = 0.0;  // compute units
  sim::SimTime deadline{};
  int priority = 0;  // higher first
  sim::NodeId origin;
  std::set<std::string> required_tags;  // empty matches any pool member
};

enum class OffloadDecision : std::uint8_t { Local, Offload, Reject };

std::string to_string(OffloadDecision d);

/// Keep inference local when the local queue meets the deadline; otherwise
/// offload to the centralized node if the round trip plus its queue still
/// fits; otherwise reject, and the caller falls back to the non-AI path.
OffloadDecision decide_offload(sim::SimTime local_queue_delay, sim::SimTime remote_rtt,
                               sim::SimTime remote_queue_delay, sim::SimTime deadline);

/// Top `round_size` candidates by value score, ties broken by node index
/// ascending. Nodes without a score count as zero.
std::vector<sim::NodeId> select_participants(const std::vector<ComputeCapability>& candidates,
                                             std::size_t round_size,
                                             const std::map<sim::NodeId, double>& value_scores);

struct Assignment {
  std::string task_id;
  sim::NodeId node;
  sim::SimTime start{};
  sim::SimTime finish{};
};

struct Rejection {
  std::string task_id;
  std::string reason;  // "CapacityExceeded"
};

struct ScheduleResult {
  std::vector<Assignment> assignments;
  std::vector<Rejection> rejections;
  std::map<sim::NodeId, sim::SimTime> busy_until;
};

/// Deadline scheduling over a logical pool: earliest deadline first within
/// descending priority tiers. Each task runs sequentially on the
/// least-loaded member whose tags cover the requirement; a task that no
/// member can finish by its deadline is rejected with CapacityExceeded.
ScheduleResult schedule_pool(std::vector<ComputeTask> tasks,
                             const std::vector<ComputeCapability>& pool, sim::SimTime now);

}  // namespace airan::collab
