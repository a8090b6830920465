#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "airan/collect/bearer.hpp"
#include "airan/collect/filter.hpp"
#include "airan/collect/schema.hpp"
#include "airan/sim/engine.hpp"

namespace airan::collect {

// REAL_TIME rides the control plane and must land within 10 ms of the
// sample; NEAR_RT tolerates up to a second; OAM accumulates into the
// counter-style 15-minute batch reports.
enum class DeadlineClass : std::uint8_t { RealTime, NearRt, Oam };

std::string to_string(DeadlineClass c);
sim::SimTime deadline_of(DeadlineClass c);

// Budget-accounting / batch-flush cadence. NEAR_RT flushes twice a
// second so queueing plus path delay stays under its one-second deadline.
sim::SimTime reporting_period(DeadlineClass c);

struct Rect {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  bool contains(double x, double y) const { return x >= x0 && x < x1 && y >= y0 && y < y1; }
};

struct TimeRange {
  sim::SimTime from{};
  sim::SimTime to{};  // half-open [from, to)
};

/// Which sources a task listens to. Empty collections mean "no restriction".
struct TaskScope {
  std::vector<std::uint32_t> cells;  // gnb indices
  std::vector<std::uint32_t> ues;    // ue indices
  std::string service_type;          // matched against the app_type attribute
  std::optional<Rect> area;          // on position_x / position_y
  std::optional<TimeRange> time;
};

struct CollectionTask {
  std::string task_id;
  std::vector<std::string> attributes;  // projection; empty keeps every attribute
  FilterPtr filter;                     // optional
  DeadlineClass deadline_class = DeadlineClass::NearRt;
  sim::NodeId destination;
  std::uint64_t volume_budget_bits = 0;  // per reporting period
  TaskScope scope;
};

using TaskHandle = std::uint32_t;

/// Fixed per-report framing overhead on the wire.
inline constexpr std::uint64_t kReportHeaderBits = 128;

struct TaskStats {
  std::uint64_t offered = 0;   // samples sighted in scope
  std::uint64_t matched = 0;   // passed scope + filter
  std::uint64_t delivered_records = 0;
  std::uint64_t delivered_bits = 0;
  std::uint64_t budget_drops = 0;   // newest-first overflow drops
  std::uint64_t bearer_defers = 0;  // admission pushbacks on the UE leg
};

/// One report landing at its task destination.
struct Delivery {
  TaskHandle task = 0;
  sim::SimTime sampled_at{};    // oldest record in the batch
  sim::SimTime emitted_at{};    // when the batch left the reporting node
  sim::SimTime delivered_at{};
  std::uint32_t n_records = 0;
  std::uint64_t bits = 0;
};

/// Task-driven collection runtime. Filters run where the data is born (UE
/// or gNB); matching records are projected to the requested attributes,
/// budget-checked per reporting period (newest dropped first), batched at
/// the reporting cell per deadline class, and shipped over simulated links.
/// UE-originated samples must clear the owner's AI-bearer admission before
/// they may occupy the air interface.
class Collector {
 public:
  Collector(sim::Engine& eng, AttrSchema schema);

  TaskHandle install_task(CollectionTask task);
  const CollectionTask& task(TaskHandle h) const { return tasks_.at(h).def; }
  std::size_t task_count() const { return tasks_.size(); }

  /// Basic-connectivity load on a UE's uplink, for bearer admission.
  void set_link_load_fn(std::function<double(sim::NodeId, sim::SimTime)> fn) {
    link_load_ = std::move(fn);
  }
  void set_bearer(std::uint32_t ue, AiBearer bearer);

  /// A fresh sample materializes at `source` (the UE it describes or the
  /// measuring gNB). Throws MissingAttribute when a filter references an
  /// attribute the record lacks.
  void offer(const DataRecord& rec, sim::NodeId source);

  /// Engine hook for in-flight reports and flush/epoch timers.
  /// Returns true when the event belonged to this module.
  bool on_event(const sim::Event& ev);

  const TaskStats& stats(TaskHandle h) const { return tasks_.at(h).stats; }
  const std::vector<Delivery>& deliveries() const { return deliveries_; }

  /// Record ids delivered to the destination, in arrival order.
  const std::vector<std::uint32_t>& delivered_ids(TaskHandle h) const {
    return tasks_.at(h).delivered_ids;
  }
  const DataRecord& record(std::uint32_t id) const { return store_.at(id).rec; }

  /// Peak AI share admitted on any bearer at any epoch (cap audit).
  double max_ai_share() const { return max_ai_share_; }
  std::uint64_t pending_deferred() const;

 private:
  struct Batch {
    std::vector<std::uint32_t> ids;
    std::uint64_t bits = 0;
    sim::SimTime oldest{};
  };
  struct TaskState {
    CollectionTask def;
    CompiledFilter matcher;  // null when the task has no filter
    std::int64_t window = -1;
    std::uint64_t window_bits = 0;
    std::map<sim::NodeId, Batch> pending;  // by reporting node
    std::vector<std::uint32_t> delivered_ids;
    TaskStats stats;
  };
  struct StoredRecord {
    TaskHandle task = 0;
    DataRecord rec;
  };
  struct UeState {
    AiBearer bearer;
    std::int64_t epoch = -1;
    std::uint64_t epoch_bits = 0;
    std::deque<std::uint32_t> deferred;  // record ids awaiting admission
    bool retry_scheduled = false;
  };

  bool in_scope(const TaskState& t, const DataRecord& rec) const;
  DataRecord project(const TaskState& t, const DataRecord& rec) const;
  bool within_budget(TaskState& t, std::uint64_t bits);
  void enter_cell_pipeline(TaskHandle h, std::uint32_t id, sim::NodeId node);
  void emit(TaskHandle h, sim::NodeId node, Batch batch);
  void deliver(TaskHandle h, const sim::CollectionReport& rep);
  bool admit_and_send(std::uint32_t ue, std::uint32_t id);
  void schedule_retry(std::uint32_t ue);
  UeState& ue_state(std::uint32_t ue);

  sim::Engine& eng_;
  AttrSchema schema_;
  std::vector<TaskState> tasks_;
  std::vector<StoredRecord> store_;
  std::vector<std::vector<std::uint32_t>> batches_;  // batch id -> record ids
  std::vector<sim::SimTime> batch_emitted_;          // parallel to batches_
  std::map<std::uint32_t, UeState> ues_;
  std::function<double(sim::NodeId, sim::SimTime)> link_load_;
  std::vector<Delivery> deliveries_;
  double max_ai_share_ = 0.0;
};

}  // namespace airan::collect
