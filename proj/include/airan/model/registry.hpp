#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "airan/collect/schema.hpp"
#include "airan/error.hpp"
#include "airan/sim/node.hpp"
#include "airan/sim/time.hpp"

namespace airan::model {

enum class UseCase : std::uint8_t { EnergySaving, Qos, Rca, Mobility };
enum class TargetLayer : std::uint8_t { L1, L2, L3 };
enum class LifecycleState : std::uint8_t {
  Registered, Trained, Validated, Deployed, Active, Inactive, Retired
};
enum class Command : std::uint8_t {
  TrainDone, ValidatePass, ValidateFail, Deploy, Activate, Deactivate, Retire
};
enum class MonitorAction : std::uint8_t { None, RetrainRequested, Fallback };
enum class RetrainMode : std::uint8_t { PerformanceTriggered, Periodic };

std::string to_string(UseCase u);
std::string to_string(LifecycleState s);
std::string to_string(Command c);
std::string to_string(MonitorAction a);

/// Tumbling monitoring window length.
inline constexpr sim::SimTime kMonitorWindow = sim::SimTime::sec(60);

struct ModelDescriptor {
  std::string model_id;
  std::uint32_t version = 1;
  UseCase use_case = UseCase::Qos;
  std::vector<std::string> lineage;  // dataset ids this model was built from
  std::uint64_t parameter_count = 0;
  TargetLayer layer = TargetLayer::L3;
  sim::NodeId host;
};

/// One monitoring window, covering the three dimensions tracked for a
/// deployed model: how the model behaves, what the network experiences,
/// and what the model costs to run.
struct MonitoringReport {
  std::string model_id;
  std::uint32_t version = 0;
  sim::SimTime window_start{};
  sim::SimTime window_end{};
  std::map<std::string, double> model_metrics;     // accuracy, mae, inference_latency_ms, ...
  std::map<std::string, double> network_metrics;   // packet_loss_rate, handover_failure_count, ...
  std::map<std::string, double> resource_metrics;  // compute_utilization, storage_bits, ...

  void validate() const;
  /// Looks a metric up across the three maps (model, network, resource).
  std::optional<double> metric(const std::string& name) const;
};

struct RetrainPolicy {
  RetrainMode mode = RetrainMode::PerformanceTriggered;
  std::string metric = "accuracy";
  double bound = 0.0;
  bool breach_below = true;  // true: breach when metric < bound; false: when metric > bound
  std::uint32_t consecutive_windows = 1;  // k
  sim::SimTime period{};                  // PERIODIC cadence

  void validate() const;
};

using ModelHandle = std::uint32_t;

struct StateEvent {
  sim::SimTime at{};
  LifecycleState state = LifecycleState::Registered;
};

/// Model context a cell keeps per served UE, copied across on handover so
/// inference continues against the same (model, version).
struct ModelContext {
  std::string model_id;
  std::uint32_t version = 0;
};

enum class MetricKind : std::uint8_t { Accuracy, MeanAbsError };

/// Held-out-set check run before deployment. `predict` is the candidate
/// model's output for a record; the label attribute holds ground truth.
struct ValidationSpec {
  MetricKind metric = MetricKind::Accuracy;
  std::string label_attr = "label";
  double bound = 0.0;  // accuracy: pass when >= bound; MAE: pass when <= bound
  std::function<double(const collect::DataRecord&)> predict;
};

struct ValidationResult {
  bool passed = false;
  double metric_value = 0.0;
};

/// Model repository with lifecycle control, owned by the AI node. All
/// mutations take the caller's clock so state history carries sim time.
class Registry {
 public:
  void register_dataset(const std::string& dataset_id) { datasets_.insert(dataset_id); }
  bool has_dataset(const std::string& dataset_id) const { return datasets_.count(dataset_id) > 0; }

  ModelHandle register_model(ModelDescriptor desc, sim::SimTime now);

  /// FSM: REGISTERED -TRAIN_DONE-> TRAINED -VALIDATE_PASS-> VALIDATED
  /// -DEPLOY-> DEPLOYED -ACTIVATE-> ACTIVE <-ACTIVATE/DEACTIVATE-> INACTIVE;
  /// VALIDATE_FAIL returns TRAINED to REGISTERED; RETIRE is legal from any
  /// state except ACTIVE. Activation enforces version monotonicity per
  /// model_id and requires a fully registered dataset lineage.
  LifecycleState transition(ModelHandle h, Command cmd, sim::SimTime now);

  /// Evaluates the policy against one monitoring window of an ACTIVE
  /// model. The k-th consecutive breach returns Fallback, deactivates the
  /// model, and flags fallback_engaged so serving drops to the non-AI
  /// baseline until a newer version goes ACTIVE.
  MonitorAction monitor(ModelHandle h, const MonitoringReport& report,
                        const RetrainPolicy& policy);

  ValidationResult validate(ModelHandle h, const std::vector<collect::DataRecord>& held_out,
                            const ValidationSpec& spec, sim::SimTime now);

  // Per-UE model context, keyed by serving cell.
  void set_ue_context(std::uint32_t gnb, std::uint32_t ue, ModelContext ctx);
  const ModelContext* ue_context(std::uint32_t gnb, std::uint32_t ue) const;
  void sync_model_context(std::uint32_t ue, std::uint32_t from_gnb, std::uint32_t to_gnb);

  // Lookups.
  ModelHandle handle_of(const std::string& model_id, std::uint32_t version) const;
  std::optional<ModelHandle> latest(const std::string& model_id) const;
  std::vector<ModelHandle> by_use_case(UseCase uc) const;
  std::size_t size() const { return entries_.size(); }

  const ModelDescriptor& descriptor(ModelHandle h) const { return entry(h).desc; }
  LifecycleState state(ModelHandle h) const { return entry(h).state; }
  bool fallback_engaged(ModelHandle h) const { return entry(h).fallback; }
  const std::vector<StateEvent>& history(ModelHandle h) const { return entry(h).history; }

  /// The model serving a use case right now: the ACTIVE entry with the
  /// highest version. Empty while fallback or before first activation —
  /// callers must route decisions to the non-AI baseline then.
  std::optional<ModelHandle> serving_model(UseCase uc) const;
  bool fallback_active(UseCase uc) const;

 private:
  struct Entry {
    ModelDescriptor desc;
    LifecycleState state = LifecycleState::Registered;
    bool fallback = false;
    std::uint32_t breaches = 0;       // consecutive breached windows
    sim::SimTime periodic_mark{};     // last PERIODIC fire (or activation)
    std::vector<StateEvent> history;
  };

  Entry& entry(ModelHandle h);
  const Entry& entry(ModelHandle h) const;
  void set_state(Entry& e, LifecycleState s, sim::SimTime now);

  std::vector<Entry> entries_;
  std::map<std::pair<std::string, std::uint32_t>, ModelHandle> by_key_;
  std::map<std::string, std::uint32_t> max_activated_;  // per model_id
  std::set<std::string> datasets_;
  std::map<std::pair<std::uint32_t, std::uint32_t>, ModelContext> contexts_;  // (gnb, ue)
};

}  // namespace airan::model
