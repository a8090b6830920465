#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "airan/error.hpp"
#include "airan/sim/node.hpp"
#include "airan/sim/rng.hpp"
#include "airan/sim/time.hpp"

namespace airan::assure {

enum class MobilityState : std::uint8_t { Static, Pedestrian, Vehicular, HighSpeed };

std::string to_string(MobilityState m);

/// Observed context of one user at decision time.
struct UserContext {
  sim::NodeId ue;
  std::string app_type;
  double rsrp = -85.0;    // dBm
  double prb_util = 0.0;  // serving-cell load fraction before any grant
  MobilityState mobility = MobilityState::Static;
  bool vip = false;

  void validate() const;  // rsrp in [-140, -40], prb_util in [0, 1]
};

/// One point in the discrete action space: a scheduling weight level and
/// a dedicated PRB share.
struct Action {
  int scheduling_weight = 1;     // 1..8
  double resource_grant = 0.05;  // one of kGrantLevels

  bool operator==(const Action&) const = default;
};

inline constexpr double kGrantLevels[4] = {0.05, 0.1, 0.2, 0.4};
inline constexpr int kWeightLevels = 8;

/// All 32 actions in canonical order: index = (weight - 1) * 4 + grant
/// level, so ties resolve toward the cheapest weight, then the smallest
/// grant. select_action and every oracle share this ordering.
const std::vector<Action>& action_space();

/// Canonical index of an action. ValidationError if not in the space.
std::size_t action_index(const Action& a);

struct QualityPrediction {
  double latency_ms = 0.0;
  double throughput_bps = 0.0;
  double qoe = 0.0;  // in (0, 5), monotone in the other two
};

struct AppProfile {
  std::string name;
  double base_latency_ms = 0.0;  // service time at an empty, well-covered cell
};

/// The set of application classes traffic perception can emit.
class AppCatalog {
 public:
  explicit AppCatalog(std::vector<AppProfile> apps);

  /// Six representative application classes.
  static AppCatalog standard();

  const std::vector<AppProfile>& apps() const { return apps_; }
  std::size_t size() const { return apps_.size(); }
  bool contains(const std::string& name) const;
  std::size_t index_of(const std::string& name) const;  // UnknownApp
  const AppProfile& at(const std::string& name) const;  // UnknownApp

 private:
  std::vector<AppProfile> apps_;
  std::map<std::string, std::size_t> by_name_;
};

enum class UtilityKind : std::uint8_t { LatencyThreshold, LogThroughput, WeightedSum };

/// Operator policy objective. LatencyThreshold is flat (zero) while the
/// predicted latency meets the target and decreases linearly past it, so
/// every action inside the target ties and the canonical order picks the
/// cheapest one.
struct UtilityPolicy {
  UtilityKind kind = UtilityKind::LatencyThreshold;
  double target_ms = 100.0;    // LatencyThreshold
  double penalty_slope = 1.0;  // LatencyThreshold, utility per excess ms
  double w_latency = 0.0;      // WeightedSum, per ms (negative favors speed)
  double w_throughput = 0.0;   // WeightedSum, per Mbps
  double w_qoe = 0.0;          // WeightedSum, per score point

  void validate() const;
  double utility(const QualityPrediction& q) const;
};

/// Noisy service perception: the true label survives with probability
/// `accuracy`, otherwise a uniformly random other catalog label is
/// reported. UnknownApp if true_app is not in the catalog.
std::string perceive_traffic(const AppCatalog& catalog, const std::string& true_app,
                             double accuracy, sim::Rng& rng);

/// Posterior over the true label given an observed one, under a uniform
/// prior and the uniform-error confusion model of perceive_traffic:
/// P(true == observed) = accuracy, the rest split evenly.
std::vector<double> label_posterior(const AppCatalog& catalog, const std::string& observed,
                                    double accuracy);

/// Analytic quality surrogate. Latency multiplies the app's base service
/// time by an M/M/1-style congestion factor on the residual load
/// max(prb_util - grant, 0) (clamped at 0.95), a coverage penalty
/// 2^((-85 - rsrp) / 20) clamped to at least 1, and divides by the
/// scheduling-weight factor 1 + 0.25 * (weight - 1). Throughput is the
/// granted share of a 3-step spectral-rate table over rsrp.
QualityPrediction predict_quality(const AppCatalog& catalog, const UserContext& ctx,
                                  const Action& action);

/// Argmax over `space` in the given order; strict improvement wins, so
/// ties keep the earliest (lowest-index) action. ValidationError on an
/// empty space.
Action argmax_action(const std::vector<Action>& space,
                     const std::function<double(const Action&)>& expected_utility);

/// The QoS optimization: argmax over the action space of the expected
/// policy utility, where ctx.app_type is the *observed* label and the
/// expectation runs over the perception-noise posterior (exact, not
/// sampled). accuracy = 1 degenerates to the known-label case.
Action select_action(const AppCatalog& catalog, const UserContext& ctx,
                     const UtilityPolicy& policy, double perception_accuracy);

/// Scheduler share every user holds until an assurance decision changes it.
inline constexpr Action kDefaultAction{1, 0.1};

struct DegradationEvent {
  sim::SimTime at{};
  UserContext ctx;  // app_type is the ground-truth label
};

struct AssuranceRow {
  sim::SimTime at{};
  sim::NodeId ue;
  std::string observed_app;
  Action action;
  double predicted_latency_ms = 0.0;  // under the observed label
  double realized_latency_ms = 0.0;   // under the true label
};

/// The closed loop for case study 1: on a degradation trigger, perceive
/// the app, and for assured (vip) users pick and apply the optimal
/// action; everyone else keeps the default share. Every trigger appends
/// a log row for the metrics export.
class Assurer {
 public:
  Assurer(AppCatalog catalog, UtilityPolicy policy, double perception_accuracy,
          std::uint64_t seed_root);

  Action assure(const DegradationEvent& ev);

  /// Current applied action (default until assured).
  Action action_of(sim::NodeId ue) const;

  const std::vector<AssuranceRow>& log() const { return log_; }
  const AppCatalog& catalog() const { return catalog_; }

 private:
  AppCatalog catalog_;
  UtilityPolicy policy_;
  double accuracy_;
  sim::Rng rng_;
  std::map<sim::NodeId, Action> applied_;
  std::vector<AssuranceRow> log_;
};

}  // namespace airan::assure
