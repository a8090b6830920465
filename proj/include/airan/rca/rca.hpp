#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "airan/collab/pool.hpp"
#include "airan/collect/schema.hpp"
#include "airan/error.hpp"
#include "airan/model/registry.hpp"
#include "airan/sim/node.hpp"
#include "airan/sim/rng.hpp"
#include "airan/sim/time.hpp"

namespace airan::rca {

// --- spatial grid ---

inline constexpr double kGridCellMeters = 50.0;

struct GridIndex {
  std::int64_t ix = 0;
  std::int64_t iy = 0;
  auto operator<=>(const GridIndex&) const = default;
};

/// Maps a served-area position to its 50 m x 50 m cell. A cell owns its
/// lower edges, so (50, 0) is already cell (1, 0). Negative or non-finite
/// coordinates are outside the served area.
GridIndex grid_index(double x_m, double y_m);

struct GridSummary {
  double mean_rtt_ms = 0.0;
  double mean_rsrp_dbm = 0.0;
  double mean_sinr_db = 0.0;
  std::uint64_t n = 0;
};

/// Per-cell averages of transport and radio health over a record stream.
/// Records must carry position_x/position_y/tcp_rtt/rsrp/sinr; cells no
/// record fell into are absent from the result.
std::map<GridIndex, GridSummary> aggregate_grid(const std::vector<collect::DataRecord>& records);

// --- cross-domain feature fusion ---

struct AppSample {
  sim::SimTime at{};
  double tcp_rtt_ms = 0.0;
  double packet_loss = 0.0;  // fraction
};

struct RanSample {
  sim::SimTime at{};
  double sinr_db = 0.0;
  double rsrp_dbm = 0.0;
  std::uint32_t handover_failures = 0;
};

struct UeInfo {
  std::uint32_t device_class = 0;
  bool battery_low = false;
};

struct MobSample {
  sim::SimTime at{};
  double x_m = 0.0;
  double y_m = 0.0;
  double speed_kmh = 0.0;
};

/// Everything collected about one UE over an analysis window, kept apart
/// by source domain until fusion.
struct UeWindow {
  std::vector<AppSample> app;
  std::vector<RanSample> ran;
  std::optional<UeInfo> ue;
  std::vector<MobSample> mob;
};

/// One diagnosis row: window means for continuous metrics, window sums
/// for event counts, and a trajectory summary for mobility.
struct FusedFeatures {
  double tcp_rtt_ms = 0.0;
  double packet_loss = 0.0;
  double sinr_db = 0.0;
  double rsrp_dbm = 0.0;
  std::uint32_t handover_failures = 0;
  std::uint32_t device_class = 0;
  bool battery_low = false;
  std::uint32_t grids_visited = 0;  // distinct cells touched in the window
  double speed_kmh = 0.0;           // window mean

  void validate() const;
};

/// Fuses one UE's window into a feature row. Samples are kept when
/// from <= at < to; every domain must contribute at least one sample or
/// the fusion fails naming the silent domain.
FusedFeatures fuse_features(const UeWindow& w, sim::SimTime from, sim::SimTime to);

inline constexpr std::size_t kFeatureCount = 9;

/// Fixed column order shared by training and inference.
std::array<double, kFeatureCount> featurize(const FusedFeatures& f);
const std::array<const char*, kFeatureCount>& feature_names();

// --- labels ---

enum class RootCause : std::uint8_t {
  WeakCoverage,
  Interference,
  HandoverFailure,
  Congestion,
  Normal,
};
inline constexpr std::size_t kRootCauseCount = 5;

enum class UserType : std::uint8_t { Indoor, Outdoor, HighSpeed };
inline constexpr std::size_t kUserTypeCount = 3;

std::string to_string(RootCause c);
std::string to_string(UserType t);

struct RcaLabel {
  RootCause root_cause = RootCause::Normal;
  UserType user_type = UserType::Outdoor;
  bool operator==(const RcaLabel&) const = default;
};

struct Example {
  FusedFeatures features;
  RcaLabel label;
};

// --- expert rule baseline ---

/// Hand-written diagnosis rules, checked in order: very low RSRP wins,
/// then strong-signal negative SINR, then any handover failure, then
/// inflated RTT on an otherwise healthy radio. User type comes from the
/// speed thresholds alone (< 1 km/h indoor, <= 80 outdoor, above that
/// high-speed).
RcaLabel rule_baseline(const FusedFeatures& f, double grid_median_rtt_ms = 50.0);

// --- learned classifier ---

struct TreeConfig {
  std::uint32_t max_depth = 12;
  std::size_t min_leaf = 4;
  std::size_t tree_count = 1;  // > 1 bags bootstrap replicas and votes
  std::uint64_t seed = 1;

  void validate() const;
};

namespace detail {

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  std::int32_t klass = 0;
};

struct Forest {
  std::vector<std::vector<TreeNode>> trees;
  std::size_t klasses = 0;

  int predict(const double* x) const;
  std::uint64_t node_count() const;
};

}  // namespace detail

/// CART ensemble over the fused feature row, one forest per label axis.
class RcaClassifier {
 public:
  RcaLabel diagnose(const FusedFeatures& f) const;

  /// Raw-row entry point; the row length must match the training schema.
  RcaLabel diagnose_row(const std::vector<double>& row) const;

  std::size_t feature_count() const { return kFeatureCount; }
  std::uint64_t parameter_count() const;  // total nodes across both forests

 private:
  friend RcaClassifier train_classifier(const std::vector<Example>&, const TreeConfig&);

  detail::Forest cause_;
  detail::Forest type_;
};

/// Fits the classifier on labeled windows. The data must show at least
/// two distinct root causes; a single-class dataset has nothing to learn.
RcaClassifier train_classifier(const std::vector<Example>& data, const TreeConfig& cfg = {});

// --- planted-cause generator ---

struct PlantedConfig {
  std::size_t count = 5000;
  double overlap = 0.1;  // 0: signatures sit strictly inside the rule regions
  std::uint64_t seed = 1;

  void validate() const;
};

/// Synthetic incident dataset with known root causes. At overlap 0 every
/// class lies strictly inside its expert-rule region, so the rules score
/// perfectly; raising the knob bleeds each signature across the
/// single-feature thresholds while the joint signature stays informative.
std::vector<Example> planted_dataset(const PlantedConfig& cfg);

// --- diagnosis quality ---

struct CauseScores {
  std::array<double, kRootCauseCount> precision{};
  std::array<double, kRootCauseCount> recall{};
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double accuracy = 0.0;
};

/// Per-root-cause precision/recall plus macro averages. A class absent
/// from both truth and prediction scores 1 (vacuous); a class predicted
/// never but present in truth scores 0 precision.
CauseScores score_causes(const std::vector<RcaLabel>& truth, const std::vector<RcaLabel>& predicted);

// --- training pipeline ---

struct TrainedRca {
  RcaClassifier classifier;
  model::ModelHandle handle = 0;
  collab::Assignment placement;  // where and when the training job ran
};

/// Full training path: the fit is placed on the compute pool as a
/// training job, the model registered with its dataset lineage, and
/// TRAIN_DONE recorded at the job's finish time. Throws if no pool
/// member can finish the job by its deadline.
TrainedRca train_on_pool(model::Registry& reg, const std::string& dataset_id,
                         const std::vector<Example>& data, const TreeConfig& cfg,
                         const std::vector<collab::ComputeCapability>& pool, sim::SimTime now,
                         std::uint32_t version = 1);

}  // namespace airan::rca
