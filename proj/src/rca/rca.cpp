#include "airan/rca/rca.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

namespace airan::rca {

GridIndex grid_index(double x_m, double y_m) {
  if (!std::isfinite(x_m) || !std::isfinite(y_m) || x_m < 0.0 || y_m < 0.0)
    raise(Errc::OutOfDomain, "position (" + std::to_string(x_m) + ", " + std::to_string(y_m) +
                                 ") outside the served area");
  return {static_cast<std::int64_t>(std::floor(x_m / kGridCellMeters)),
          static_cast<std::int64_t>(std::floor(y_m / kGridCellMeters))};
}

std::map<GridIndex, GridSummary> aggregate_grid(const std::vector<collect::DataRecord>& records) {
  struct Acc {
    double rtt = 0.0, rsrp = 0.0, sinr = 0.0;
    std::uint64_t n = 0;
  };
  std::map<GridIndex, Acc> accs;
  for (const auto& r : records) {
    GridIndex cell = grid_index(r.num("position_x"), r.num("position_y"));
    Acc& a = accs[cell];
    a.rtt += r.num("tcp_rtt");
    a.rsrp += r.num("rsrp");
    a.sinr += r.num("sinr");
    a.n += 1;
  }
  std::map<GridIndex, GridSummary> out;
  for (const auto& [cell, a] : accs) {
    double n = static_cast<double>(a.n);
    out[cell] = {a.rtt / n, a.rsrp / n, a.sinr / n, a.n};
  }
  return out;
}

void FusedFeatures::validate() const {
  if (!std::isfinite(tcp_rtt_ms) || tcp_rtt_ms < 0.0)
    raise(Errc::ValidationError, "tcp_rtt_ms must be finite and non-negative");
  if (!std::isfinite(packet_loss) || packet_loss < 0.0 || packet_loss > 1.0)
    raise(Errc::ValidationError, "packet_loss must be a fraction in [0, 1]");
  if (!std::isfinite(sinr_db) || !std::isfinite(rsrp_dbm))
    raise(Errc::ValidationError, "radio metrics must be finite");
  if (!std::isfinite(speed_kmh) || speed_kmh < 0.0)
    raise(Errc::ValidationError, "speed_kmh must be finite and non-negative");
}

FusedFeatures fuse_features(const UeWindow& w, sim::SimTime from, sim::SimTime to) {
  auto inside = [&](sim::SimTime at) { return from <= at && at < to; };

  FusedFeatures f;
  std::uint64_t n_app = 0;
  for (const auto& s : w.app) {
    if (!inside(s.at)) continue;
    f.tcp_rtt_ms += s.tcp_rtt_ms;
    f.packet_loss += s.packet_loss;
    ++n_app;
  }
  if (n_app == 0) raise(Errc::MissingDomain, "no APP samples in window");
  f.tcp_rtt_ms /= static_cast<double>(n_app);
  f.packet_loss /= static_cast<double>(n_app);

  std::uint64_t n_ran = 0;
  for (const auto& s : w.ran) {
    if (!inside(s.at)) continue;
    f.sinr_db += s.sinr_db;
    f.rsrp_dbm += s.rsrp_dbm;
    f.handover_failures += s.handover_failures;
    ++n_ran;
  }
  if (n_ran == 0) raise(Errc::MissingDomain, "no RAN samples in window");
  f.sinr_db /= static_cast<double>(n_ran);
  f.rsrp_dbm /= static_cast<double>(n_ran);

  if (!w.ue) raise(Errc::MissingDomain, "no UE profile in window");
  f.device_class = w.ue->device_class;
  f.battery_low = w.ue->battery_low;

  std::set<GridIndex> cells;
  std::uint64_t n_mob = 0;
  for (const auto& s : w.mob) {
    if (!inside(s.at)) continue;
    cells.insert(grid_index(s.x_m, s.y_m));
    f.speed_kmh += s.speed_kmh;
    ++n_mob;
  }
  if (n_mob == 0) raise(Errc::MissingDomain, "no MOB samples in window");
  f.grids_visited = static_cast<std::uint32_t>(cells.size());
  f.speed_kmh /= static_cast<double>(n_mob);

  f.validate();
  return f;
}

std::array<double, kFeatureCount> featurize(const FusedFeatures& f) {
  return {f.tcp_rtt_ms,
          f.packet_loss,
          f.sinr_db,
          f.rsrp_dbm,
          static_cast<double>(f.handover_failures),
          static_cast<double>(f.device_class),
          f.battery_low ? 1.0 : 0.0,
          static_cast<double>(f.grids_visited),
          f.speed_kmh};
}

const std::array<const char*, kFeatureCount>& feature_names() {
  static const std::array<const char*, kFeatureCount> names = {
      "tcp_rtt_ms",    "packet_loss",  "sinr_db",       "rsrp_dbm", "handover_failures",
      "device_class",  "battery_low",  "grids_visited", "speed_kmh"};
  return names;
}

std::string to_string(RootCause c) {
  switch (c) {
    case RootCause::WeakCoverage: return "WEAK_COVERAGE";
    case RootCause::Interference: return "INTERFERENCE";
    case RootCause::HandoverFailure: return "HANDOVER_FAILURE";
    case RootCause::Congestion: return "CONGESTION";
    case RootCause::Normal: return "NORMAL";
  }
  return "?";
}

std::string to_string(UserType t) {
  switch (t) {
    case UserType::Indoor: return "INDOOR";
    case UserType::Outdoor: return "OUTDOOR";
    case UserType::HighSpeed: return "HIGH_SPEED";
  }
  return "?";
}

RcaLabel rule_baseline(const FusedFeatures& f, double grid_median_rtt_ms) {
  RootCause cause;
  if (f.rsrp_dbm < -110.0) {
    cause = RootCause::WeakCoverage;
  } else if (f.rsrp_dbm >= -100.0 && f.sinr_db < 0.0) {
    cause = RootCause::Interference;
  } else if (f.handover_failures > 0) {
    cause = RootCause::HandoverFailure;
  } else if (f.tcp_rtt_ms > 2.0 * grid_median_rtt_ms && f.rsrp_dbm >= -105.0 && f.sinr_db >= 0.0) {
    // healthy radio: the delay is not explained by coverage or interference
    cause = RootCause::Congestion;
  } else {
    cause = RootCause::Normal;
  }
  UserType type = f.speed_kmh < 1.0   ? UserType::Indoor
                  : f.speed_kmh <= 80.0 ? UserType::Outdoor
                                        : UserType::HighSpeed;
  return {cause, type};
}

void TreeConfig::validate() const {
  if (max_depth < 1) raise(Errc::ValidationError, "max_depth must be >= 1");
  if (min_leaf < 1) raise(Errc::ValidationError, "min_leaf must be >= 1");
  if (tree_count < 1) raise(Errc::ValidationError, "tree_count must be >= 1");
}

namespace detail {

int Forest::predict(const double* x) const {
  std::vector<std::uint32_t> votes(klasses, 0);
  for (const auto& tree : trees) {
    std::int32_t at = 0;
    while (tree[static_cast<std::size_t>(at)].feature >= 0) {
      const TreeNode& nd = tree[static_cast<std::size_t>(at)];
      at = x[nd.feature] <= nd.threshold ? nd.left : nd.right;
    }
    ++votes[static_cast<std::size_t>(tree[static_cast<std::size_t>(at)].klass)];
  }
  return static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

std::uint64_t Forest::node_count() const {
  std::uint64_t n = 0;
  for (const auto& tree : trees) n += tree.size();
  return n;
}

namespace {

using Row = std::array<double, kFeatureCount>;

double gini(const std::vector<std::uint64_t>& counts, std::uint64_t n) {
  double g = 1.0;
  for (std::uint64_t c : counts) {
    double p = static_cast<double>(c) / static_cast<double>(n);
    g -= p * p;
  }
  return g;
}

struct Grower {
  const std::vector<Row>& x;
  const std::vector<int>& y;
  std::size_t klasses;
  const TreeConfig& cfg;
  std::vector<TreeNode> nodes;

  std::int32_t leaf(const std::vector<std::uint64_t>& counts) {
    auto best = std::max_element(counts.begin(), counts.end());  // tie -> lowest class
    TreeNode nd;
    nd.klass = static_cast<std::int32_t>(best - counts.begin());
    nodes.push_back(nd);
    return static_cast<std::int32_t>(nodes.size() - 1);
  }

  std::int32_t grow(std::vector<std::size_t>& idx, std::uint32_t depth) {
    std::vector<std::uint64_t> counts(klasses, 0);
    for (std::size_t i : idx) ++counts[static_cast<std::size_t>(y[i])];
    std::uint64_t n = idx.size();
    bool pure = *std::max_element(counts.begin(), counts.end()) == n;
    if (pure || depth >= cfg.max_depth || n < 2 * cfg.min_leaf) return leaf(counts);

    // Exhaustive split search: lowest weighted impurity wins; ties keep
    // the earliest candidate (lowest feature, then lowest threshold).
    double best_score = gini(counts, n);
    int best_feature = -1;
    double best_threshold = 0.0;
    std::vector<std::pair<double, int>> col(n);
    std::vector<std::uint64_t> left(klasses);
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      for (std::size_t i = 0; i < n; ++i) col[i] = {x[idx[i]][f], y[idx[i]]};
      std::sort(col.begin(), col.end());
      std::fill(left.begin(), left.end(), 0);
      for (std::size_t i = 0; i + 1 < n; ++i) {
        ++left[static_cast<std::size_t>(col[i].second)];
        if (col[i].first == col[i + 1].first) continue;
        std::uint64_t nl = i + 1, nr = n - nl;
        if (nl < cfg.min_leaf || nr < cfg.min_leaf) continue;
        std::vector<std::uint64_t> right(klasses);
        for (std::size_t k = 0; k < klasses; ++k) right[k] = counts[k] - left[k];
        double score = (static_cast<double>(nl) * gini(left, nl) +
                        static_cast<double>(nr) * gini(right, nr)) /
                       static_cast<double>(n);
        if (score < best_score - 1e-12) {
          best_score = score;
          best_feature = static_cast<int>(f);
          best_threshold = (col[i].first + col[i + 1].first) / 2.0;
        }
      }
    }
    if (best_feature < 0) return leaf(counts);

    std::vector<std::size_t> lo, hi;
    for (std::size_t i : idx) {
      (x[i][static_cast<std::size_t>(best_feature)] <= best_threshold ? lo : hi).push_back(i);
    }
    idx.clear();
    idx.shrink_to_fit();
    TreeNode nd;
    nd.feature = best_feature;
    nd.threshold = best_threshold;
    nodes.push_back(nd);
    std::int32_t self = static_cast<std::int32_t>(nodes.size() - 1);
    std::int32_t l = grow(lo, depth + 1);
    std::int32_t r = grow(hi, depth + 1);
    nodes[static_cast<std::size_t>(self)].left = l;
    nodes[static_cast<std::size_t>(self)].right = r;
    return self;
  }
};

Forest grow_forest(const std::vector<Row>& x, const std::vector<int>& y, std::size_t klasses,
                   const TreeConfig& cfg, std::uint64_t stream) {
  Forest out;
  out.klasses = klasses;
  sim::Rng boot(cfg.seed ^ (0x9e3779b97f4a7c15ull * (stream + 1)));
  for (std::size_t t = 0; t < cfg.tree_count; ++t) {
    std::vector<std::size_t> idx(x.size());
    if (cfg.tree_count == 1) {
      for (std::size_t i = 0; i < x.size(); ++i) idx[i] = i;  // exact fit, no resampling
    } else {
      for (std::size_t i = 0; i < x.size(); ++i)
        idx[i] = static_cast<std::size_t>(boot.below(x.size()));
    }
    Grower g{x, y, klasses, cfg, {}};
    g.grow(idx, 0);
    out.trees.push_back(std::move(g.nodes));
  }
  return out;
}

}  // namespace
}  // namespace detail

RcaLabel RcaClassifier::diagnose(const FusedFeatures& f) const {
  f.validate();
  auto row = featurize(f);
  return {static_cast<RootCause>(cause_.predict(row.data())),
          static_cast<UserType>(type_.predict(row.data()))};
}

RcaLabel RcaClassifier::diagnose_row(const std::vector<double>& row) const {
  if (row.size() != kFeatureCount)
    raise(Errc::SchemaMismatch, "feature row carries " + std::to_string(row.size()) +
                                    " fields, model expects " + std::to_string(kFeatureCount));
  return {static_cast<RootCause>(cause_.predict(row.data())),
          static_cast<UserType>(type_.predict(row.data()))};
}

std::uint64_t RcaClassifier::parameter_count() const {
  return cause_.node_count() + type_.node_count();
}

RcaClassifier train_classifier(const std::vector<Example>& data, const TreeConfig& cfg) {
  cfg.validate();
  if (data.empty()) raise(Errc::DegenerateDataset, "empty dataset");
  std::vector<std::array<double, kFeatureCount>> x;
  std::vector<int> cause_y, type_y;
  x.reserve(data.size());
  cause_y.reserve(data.size());
  type_y.reserve(data.size());
  std::set<RootCause> causes;
  for (const auto& e : data) {
    e.features.validate();
    x.push_back(featurize(e.features));
    cause_y.push_back(static_cast<int>(e.label.root_cause));
    type_y.push_back(static_cast<int>(e.label.user_type));
    causes.insert(e.label.root_cause);
  }
  if (causes.size() < 2)
    raise(Errc::DegenerateDataset, "dataset shows a single root cause, nothing to learn");
  RcaClassifier out;
  out.cause_ = detail::grow_forest(x, cause_y, kRootCauseCount, cfg, 0);
  out.type_ = detail::grow_forest(x, type_y, kUserTypeCount, cfg, 1);
  return out;
}

void PlantedConfig::validate() const {
  if (count == 0) raise(Errc::ValidationError, "count must be positive");
  if (!(overlap >= 0.0 && overlap <= 1.0)) raise(Errc::ValidationError, "overlap must be in [0, 1]");
}

std::vector<Example> planted_dataset(const PlantedConfig& cfg) {
  cfg.validate();
  sim::Rng rng(cfg.seed);
  double g = cfg.overlap;
  std::vector<Example> out;
  out.reserve(cfg.count);
  for (std::size_t i = 0; i < cfg.count; ++i) {
    Example e;
    e.label.root_cause = static_cast<RootCause>(rng.below(kRootCauseCount));
    e.label.user_type = static_cast<UserType>(rng.below(kUserTypeCount));
    FusedFeatures& f = e.features;
    switch (e.label.root_cause) {
      case RootCause::WeakCoverage:
        f.rsrp_dbm = rng.uniform(-120.0, -110.5 + 14.0 * g);
        f.sinr_db = rng.uniform(-5.0, 4.0);
        f.tcp_rtt_ms = rng.uniform(60.0, 150.0);
        f.packet_loss = rng.uniform(0.02, 0.25);
        f.handover_failures = rng.bernoulli(0.15) ? 1 : 0;
        break;
      case RootCause::Interference:
        f.rsrp_dbm = rng.uniform(-95.0, -85.0);
        f.sinr_db = rng.uniform(-5.0, -0.5 + 8.0 * g);
        f.tcp_rtt_ms = rng.uniform(50.0, 140.0);
        f.packet_loss = rng.uniform(0.02, 0.2);
        f.handover_failures = rng.bernoulli(0.1) ? 1 : 0;
        break;
      case RootCause::HandoverFailure:
        f.rsrp_dbm = rng.uniform(-105.0, -88.0);
        f.sinr_db = rng.uniform(0.5 - 8.0 * g, 12.0);
        f.tcp_rtt_ms = rng.uniform(40.0, 130.0);
        f.packet_loss = rng.uniform(0.01, 0.15);
        f.handover_failures = 1 + static_cast<std::uint32_t>(rng.below(3));
        break;
      case RootCause::Congestion:
        f.rsrp_dbm = rng.uniform(-99.0, -85.0);
        f.sinr_db = rng.uniform(3.0, 18.0);
        f.tcp_rtt_ms = rng.uniform(110.0 - 120.0 * g, 240.0);
        f.packet_loss = rng.uniform(0.0, 0.06);
        f.handover_failures = rng.bernoulli(0.30 * g) ? 1 : 0;
        break;
      case RootCause::Normal:
        f.rsrp_dbm = rng.uniform(-99.0, -80.0);
        f.sinr_db = rng.uniform(5.0, 22.0);
        f.tcp_rtt_ms = rng.uniform(20.0, 60.0 + 55.0 * g);
        f.packet_loss = rng.uniform(0.0, 0.02);
        f.handover_failures = rng.bernoulli(0.35 * g) ? 1 : 0;
        break;
    }
    switch (e.label.user_type) {
      case UserType::Indoor:
        f.speed_kmh = rng.uniform(0.0, 0.9);
        f.grids_visited = 1;
        f.device_class = static_cast<std::uint32_t>(rng.below(2));
        f.battery_low = rng.bernoulli(0.3);
        break;
      case UserType::Outdoor:
        f.speed_kmh = rng.uniform(1.5, 75.0);
        f.grids_visited = 1 + static_cast<std::uint32_t>(rng.below(5));
        f.device_class = static_cast<std::uint32_t>(rng.below(4));
        f.battery_low = rng.bernoulli(0.15);
        break;
      case UserType::HighSpeed:
        f.speed_kmh = rng.uniform(85.0, 180.0);
        f.grids_visited = 5 + static_cast<std::uint32_t>(rng.below(16));
        f.device_class = static_cast<std::uint32_t>(rng.below(4));
        f.battery_low = rng.bernoulli(0.1);
        break;
    }
    out.push_back(std::move(e));
  }
  return out;
}

CauseScores score_causes(const std::vector<RcaLabel>& truth, const std::vector<RcaLabel>& predicted) {
  if (truth.size() != predicted.size())
    raise(Errc::LengthMismatch, "truth and prediction series differ in length");
  if (truth.empty()) raise(Errc::ValidationError, "empty evaluation set");
  std::array<std::uint64_t, kRootCauseCount> tp{}, fp{}, fn{};
  std::uint64_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    auto t = static_cast<std::size_t>(truth[i].root_cause);
    auto p = static_cast<std::size_t>(predicted[i].root_cause);
    if (t == p) {
      ++tp[t];
      ++hits;
    } else {
      ++fn[t];
      ++fp[p];
    }
  }
  CauseScores s;
  for (std::size_t k = 0; k < kRootCauseCount; ++k) {
    std::uint64_t seen = tp[k] + fn[k], said = tp[k] + fp[k];
    s.precision[k] = said > 0 ? static_cast<double>(tp[k]) / static_cast<double>(said)
                              : (seen > 0 ? 0.0 : 1.0);
    s.recall[k] = seen > 0 ? static_cast<double>(tp[k]) / static_cast<double>(seen)
                           : (said > 0 ? 0.0 : 1.0);
    s.macro_precision += s.precision[k];
    s.macro_recall += s.recall[k];
  }
  s.macro_precision /= static_cast<double>(kRootCauseCount);
  s.macro_recall /= static_cast<double>(kRootCauseCount);
  s.accuracy = static_cast<double>(hits) / static_cast<double>(truth.size());
  return s;
}

TrainedRca train_on_pool(model::Registry& reg, const std::string& dataset_id,
                         const std::vector<Example>& data, const TreeConfig& cfg,
                         const std::vector<collab::ComputeCapability>& pool, sim::SimTime now,
                         std::uint32_t version) {
  collab::ComputeTask job;
  job.task_id = "rca-train-" + dataset_id;
  job.kind = collab::TaskKind::Training;
  job.demand = static_cast<double>(data.size());  // one compute unit per example
  job.deadline = now + sim::SimTime::sec(3600);
  job.priority = 5;
  job.origin = sim::NodeId::ai_node();
  auto sched = collab::schedule_pool({job}, pool, now);
  if (sched.assignments.empty()) {
    std::string why = sched.rejections.empty() ? "empty pool" : sched.rejections.front().reason;
    raise(Errc::ValidationError, "training job not placed: " + why);
  }

  TrainedRca out{train_classifier(data, cfg), 0, sched.assignments.front()};
  reg.register_dataset(dataset_id);
  model::ModelDescriptor desc;
  desc.model_id = "rca-classifier";
  desc.version = version;
  desc.use_case = model::UseCase::Rca;
  desc.lineage = {dataset_id};
  desc.parameter_count = out.classifier.parameter_count();
  desc.layer = model::TargetLayer::L3;
  desc.host = sim::NodeId::ai_node();
  out.handle = reg.register_model(desc, now);
  reg.transition(out.handle, model::Command::TrainDone, out.placement.finish);
  return out;
}

}  // namespace airan::rca
