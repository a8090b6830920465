#include "airan/assure/qos.hpp"

#include <algorithm>
#include <cmath>

namespace airan::assure {

std::string to_string(MobilityState m) {
  switch (m) {
    case MobilityState::Static: return "STATIC";
    case MobilityState::Pedestrian: return "PEDESTRIAN";
    case MobilityState::Vehicular: return "VEHICULAR";
    case MobilityState::HighSpeed: return "HIGH_SPEED";
  }
  raise(Errc::Internal, "bad mobility state");
}

void UserContext::validate() const {
  if (!(rsrp >= -140.0 && rsrp <= -40.0))
    raise(Errc::ValidationError, "rsrp out of [-140, -40] dBm: " + std::to_string(rsrp));
  if (!(prb_util >= 0.0 && prb_util <= 1.0))
    raise(Errc::ValidationError, "prb_util out of [0, 1]: " + std::to_string(prb_util));
}

const std::vector<Action>& action_space() {
  static const std::vector<Action> space = [] {
    std::vector<Action> s;
    for (int w = 1; w <= kWeightLevels; ++w)
      for (double g : kGrantLevels) s.push_back({w, g});
    return s;
  }();
  return space;
}

std::size_t action_index(const Action& a) {
  if (a.scheduling_weight >= 1 && a.scheduling_weight <= kWeightLevels)
    for (std::size_t gi = 0; gi < 4; ++gi)
      if (kGrantLevels[gi] == a.resource_grant)
        return static_cast<std::size_t>(a.scheduling_weight - 1) * 4 + gi;
  raise(Errc::ValidationError, "action outside the discrete space");
}

AppCatalog::AppCatalog(std::vector<AppProfile> apps) : apps_(std::move(apps)) {
  if (apps_.empty()) raise(Errc::ValidationError, "empty application catalog");
  for (std::size_t i = 0; i < apps_.size(); ++i) {
    if (!(apps_[i].base_latency_ms > 0.0))
      raise(Errc::ValidationError, "base latency must be positive: " + apps_[i].name);
    if (!by_name_.emplace(apps_[i].name, i).second)
      raise(Errc::ValidationError, "duplicate app: " + apps_[i].name);
  }
}

AppCatalog AppCatalog::standard() {
  return AppCatalog({{"cloud_gaming", 15.0},
                     {"voip", 20.0},
                     {"video_call", 25.0},
                     {"short_video", 30.0},
                     {"web_browsing", 40.0},
                     {"file_transfer", 60.0}});
}

bool AppCatalog::contains(const std::string& name) const { return by_name_.count(name) != 0; }

std::size_t AppCatalog::index_of(const std::string& name) const {
  const auto it = by_name_.find(name);
  if (it == by_name_.end()) raise(Errc::UnknownApp, name);
  return it->second;
}

const AppProfile& AppCatalog::at(const std::string& name) const { return apps_[index_of(name)]; }

void UtilityPolicy::validate() const {
  switch (kind) {
    case UtilityKind::LatencyThreshold:
      if (!(target_ms > 0.0) || !std::isfinite(target_ms))
        raise(Errc::ValidationError, "latency target must be positive");
      if (!(penalty_slope >= 0.0) || !std::isfinite(penalty_slope))
        raise(Errc::ValidationError, "penalty slope must be finite and non-negative");
      return;
    case UtilityKind::LogThroughput:
      return;
    case UtilityKind::WeightedSum:
      if (!std::isfinite(w_latency) || !std::isfinite(w_throughput) || !std::isfinite(w_qoe))
        raise(Errc::ValidationError, "weighted-sum coefficients must be finite");
      return;
  }
  raise(Errc::Internal, "bad utility kind");
}

double UtilityPolicy::utility(const QualityPrediction& q) const {
  switch (kind) {
    case UtilityKind::LatencyThreshold:
      return -penalty_slope * std::max(q.latency_ms - target_ms, 0.0);
    case UtilityKind::LogThroughput:
      return std::log(std::max(q.throughput_bps, 1.0));
    case UtilityKind::WeightedSum:
      return w_latency * q.latency_ms + w_throughput * (q.throughput_bps / 1e6) + w_qoe * q.qoe;
  }
  raise(Errc::Internal, "bad utility kind");
}

std::string perceive_traffic(const AppCatalog& catalog, const std::string& true_app,
                             double accuracy, sim::Rng& rng) {
  if (!(accuracy >= 0.0 && accuracy <= 1.0))
    raise(Errc::ValidationError, "perception accuracy out of [0, 1]");
  const std::size_t truth = catalog.index_of(true_app);
  if (catalog.size() == 1 || rng.uniform01() < accuracy) return true_app;
  // Uniform over the other labels: draw a slot and skip past the truth.
  std::size_t slot = rng.below(catalog.size() - 1);
  if (slot >= truth) ++slot;
  return catalog.apps()[slot].name;
}

std::vector<double> label_posterior(const AppCatalog& catalog, const std::string& observed,
                                    double accuracy) {
  if (!(accuracy >= 0.0 && accuracy <= 1.0))
    raise(Errc::ValidationError, "perception accuracy out of [0, 1]");
  const std::size_t obs = catalog.index_of(observed);
  if (catalog.size() == 1) return {1.0};
  // Uniform prior + symmetric confusion makes the posterior the confusion
  // row itself.
  std::vector<double> post(catalog.size(),
                           (1.0 - accuracy) / static_cast<double>(catalog.size() - 1));
  post[obs] = accuracy;
  return post;
}

QualityPrediction predict_quality(const AppCatalog& catalog, const UserContext& ctx,
                                  const Action& action) {
  ctx.validate();
  action_index(action);  // membership check
  const double base = catalog.at(ctx.app_type).base_latency_ms;

  const double residual = std::min(std::max(ctx.prb_util - action.resource_grant, 0.0), 0.95);
  const double congestion = 1.0 / (1.0 - residual);
  const double coverage = std::max(1.0, std::exp2((-85.0 - ctx.rsrp) / 20.0));
  const double weight_factor = 1.0 + 0.25 * (action.scheduling_weight - 1);

  QualityPrediction q;
  q.latency_ms = base * congestion * coverage / weight_factor;
  const double spectral = ctx.rsrp >= -85.0 ? 200e6 : ctx.rsrp >= -105.0 ? 80e6 : 20e6;
  q.throughput_bps = action.resource_grant * spectral;
  q.qoe = 5.0 * (100.0 / (100.0 + q.latency_ms)) *
          (q.throughput_bps / (q.throughput_bps + 1e7));
  return q;
}

Action argmax_action(const std::vector<Action>& space,
                     const std::function<double(const Action&)>& expected_utility) {
  if (space.empty()) raise(Errc::ValidationError, "empty action space");
  std::size_t best = 0;
  double best_u = expected_utility(space[0]);
  for (std::size_t i = 1; i < space.size(); ++i) {
    const double u = expected_utility(space[i]);
    if (u > best_u) {
      best = i;
      best_u = u;
    }
  }
  return space[best];
}

Action select_action(const AppCatalog& catalog, const UserContext& ctx,
                     const UtilityPolicy& policy, double perception_accuracy) {
  ctx.validate();
  policy.validate();
  const std::vector<double> post = label_posterior(catalog, ctx.app_type, perception_accuracy);
  return argmax_action(action_space(), [&](const Action& a) {
    double eu = 0.0;
    for (std::size_t k = 0; k < catalog.size(); ++k) {
      if (post[k] == 0.0) continue;
      UserContext hypo = ctx;
      hypo.app_type = catalog.apps()[k].name;
      eu += post[k] * policy.utility(predict_quality(catalog, hypo, a));
    }
    return eu;
  });
}

Assurer::Assurer(AppCatalog catalog, UtilityPolicy policy, double perception_accuracy,
                 std::uint64_t seed_root)
    : catalog_(std::move(catalog)),
      policy_(std::move(policy)),
      accuracy_(perception_accuracy),
      rng_(sim::derive_stream(seed_root, sim::streams::kPerception, sim::NodeId::ai_node())) {
  policy_.validate();
  if (!(accuracy_ >= 0.0 && accuracy_ <= 1.0))
    raise(Errc::ValidationError, "perception accuracy out of [0, 1]");
}

Action Assurer::assure(const DegradationEvent& ev) {
  ev.ctx.validate();
  const std::string observed = perceive_traffic(catalog_, ev.ctx.app_type, accuracy_, rng_);

  Action chosen = kDefaultAction;
  if (ev.ctx.vip) {
    UserContext seen = ev.ctx;
    seen.app_type = observed;
    chosen = select_action(catalog_, seen, policy_, accuracy_);
    applied_[ev.ctx.ue] = chosen;
  }

  AssuranceRow row;
  row.at = ev.at;
  row.ue = ev.ctx.ue;
  row.observed_app = observed;
  row.action = chosen;
  UserContext seen = ev.ctx;
  seen.app_type = observed;
  row.predicted_latency_ms = predict_quality(catalog_, seen, chosen).latency_ms;
  row.realized_latency_ms = predict_quality(catalog_, ev.ctx, chosen).latency_ms;
  log_.push_back(row);
  return chosen;
}

Action Assurer::action_of(sim::NodeId ue) const {
  const auto it = applied_.find(ue);
  return it == applied_.end() ? kDefaultAction : it->second;
}

}  // namespace airan::assure
