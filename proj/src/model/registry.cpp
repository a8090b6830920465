#include "airan/model/registry.hpp"

#include <algorithm>
#include <cmath>

namespace airan::model {

std::string to_string(UseCase u) {
  switch (u) {
    case UseCase::EnergySaving: return "ENERGY_SAVING";
    case UseCase::Qos: return "QOS";
    case UseCase::Rca: return "RCA";
    case UseCase::Mobility: return "MOBILITY";
  }
  return "?";
}

std::string to_string(LifecycleState s) {
  switch (s) {
    case LifecycleState::Registered: return "REGISTERED";
    case LifecycleState::Trained: return "TRAINED";
    case LifecycleState::Validated: return "VALIDATED";
    case LifecycleState::Deployed: return "DEPLOYED";
    case LifecycleState::Active: return "ACTIVE";
    case LifecycleState::Inactive: return "INACTIVE";
    case LifecycleState::Retired: return "RETIRED";
  }
  return "?";
}

std::string to_string(Command c) {
  switch (c) {
    case Command::TrainDone: return "TRAIN_DONE";
    case Command::ValidatePass: return "VALIDATE_PASS";
    case Command::ValidateFail: return "VALIDATE_FAIL";
    case Command::Deploy: return "DEPLOY";
    case Command::Activate: return "ACTIVATE";
    case Command::Deactivate: return "DEACTIVATE";
    case Command::Retire: return "RETIRE";
  }
  return "?";
}

std::string to_string(MonitorAction a) {
  switch (a) {
    case MonitorAction::None: return "NONE";
    case MonitorAction::RetrainRequested: return "RETRAIN_REQUESTED";
    case MonitorAction::Fallback: return "FALLBACK";
  }
  return "?";
}

namespace {

// Metric names whose values are fractions and must stay inside [0,1].
const std::set<std::string> kFractionMetrics = {"accuracy", "packet_loss_rate",
                                                "compute_utilization"};

void check_fractions(const std::map<std::string, double>& metrics) {
  for (const auto& [name, value] : metrics)
    if (kFractionMetrics.count(name) && (value < 0.0 || value > 1.0))
      raise(Errc::ValidationError, "metric " + name + " must lie in [0,1]");
}

}  // namespace

void MonitoringReport::validate() const {
  if (!(window_end > window_start))
    raise(Errc::ValidationError, "monitoring window must have positive length");
  check_fractions(model_metrics);
  check_fractions(network_metrics);
  check_fractions(resource_metrics);
}

std::optional<double> MonitoringReport::metric(const std::string& name) const {
  for (const auto* m : {&model_metrics, &network_metrics, &resource_metrics})
    if (auto it = m->find(name); it != m->end()) return it->second;
  return std::nullopt;
}

void RetrainPolicy::validate() const {
  if (consecutive_windows < 1)
    raise(Errc::ValidationError, "retrain policy needs consecutive_windows >= 1");
  if (mode == RetrainMode::Periodic && period.us <= 0)
    raise(Errc::ValidationError, "periodic retraining needs a positive period");
}

Registry::Entry& Registry::entry(ModelHandle h) {
  if (h >= entries_.size()) raise(Errc::ValidationError, "unknown model handle");
  return entries_[h];
}

const Registry::Entry& Registry::entry(ModelHandle h) const {
  if (h >= entries_.size()) raise(Errc::ValidationError, "unknown model handle");
  return entries_[h];
}

void Registry::set_state(Entry& e, LifecycleState s, sim::SimTime now) {
  e.state = s;
  e.history.push_back({now, s});
}

ModelHandle Registry::register_model(ModelDescriptor desc, sim::SimTime now) {
  const auto key = std::make_pair(desc.model_id, desc.version);
  if (by_key_.count(key))
    raise(Errc::DuplicateVersion,
          desc.model_id + " v" + std::to_string(desc.version) + " already registered");
  const ModelHandle h = static_cast<ModelHandle>(entries_.size());
  Entry e;
  e.desc = std::move(desc);
  e.history.push_back({now, LifecycleState::Registered});
  entries_.push_back(std::move(e));
  by_key_[key] = h;
  return h;
}

LifecycleState Registry::transition(ModelHandle h, Command cmd, sim::SimTime now) {
  Entry& e = entry(h);
  const LifecycleState from = e.state;
  auto illegal = [&]() -> LifecycleState {
    raise(Errc::InvalidTransition,
          e.desc.model_id + " v" + std::to_string(e.desc.version) + ": " + to_string(cmd) +
              " in state " + to_string(from));
  };

  switch (cmd) {
    case Command::TrainDone:
      if (from != LifecycleState::Registered) return illegal();
      if (e.desc.lineage.empty())
        raise(Errc::ValidationError,
              e.desc.model_id + ": a trained model needs a dataset lineage");
      set_state(e, LifecycleState::Trained, now);
      break;
    case Command::ValidatePass:
      if (from != LifecycleState::Trained) return illegal();
      set_state(e, LifecycleState::Validated, now);
      break;
    case Command::ValidateFail:
      if (from != LifecycleState::Trained) return illegal();
      set_state(e, LifecycleState::Registered, now);
      break;
    case Command::Deploy:
      if (from != LifecycleState::Validated) return illegal();
      set_state(e, LifecycleState::Deployed, now);
      break;
    case Command::Activate: {
      if (from != LifecycleState::Deployed && from != LifecycleState::Inactive)
        return illegal();
      for (const std::string& d : e.desc.lineage)
        if (!datasets_.count(d))
          raise(Errc::ValidationError,
                e.desc.model_id + ": lineage references unregistered dataset " + d);
      auto it = max_activated_.find(e.desc.model_id);
      if (it != max_activated_.end() && e.desc.version < it->second)
        raise(Errc::InvalidTransition,
              e.desc.model_id + ": will not activate v" + std::to_string(e.desc.version) +
                  " below already-activated v" + std::to_string(it->second));
      max_activated_[e.desc.model_id] = std::max(
          it == max_activated_.end() ? 0u : it->second, e.desc.version);
      e.fallback = false;
      e.breaches = 0;
      e.periodic_mark = now;
      set_state(e, LifecycleState::Active, now);
      break;
    }
    case Command::Deactivate:
      if (from != LifecycleState::Active) return illegal();
      set_state(e, LifecycleState::Inactive, now);
      break;
    case Command::Retire:
      if (from == LifecycleState::Active) return illegal();
      set_state(e, LifecycleState::Retired, now);
      break;
  }
  return e.state;
}

MonitorAction Registry::monitor(ModelHandle h, const MonitoringReport& report,
                                const RetrainPolicy& policy) {
  Entry& e = entry(h);
  if (e.state != LifecycleState::Active)
    raise(Errc::NotActive, e.desc.model_id + " v" + std::to_string(e.desc.version) +
                               " is " + to_string(e.state));
  report.validate();
  policy.validate();
  if (report.model_id != e.desc.model_id || report.version != e.desc.version)
    raise(Errc::ValidationError, "monitoring report does not describe this model");

  if (policy.mode == RetrainMode::Periodic) {
    if (report.window_end - e.periodic_mark >= policy.period) {
      e.periodic_mark += policy.period;
      return MonitorAction::RetrainRequested;
    }
    return MonitorAction::None;
  }

  const std::optional<double> value = report.metric(policy.metric);
  if (!value)
    raise(Errc::ValidationError, "report carries no metric named " + policy.metric);
  const bool breach = policy.breach_below ? *value < policy.bound : *value > policy.bound;
  if (!breach) {
    e.breaches = 0;
    return MonitorAction::None;
  }
  if (++e.breaches < policy.consecutive_windows) return MonitorAction::None;

  // k-th consecutive breach: stop serving, hand decisions to the non-AI
  // baseline, and ask for retraining on fresh data.
  e.breaches = 0;
  e.fallback = true;
  set_state(e, LifecycleState::Inactive, report.window_end);
  return MonitorAction::Fallback;
}

ValidationResult Registry::validate(ModelHandle h,
                                    const std::vector<collect::DataRecord>& held_out,
                                    const ValidationSpec& spec, sim::SimTime now) {
  Entry& e = entry(h);
  if (e.state != LifecycleState::Trained)
    raise(Errc::InvalidTransition,
          "validate requires TRAINED, not " + to_string(e.state));
  if (held_out.empty()) raise(Errc::EmptyValidationSet, e.desc.model_id);
  if (!spec.predict) raise(Errc::ValidationError, "validation spec has no predictor");

  double metric = 0.0;
  if (spec.metric == MetricKind::Accuracy) {
    std::size_t hits = 0;
    for (const collect::DataRecord& r : held_out)
      if (spec.predict(r) == r.num(spec.label_attr)) ++hits;
    metric = static_cast<double>(hits) / static_cast<double>(held_out.size());
  } else {
    double sum = 0.0;
    for (const collect::DataRecord& r : held_out)
      sum += std::abs(spec.predict(r) - r.num(spec.label_attr));
    metric = sum / static_cast<double>(held_out.size());
  }

  const bool passed =
      spec.metric == MetricKind::Accuracy ? metric >= spec.bound : metric <= spec.bound;
  transition(h, passed ? Command::ValidatePass : Command::ValidateFail, now);
  return {passed, metric};
}

void Registry::set_ue_context(std::uint32_t gnb, std::uint32_t ue, ModelContext ctx) {
  contexts_[{gnb, ue}] = std::move(ctx);
}

const ModelContext* Registry::ue_context(std::uint32_t gnb, std::uint32_t ue) const {
  auto it = contexts_.find({gnb, ue});
  return it == contexts_.end() ? nullptr : &it->second;
}

void Registry::sync_model_context(std::uint32_t ue, std::uint32_t from_gnb,
                                  std::uint32_t to_gnb) {
  auto it = contexts_.find({from_gnb, ue});
  if (it == contexts_.end())
    raise(Errc::ContextMissing, "ue" + std::to_string(ue) + " holds no model context at gnb" +
                                    std::to_string(from_gnb));
  contexts_[{to_gnb, ue}] = it->second;
  contexts_.erase(it);
}

ModelHandle Registry::handle_of(const std::string& model_id, std::uint32_t version) const {
  auto it = by_key_.find({model_id, version});
  if (it == by_key_.end())
    raise(Errc::ValidationError, model_id + " v" + std::to_string(version) + " not registered");
  return it->second;
}

std::optional<ModelHandle> Registry::latest(const std::string& model_id) const {
  std::optional<ModelHandle> best;
  for (ModelHandle h = 0; h < entries_.size(); ++h)
    if (entries_[h].desc.model_id == model_id &&
        (!best || entries_[h].desc.version > entries_[*best].desc.version))
      best = h;
  return best;
}

std::vector<ModelHandle> Registry::by_use_case(UseCase uc) const {
  std::vector<ModelHandle> out;
  for (ModelHandle h = 0; h < entries_.size(); ++h)
    if (entries_[h].desc.use_case == uc) out.push_back(h);
  return out;
}

std::optional<ModelHandle> Registry::serving_model(UseCase uc) const {
  std::optional<ModelHandle> best;
  for (ModelHandle h = 0; h < entries_.size(); ++h) {
    const Entry& e = entries_[h];
    if (e.desc.use_case != uc || e.state != LifecycleState::Active) continue;
    if (!best || e.desc.version > entries_[*best].desc.version) best = h;
  }
  return best;
}

bool Registry::fallback_active(UseCase uc) const {
  if (serving_model(uc)) return false;
  for (const Entry& e : entries_)
    if (e.desc.use_case == uc && e.fallback) return true;
  return false;
}

}  // namespace airan::model
