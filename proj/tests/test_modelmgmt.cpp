#include "doctest.h"

#include <string>
#include <vector>

#include "airan/model/registry.hpp"
#include "airan/sim/rng.hpp"

using namespace airan;
using namespace airan::model;
using sim::SimTime;

namespace {

ModelDescriptor qos_model(std::uint32_t version) {
  ModelDescriptor d;
  d.model_id = "qos-weights";
  d.version = version;
  d.use_case = UseCase::Qos;
  d.lineage = {"ds-qos-1"};
  d.parameter_count = 128;
  d.host = sim::NodeId::ai_node();
  return d;
}

// Drives a freshly registered model to ACTIVE.
ModelHandle activate(Registry& reg, ModelDescriptor desc, SimTime t) {
  reg.register_dataset("ds-qos-1");
  const ModelHandle h = reg.register_model(std::move(desc), t);
  reg.transition(h, Command::TrainDone, t);
  reg.transition(h, Command::ValidatePass, t);
  reg.transition(h, Command::Deploy, t);
  reg.transition(h, Command::Activate, t);
  return h;
}

MonitoringReport window(const ModelDescriptor& d, SimTime start, double accuracy) {
  MonitoringReport r;
  r.model_id = d.model_id;
  r.version = d.version;
  r.window_start = start;
  r.window_end = start + kMonitorWindow;
  r.model_metrics = {{"accuracy", accuracy}, {"inference_latency_ms", 2.0}};
  r.network_metrics = {{"packet_loss_rate", 0.01}, {"handover_failure_count", 0.0}};
  r.resource_metrics = {{"compute_utilization", 0.4}, {"storage_bits", 1e6}};
  return r;
}

}  // namespace

TEST_CASE("registration is unique per (model, version) and scannable") {
  Registry reg;
  const ModelHandle h1 = reg.register_model(qos_model(1), SimTime::zero());
  CHECK(reg.state(h1) == LifecycleState::Registered);
  CHECK_THROWS_AS(reg.register_model(qos_model(1), SimTime::zero()), Error);
  try {
    reg.register_model(qos_model(1), SimTime::zero());
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DuplicateVersion);
  }

  const ModelHandle h2 = reg.register_model(qos_model(2), SimTime::sec(1));
  CHECK(reg.handle_of("qos-weights", 1) == h1);
  CHECK(reg.handle_of("qos-weights", 2) == h2);
  REQUIRE(reg.latest("qos-weights").has_value());

  // Repository oracle: latest == maximum version over a straight scan.
  std::uint32_t best = 0;
  for (ModelHandle h = 0; h < reg.size(); ++h)
    if (reg.descriptor(h).model_id == "qos-weights")
      best = std::max(best, reg.descriptor(h).version);
  CHECK(reg.descriptor(*reg.latest("qos-weights")).version == best);
  CHECK(best == 2);

  CHECK(reg.by_use_case(UseCase::Qos).size() == 2);
  CHECK(reg.by_use_case(UseCase::Rca).empty());
}

TEST_CASE("lifecycle walks the full path and rejects shortcuts") {
  Registry reg;
  reg.register_dataset("ds-qos-1");
  const ModelHandle h = reg.register_model(qos_model(1), SimTime::zero());

  // Skipping validation is protocol misuse.
  CHECK_THROWS_AS(reg.transition(h, Command::Activate, SimTime::sec(1)), Error);
  try {
    reg.transition(h, Command::Activate, SimTime::sec(1));
  } catch (const Error& e) {
    CHECK(e.code() == Errc::InvalidTransition);
  }

  CHECK(reg.transition(h, Command::TrainDone, SimTime::sec(2)) == LifecycleState::Trained);
  CHECK(reg.transition(h, Command::ValidatePass, SimTime::sec(3)) == LifecycleState::Validated);
  CHECK(reg.transition(h, Command::Deploy, SimTime::sec(4)) == LifecycleState::Deployed);
  CHECK(reg.transition(h, Command::Activate, SimTime::sec(5)) == LifecycleState::Active);

  // Registration plus exactly four lifecycle steps, each stamped.
  const std::vector<StateEvent>& hist = reg.history(h);
  REQUIRE(hist.size() == 5);
  CHECK(hist[0].state == LifecycleState::Registered);
  CHECK(hist[1].state == LifecycleState::Trained);
  CHECK(hist[2].state == LifecycleState::Validated);
  CHECK(hist[3].state == LifecycleState::Deployed);
  CHECK(hist[4].state == LifecycleState::Active);
  CHECK(hist[4].at == SimTime::sec(5));

  // An ACTIVE model cannot be retired, only deactivated first.
  CHECK_THROWS_AS(reg.transition(h, Command::Retire, SimTime::sec(6)), Error);
  CHECK(reg.transition(h, Command::Deactivate, SimTime::sec(6)) == LifecycleState::Inactive);
  CHECK(reg.transition(h, Command::Activate, SimTime::sec(7)) == LifecycleState::Active);
  CHECK(reg.transition(h, Command::Deactivate, SimTime::sec(8)) == LifecycleState::Inactive);
  CHECK(reg.transition(h, Command::Retire, SimTime::sec(9)) == LifecycleState::Retired);
}

TEST_CASE("failed validation returns the model to registered") {
  Registry reg;
  const ModelHandle h = reg.register_model(qos_model(1), SimTime::zero());
  reg.transition(h, Command::TrainDone, SimTime::sec(1));
  CHECK(reg.transition(h, Command::ValidateFail, SimTime::sec(2)) ==
        LifecycleState::Registered);
  // The path can be rewalked after retraining.
  reg.transition(h, Command::TrainDone, SimTime::sec(3));
  CHECK(reg.transition(h, Command::ValidatePass, SimTime::sec(4)) ==
        LifecycleState::Validated);
}

TEST_CASE("training requires lineage and activation requires registered datasets") {
  Registry reg;
  ModelDescriptor orphan = qos_model(1);
  orphan.lineage.clear();
  const ModelHandle h = reg.register_model(orphan, SimTime::zero());
  CHECK_THROWS_AS(reg.transition(h, Command::TrainDone, SimTime::sec(1)), Error);

  ModelDescriptor ghost = qos_model(2);
  ghost.lineage = {"ds-unregistered"};
  const ModelHandle g = reg.register_model(ghost, SimTime::zero());
  reg.transition(g, Command::TrainDone, SimTime::sec(1));
  reg.transition(g, Command::ValidatePass, SimTime::sec(2));
  reg.transition(g, Command::Deploy, SimTime::sec(3));
  CHECK_THROWS_AS(reg.transition(g, Command::Activate, SimTime::sec(4)), Error);
  reg.register_dataset("ds-unregistered");
  CHECK(reg.transition(g, Command::Activate, SimTime::sec(5)) == LifecycleState::Active);
}

TEST_CASE("activation never moves a model id to a lower version") {
  Registry reg;
  const ModelHandle v2 = activate(reg, qos_model(2), SimTime::zero());
  reg.transition(v2, Command::Deactivate, SimTime::sec(10));

  const ModelHandle v1 = reg.register_model(qos_model(1), SimTime::sec(11));
  reg.transition(v1, Command::TrainDone, SimTime::sec(12));
  reg.transition(v1, Command::ValidatePass, SimTime::sec(13));
  reg.transition(v1, Command::Deploy, SimTime::sec(14));
  CHECK_THROWS_AS(reg.transition(v1, Command::Activate, SimTime::sec(15)), Error);

  // Same version may re-activate after a deactivation.
  CHECK(reg.transition(v2, Command::Activate, SimTime::sec(16)) == LifecycleState::Active);
}

TEST_CASE("performance-triggered fallback fires on the k-th consecutive breach") {
  Registry reg;
  const ModelHandle h = activate(reg, qos_model(1), SimTime::zero());
  const ModelDescriptor& d = reg.descriptor(h);

  RetrainPolicy policy;
  policy.mode = RetrainMode::PerformanceTriggered;
  policy.metric = "accuracy";
  policy.bound = 0.8;
  policy.consecutive_windows = 3;

  SimTime t = SimTime::zero();
  auto step = [&](double acc) {
    const MonitorAction a = reg.monitor(h, window(d, t, acc), policy);
    t += kMonitorWindow;
    return a;
  };

  CHECK(step(0.85) == MonitorAction::None);
  CHECK(step(0.75) == MonitorAction::None);
  CHECK(step(0.75) == MonitorAction::None);
  CHECK(step(0.75) == MonitorAction::Fallback);
  CHECK(reg.state(h) == LifecycleState::Inactive);
  CHECK(reg.fallback_engaged(h));
  CHECK_FALSE(reg.serving_model(UseCase::Qos).has_value());
  CHECK(reg.fallback_active(UseCase::Qos));

  // Monitoring a non-active model is a protocol error.
  CHECK_THROWS_AS(reg.monitor(h, window(d, t, 0.9), policy), Error);

  // A fresh version going ACTIVE ends the fallback.
  const ModelHandle next = activate(reg, qos_model(2), t);
  CHECK(reg.serving_model(UseCase::Qos) == next);
  CHECK_FALSE(reg.fallback_active(UseCase::Qos));
}

TEST_CASE("non-consecutive breaches never trip the fallback") {
  Registry reg;
  const ModelHandle h = activate(reg, qos_model(1), SimTime::zero());
  const ModelDescriptor& d = reg.descriptor(h);

  RetrainPolicy policy;
  policy.metric = "accuracy";
  policy.bound = 0.8;
  policy.consecutive_windows = 3;

  SimTime t = SimTime::zero();
  for (double acc : {0.75, 0.85, 0.75, 0.85, 0.75}) {
    CHECK(reg.monitor(h, window(d, t, acc), policy) == MonitorAction::None);
    t += kMonitorWindow;
  }
  CHECK(reg.state(h) == LifecycleState::Active);
}

TEST_CASE("periodic retraining fires once per period regardless of metrics") {
  Registry reg;
  const ModelHandle h = activate(reg, qos_model(1), SimTime::zero());
  const ModelDescriptor& d = reg.descriptor(h);

  RetrainPolicy policy;
  policy.mode = RetrainMode::Periodic;
  policy.period = SimTime::minutes(15);

  int fired = 0;
  for (int w = 0; w < 60; ++w) {  // one hour of 60 s windows
    const MonitorAction a =
        reg.monitor(h, window(d, SimTime::sec(w * 60), 0.99), policy);
    if (a == MonitorAction::RetrainRequested) ++fired;
  }
  CHECK(fired == 4);
}

TEST_CASE("monitoring reports are validated before use") {
  Registry reg;
  const ModelHandle h = activate(reg, qos_model(1), SimTime::zero());
  const ModelDescriptor& d = reg.descriptor(h);
  RetrainPolicy policy;
  policy.metric = "accuracy";
  policy.bound = 0.5;

  MonitoringReport bad = window(d, SimTime::sec(60), 0.9);
  bad.window_end = bad.window_start;
  CHECK_THROWS_AS(reg.monitor(h, bad, policy), Error);

  MonitoringReport frac = window(d, SimTime::sec(60), 0.9);
  frac.resource_metrics["compute_utilization"] = 1.2;
  CHECK_THROWS_AS(reg.monitor(h, frac, policy), Error);

  MonitoringReport wrong = window(d, SimTime::sec(60), 0.9);
  wrong.version = 99;
  CHECK_THROWS_AS(reg.monitor(h, wrong, policy), Error);

  RetrainPolicy no_metric = policy;
  no_metric.metric = "does_not_exist";
  CHECK_THROWS_AS(reg.monitor(h, window(d, SimTime::sec(60), 0.9), no_metric), Error);
}

TEST_CASE("held-out validation gates deployment") {
  Registry reg;
  auto make_trained = [&](std::uint32_t v) {
    const ModelHandle h = reg.register_model(qos_model(v), SimTime::zero());
    reg.transition(h, Command::TrainDone, SimTime::sec(1));
    return h;
  };

  std::vector<collect::DataRecord> held_out;
  for (int i = 0; i < 10; ++i) {
    collect::DataRecord r;
    r.gnb = sim::NodeId::gnb(0);
    r.attrs = {{"sinr", i < 5 ? -5.0 : 15.0}, {"label", i < 5 ? 0.0 : 1.0}};
    held_out.push_back(r);
  }

  ValidationSpec perfect;
  perfect.metric = MetricKind::Accuracy;
  perfect.bound = 0.9;
  perfect.predict = [](const collect::DataRecord& r) { return r.num("sinr") > 0 ? 1.0 : 0.0; };

  const ModelHandle good = make_trained(1);
  const ValidationResult ok = reg.validate(good, held_out, perfect, SimTime::sec(2));
  CHECK(ok.passed);
  CHECK(ok.metric_value == doctest::Approx(1.0));
  CHECK(reg.state(good) == LifecycleState::Validated);

  // A constant predictor on a balanced two-class set scores exactly 0.5.
  ValidationSpec constant = perfect;
  constant.predict = [](const collect::DataRecord&) { return 1.0; };
  const ModelHandle bad = make_trained(2);
  const ValidationResult fail = reg.validate(bad, held_out, constant, SimTime::sec(3));
  CHECK_FALSE(fail.passed);
  CHECK(fail.metric_value == doctest::Approx(0.5));
  CHECK(reg.state(bad) == LifecycleState::Registered);

  const ModelHandle fresh = make_trained(3);
  CHECK_THROWS_AS(reg.validate(fresh, {}, perfect, SimTime::sec(4)), Error);

  // Regression flavor: mean absolute error against a tolerance.
  ValidationSpec mae;
  mae.metric = MetricKind::MeanAbsError;
  mae.label_attr = "label";
  mae.bound = 0.2;
  mae.predict = [](const collect::DataRecord& r) { return r.num("label") + 0.1; };
  const ValidationResult reg_ok = reg.validate(fresh, held_out, mae, SimTime::sec(5));
  CHECK(reg_ok.passed);
  CHECK(reg_ok.metric_value == doctest::Approx(0.1));
}

TEST_CASE("model context follows the ue across handovers") {
  Registry reg;
  reg.set_ue_context(0, 7, {"qos-weights", 3});
  REQUIRE(reg.ue_context(0, 7) != nullptr);

  reg.sync_model_context(7, 0, 1);
  const ModelContext* moved = reg.ue_context(1, 7);
  REQUIRE(moved != nullptr);
  CHECK(moved->model_id == "qos-weights");
  CHECK(moved->version == 3);
  CHECK(reg.ue_context(0, 7) == nullptr);

  try {
    reg.sync_model_context(9, 0, 1);  // ue9 has no context anywhere
    FAIL("expected missing context");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ContextMissing);
  }
}

TEST_CASE("random handover chains keep the context version intact") {
  Registry reg;
  sim::Rng rng(17);
  std::uint32_t at = 2;
  reg.set_ue_context(at, 42, {"qos-weights", 5});

  int mismatches = 0;
  for (int i = 0; i < 200; ++i) {
    std::uint32_t next = static_cast<std::uint32_t>(rng.below(8));
    if (next == at) next = (next + 1) % 8;
    reg.sync_model_context(42, at, next);
    at = next;
    const ModelContext* ctx = reg.ue_context(at, 42);
    if (!ctx || ctx->model_id != "qos-weights" || ctx->version != 5) ++mismatches;
  }
  CHECK(mismatches == 0);
}
