#pragma once

#include <map>
#include <string>
#include <vector>

#include "airan/assure/qos.hpp"
#include "airan/scenario/scenario.hpp"
#include "airan/sim/engine.hpp"

namespace airan::scenario {

/// One served traffic arrival with the quality it experienced under the
/// action applied at that moment.
struct LatencyRow {
  sim::SimTime at{};
  std::uint32_t ue = 0;
  std::uint16_t app = 0;  // index into Scenario::apps
  bool vip = false;
  bool assured = false;  // a non-default action was in force
  double prb_util = 0.0;
  double rsrp_dbm = 0.0;
  double latency_ms = 0.0;
};

/// Run summary: scalar KPIs plus a content hash over the engine's event
/// trace and every export line, so two runs agree iff the hash does.
struct MetricsDigest {
  std::string run_id;
  std::map<std::string, double> kpis;
  std::string hash_hex;
  sim::RunStats stats;

  double kpi(const std::string& name) const;  // ValidationError when absent
};

struct ExperimentResult {
  MetricsDigest digest;
  std::vector<Arrival> arrivals;
  std::vector<LatencyRow> latency;
  std::vector<assure::AssuranceRow> assurance_log;
};

/// Executes a scenario end to end: traffic through the event engine,
/// telemetry collection, and whichever closed loops the scenario enables
/// (assurance, monitoring, federation, diagnosis, energy saving). When
/// `out_dir` is non-empty the metrics exports are written there; the
/// digest hash covers the same content either way.
ExperimentResult run_experiment_detail(const Scenario& sc, const std::string& out_dir = "");

MetricsDigest run_experiment(const Scenario& sc, const std::string& out_dir = "");

}  // namespace airan::scenario
