#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "airan/energy/model.hpp"
#include "airan/error.hpp"
#include "airan/sim/rng.hpp"
#include "airan/sim/time.hpp"

namespace airan::scenario {

/// Application catalog entry the traffic mix and assurance loop share.
struct AppDecl {
  std::string name;
  double base_latency_ms = 0.0;
  bool operator==(const AppDecl&) const = default;
};

struct TrafficApp {
  std::string app;  // references a declared AppDecl
  double rate_per_ue_hz = 0.0;
  std::uint64_t size_bits = 8000;
  bool delay_tolerant = false;
  bool operator==(const TrafficApp&) const = default;
};

struct TrafficBlock {
  std::vector<TrafficApp> mix;
  double vip_fraction = 0.1;
  bool diurnal = false;      // modulate rates by the standard day shape
  double prb_low = 0.3;      // per-UE load draw band
  double prb_high = 0.5;
  double rsrp_low = -115.0;  // per-UE coverage draw range
  double rsrp_high = -85.0;
  bool operator==(const TrafficBlock&) const = default;
};

struct CollectionBlock {
  std::string filter;             // DSL expression; empty matches every record
  std::uint64_t budget_bits = 0;  // near-RT task budget per period; 0 = unlimited
  std::vector<std::string> extra_attributes;  // numeric additions to the schema
  bool operator==(const CollectionBlock&) const = default;
};

struct AssuranceBlock {
  bool enabled = false;
  double perception_accuracy = 0.95;
  double target_factor = 3.0;  // degraded when latency > factor x app base
  bool operator==(const AssuranceBlock&) const = default;
};

struct EnergyBlock {
  bool enabled = false;
  energy::EsPolicyKind policy = energy::EsPolicyKind::Baseline;
  std::uint32_t days = 1;
  double threshold = 0.3;
  bool operator==(const EnergyBlock&) const = default;
};

struct FlBlock {
  bool enabled = false;
  std::uint32_t rounds = 10;
  std::uint32_t clients = 4;  // hosted on the first N gNBs
  std::uint32_t local_steps = 2;
  double lr = 0.05;
  std::uint32_t samples_per_client = 40;
  bool operator==(const FlBlock&) const = default;
};

struct RcaBlock {
  bool enabled = false;
  std::uint32_t train = 1500;
  std::uint32_t test = 600;
  double overlap = 0.1;
  bool operator==(const RcaBlock&) const = default;
};

struct MonitoringBlock {
  bool enabled = false;
  std::string metric = "accuracy";
  double bound = 0.5;
  std::uint32_t consecutive = 3;
  bool operator==(const MonitoringBlock&) const = default;
};

/// A full experiment description: network shape, app catalog, traffic
/// process, per-loop policy blocks, seed, and horizon.
struct Scenario {
  std::string name = "custom";
  std::uint32_t gnbs = 2;
  std::uint32_t ues_per_gnb = 10;
  std::vector<AppDecl> apps;
  TrafficBlock traffic;
  CollectionBlock collection;
  AssuranceBlock assurance;
  EnergyBlock energy;
  FlBlock fl;
  RcaBlock rca;
  MonitoringBlock monitoring;
  std::uint64_t seed = 1;
  std::int64_t horizon_s = 600;

  std::uint32_t ue_count() const { return gnbs * ues_per_gnb; }
  sim::SimTime horizon() const { return sim::SimTime::sec(horizon_s); }

  /// Cross-checks every block; throws ValidationError naming the failing
  /// constraint.
  void validate() const;

  bool operator==(const Scenario&) const = default;
};

/// The default application catalog (name, base latency under no load).
std::vector<AppDecl> standard_apps();

/// Parses and validates a scenario file. Syntax problems raise ParseError
/// carrying path and line; semantic problems raise ValidationError.
Scenario load_scenario(const std::string& path);

/// Same, from in-memory text; `origin` labels error messages.
Scenario parse_scenario(const std::string& text, const std::string& origin);

/// Canonical textual form; parse_scenario(serialize(sc)) == sc.
std::string serialize(const Scenario& sc);

/// Bundled presets: four environments x three load bands, plus the
/// multi-day "energy_diurnal" saving scenario.
std::vector<std::string> preset_names();
Scenario preset(const std::string& name);

/// Sets one dotted-path field (e.g. "policies.energy.policy=PREDICTIVE",
/// "seed=7", "traffic.vip_fraction=0.3") and revalidates. Used by the
/// sweep driver; throws ValidationError for unknown paths or bad values.
Scenario with_param(const Scenario& sc, const std::string& dotted_path, const std::string& value);

// --- traffic generation ---

/// Static per-UE state drawn from the traffic seed stream only, so policy
/// toggles can never shift it.
struct UeState {
  double rsrp_dbm = -95.0;
  double prb_util = 0.3;
  double x_m = 0.0;
  double y_m = 0.0;
  double speed_kmh = 3.0;
  std::uint32_t device_class = 0;
  bool battery_low = false;
  bool vip = false;
};

std::vector<UeState> draw_ue_states(const Scenario& sc);

struct Arrival {
  sim::SimTime at{};
  std::uint32_t ue = 0;
  std::uint16_t app = 0;  // index into Scenario::apps
  std::uint64_t size_bits = 0;
  bool vip = false;
  bool operator==(const Arrival&) const = default;
};

/// Per-UE Poisson arrival processes with optional diurnal thinning,
/// deterministic in (scenario traffic block, seed) alone.
std::vector<Arrival> generate_traffic(const Scenario& sc);

}  // namespace airan::scenario
