#include "airan/scenario/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "airan/collab/fed.hpp"
#include "airan/collab/pool.hpp"
#include "airan/collect/tasks.hpp"
#include "airan/energy/model.hpp"
#include "airan/model/registry.hpp"
#include "airan/rca/rca.hpp"

namespace airan::scenario {

double MetricsDigest::kpi(const std::string& name) const {
  auto it = kpis.find(name);
  if (it == kpis.end()) raise(Errc::ValidationError, "no KPI named \"" + name + "\"");
  return it->second;
}

namespace {

using sim::fmt_double;

assure::MobilityState mobility_of(double speed_kmh) {
  if (speed_kmh < 1.0) return assure::MobilityState::Static;
  if (speed_kmh < 10.0) return assure::MobilityState::Pedestrian;
  if (speed_kmh <= 80.0) return assure::MobilityState::Vehicular;
  return assure::MobilityState::HighSpeed;
}

/// Radio quality proxy derived from the same coverage draw the latency
/// surrogate uses, so collected telemetry and served quality agree.
double sinr_of(double rsrp_dbm) { return (rsrp_dbm + 105.0) * 0.6; }

struct Exporter {
  std::map<std::string, std::vector<std::string>> files;

  std::vector<std::string>& file(const std::string& name) { return files[name]; }

  void fold_into(sim::Fnv64& h) const {
    for (const auto& [name, lines] : files) {
      h.update(name);
      h.update("\n");
      for (const auto& line : lines) {
        h.update(line);
        h.update("\n");
      }
    }
  }

  void write(const std::string& out_dir) const {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    for (const auto& [name, lines] : files) {
      std::ofstream out(fs::path(out_dir) / name);
      if (!out) raise(Errc::Io, "cannot write " + name + " under " + out_dir);
      for (const auto& line : lines) out << line << "\n";
    }
  }
};

struct LatencyStats {
  std::uint64_t n = 0;
  double mean = 0.0;
  double p95 = 0.0;
};

LatencyStats summarize(std::vector<double> v) {
  LatencyStats s;
  s.n = v.size();
  if (v.empty()) return s;
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = sum / static_cast<double>(v.size());
  std::sort(v.begin(), v.end());
  const std::size_t idx = static_cast<std::size_t>(
      std::ceil(0.95 * static_cast<double>(v.size()))) - 1;
  s.p95 = v[idx];
  return s;
}

// Collection tasks meter volume per reporting period; the scenario's
// "0 = unlimited" maps onto a budget no run can exhaust.
constexpr std::uint64_t kUnmeteredBits = 1'000'000'000'000ull;

std::string fmt_kpi(double v) {
  if (v == std::floor(v) && std::abs(v) < 9.0e15)
    return std::to_string(static_cast<long long>(v));
  return fmt_double(v);
}

collab::Dataset synth_linear(sim::Rng& rng, std::uint32_t samples) {
  // Shared ground truth across clients keeps the federation IID, so the
  // federated optimum matches centralized training on the pooled data.
  static constexpr double kTruth[4] = {2.0, -1.0, 0.5, 3.0};
  collab::Dataset d;
  for (std::uint32_t i = 0; i < samples; ++i) {
    std::vector<double> row(3);
    double y = kTruth[0];
    for (std::size_t j = 0; j < 3; ++j) {
      row[j] = rng.uniform(-1.0, 1.0);
      y += kTruth[j + 1] * row[j];
    }
    y += 0.05 * rng.normal();
    d.x.push_back(std::move(row));
    d.y.push_back(y);
  }
  return d;
}

}  // namespace

ExperimentResult run_experiment_detail(const Scenario& sc, const std::string& out_dir) {
  sc.validate();

  ExperimentResult res;
  MetricsDigest& dig = res.digest;
  dig.run_id = sc.name + "-seed" + std::to_string(sc.seed);

  auto topo = sim::Topology::standard(sc.gnbs, sc.ues_per_gnb);
  sim::Engine eng(topo, sc.seed);

  const auto states = draw_ue_states(sc);
  res.arrivals = generate_traffic(sc);

  // --- telemetry collection ---
  auto schema = collect::AttrSchema::standard();
  for (const auto& name : sc.collection.extra_attributes)
    schema.declare(name, collect::AttrType::Number);
  collect::Collector col(eng, schema);
  col.set_link_load_fn([&states](sim::NodeId ue, sim::SimTime) {
    return states.at(ue.index).prb_util;
  });

  collect::CollectionTask rt;
  rt.task_id = "rt-probe";
  rt.attributes = {"rsrp", "sinr"};
  rt.deadline_class = collect::DeadlineClass::RealTime;
  rt.destination = sim::NodeId::ai_node();
  rt.volume_budget_bits = kUnmeteredBits;
  rt.scope.cells = {0};
  const auto rt_task = col.install_task(std::move(rt));

  collect::CollectionTask nrt;
  nrt.task_id = "nrt-filtered";
  if (!sc.collection.filter.empty())
    nrt.filter = collect::parse_filter(sc.collection.filter, schema);
  nrt.deadline_class = collect::DeadlineClass::NearRt;
  nrt.destination = sim::NodeId::ai_node();
  nrt.volume_budget_bits = sc.collection.budget_bits ? sc.collection.budget_bits : kUnmeteredBits;
  const auto nrt_task = col.install_task(std::move(nrt));

  collect::CollectionTask oam;
  oam.task_id = "oam-counters";
  oam.deadline_class = collect::DeadlineClass::Oam;
  oam.destination = sim::NodeId::oam();
  oam.volume_budget_bits = kUnmeteredBits;
  const auto oam_task = col.install_task(std::move(oam));

  // --- service assurance ---
  std::vector<assure::AppProfile> profiles;
  for (const auto& a : sc.apps) profiles.push_back({a.name, a.base_latency_ms});
  assure::AppCatalog catalog(profiles);
  assure::UtilityPolicy policy;
  policy.kind = assure::UtilityKind::WeightedSum;
  policy.w_latency = -1.0;
  assure::Assurer assurer(catalog, policy, sc.assurance.perception_accuracy, sc.seed);

  // --- lifecycle monitoring of the assurance model ---
  model::Registry reg;
  std::optional<model::ModelHandle> qos_model;
  model::RetrainPolicy retrain;
  std::uint64_t window_ok = 0, window_total = 0, fallbacks = 0;
  if (sc.monitoring.enabled) {
    reg.register_dataset("qos-telemetry");
    model::ModelDescriptor desc;
    desc.model_id = "qos-assurance";
    desc.version = 1;
    desc.use_case = model::UseCase::Qos;
    desc.lineage = {"qos-telemetry"};
    desc.parameter_count = 64;
    desc.host = sim::NodeId::ai_node();
    qos_model = reg.register_model(desc, eng.now());
    reg.transition(*qos_model, model::Command::TrainDone, eng.now());
    reg.transition(*qos_model, model::Command::ValidatePass, eng.now());
    reg.transition(*qos_model, model::Command::Deploy, eng.now());
    reg.transition(*qos_model, model::Command::Activate, eng.now());
    retrain.mode = model::RetrainMode::PerformanceTriggered;
    retrain.metric = sc.monitoring.metric;
    retrain.bound = sc.monitoring.bound;
    retrain.breach_below = true;
    retrain.consecutive_windows = sc.monitoring.consecutive;
    eng.schedule(model::kMonitorWindow, sim::NodeId::ai_node(), sim::NodeId::ai_node(),
                 sim::Timer{sim::timer::kMonitorTick, *qos_model, 0});
  }

  // --- federated learning over the first N cells ---
  std::optional<collab::FlCoordinator> fl;
  if (sc.fl.enabled) {
    std::vector<collab::FlClientConfig> clients;
    for (std::uint32_t g = 0; g < sc.fl.clients; ++g) {
      auto rng = sim::derive_stream(sc.seed, sim::streams::kFl, sim::NodeId::gnb(g));
      clients.push_back({sim::NodeId::gnb(g), synth_linear(rng, sc.fl.samples_per_client),
                         sc.fl.local_steps, sc.fl.lr});
    }
    fl.emplace(eng, std::move(clients), std::vector<double>(4, 0.0), sc.fl.rounds);
    fl->start();
  }

  // --- traffic into the engine ---
  for (const auto& a : res.arrivals) {
    eng.schedule(a.at, sim::NodeId::ue(a.ue), eng.attachment().gnb_of(a.ue),
                 sim::TrafficArrival{a.ue, a.app, a.size_bits, a.vip});
  }

  eng.set_handler([&](sim::Engine& e, const sim::Event& ev) {
    if (col.on_event(ev)) return;
    if (fl && fl->on_event(ev)) return;

    if (const auto* t = std::get_if<sim::Timer>(&ev.payload)) {
      if (t->tag == sim::timer::kMonitorTick && qos_model) {
        const double acc =
            window_total == 0 ? 1.0
                              : static_cast<double>(window_ok) / static_cast<double>(window_total);
        if (reg.state(*qos_model) == model::LifecycleState::Active) {
          model::MonitoringReport report;
          report.model_id = reg.descriptor(*qos_model).model_id;
          report.version = reg.descriptor(*qos_model).version;
          report.window_start = e.now() - model::kMonitorWindow;
          report.window_end = e.now();
          report.model_metrics[sc.monitoring.metric] = acc;
          if (reg.monitor(*qos_model, report, retrain) == model::MonitorAction::Fallback)
            ++fallbacks;
        }
        e.trace().line("monitor qos-assurance " + fmt_double(acc));
        window_ok = window_total = 0;
        if (e.now() + model::kMonitorWindow <= sc.horizon())
          e.schedule(e.now() + model::kMonitorWindow, sim::NodeId::ai_node(),
                     sim::NodeId::ai_node(), sim::Timer{sim::timer::kMonitorTick, *qos_model, 0});
      }
      return;
    }

    const auto* arr = std::get_if<sim::TrafficArrival>(&ev.payload);
    if (!arr) return;
    const UeState& st = states.at(arr->ue);
    const std::string& app_name = sc.apps.at(arr->app).name;

    assure::UserContext ctx;
    ctx.ue = sim::NodeId::ue(arr->ue);
    ctx.app_type = app_name;
    ctx.rsrp = st.rsrp_dbm;
    ctx.prb_util = st.prb_util;
    ctx.mobility = mobility_of(st.speed_kmh);
    ctx.vip = st.vip;

    const assure::Action applied = assurer.action_of(ctx.ue);
    const auto quality = assure::predict_quality(catalog, ctx, applied);

    LatencyRow row;
    row.at = e.now();
    row.ue = arr->ue;
    row.app = arr->app;
    row.vip = st.vip;
    row.assured = !(applied == assure::kDefaultAction);
    row.prb_util = st.prb_util;
    row.rsrp_dbm = st.rsrp_dbm;
    row.latency_ms = quality.latency_ms;
    res.latency.push_back(row);
    e.trace().line("serve ue" + std::to_string(arr->ue) + " " + app_name + " " +
                   fmt_double(quality.latency_ms));

    const double target = sc.assurance.target_factor * sc.apps.at(arr->app).base_latency_ms;
    ++window_total;
    if (quality.latency_ms <= target) ++window_ok;

    collect::DataRecord rec;
    rec.ue = ctx.ue;
    rec.gnb = ev.dst;
    rec.time = e.now();
    rec.attrs["velocity"] = st.speed_kmh;
    rec.attrs["rsrp"] = st.rsrp_dbm;
    rec.attrs["sinr"] = sinr_of(st.rsrp_dbm);
    rec.attrs["prb_util"] = st.prb_util;
    rec.attrs["app_type"] = app_name;
    rec.attrs["battery_low"] = st.battery_low;
    rec.attrs["position_x"] = st.x_m;
    rec.attrs["position_y"] = st.y_m;
    rec.attrs["tcp_rtt"] = quality.latency_ms;
    rec.attrs["packet_loss"] = std::min(0.3, quality.latency_ms / 2000.0);
    col.offer(rec, ctx.ue);

    if (sc.assurance.enabled && quality.latency_ms > target)
      assurer.assure({e.now(), ctx});
  });

  dig.stats = eng.run(sc.horizon());

  // --- offline diagnosis on the collected picture ---
  rca::CauseScores learned{}, ruled{};
  std::map<rca::GridIndex, rca::GridSummary> grid;
  bool rca_trained = false;
  if (sc.rca.enabled) {
    auto train = rca::planted_dataset({sc.rca.train, sc.rca.overlap, sc.seed});
    auto test = rca::planted_dataset({sc.rca.test, sc.rca.overlap, sc.seed + 1000003});
    std::vector<collab::ComputeCapability> pool;
    pool.push_back({sim::NodeId::ai_node(), 2000.0, 1u << 30, {}});
    for (std::uint32_t g = 0; g < sc.gnbs; ++g)
      pool.push_back({sim::NodeId::gnb(g), 800.0, 1u << 28, {}});
    auto trained = rca::train_on_pool(reg, "rca-incidents", train, {}, pool, eng.now());
    rca_trained = true;

    std::vector<rca::RcaLabel> truth, from_model, from_rules;
    for (const auto& ex : test) {
      truth.push_back(ex.label);
      from_model.push_back(trained.classifier.diagnose(ex.features));
      from_rules.push_back(rca::rule_baseline(ex.features));
    }
    learned = rca::score_causes(truth, from_model);
    ruled = rca::score_causes(truth, from_rules);

    std::vector<collect::DataRecord> delivered;
    for (std::uint32_t id : col.delivered_ids(nrt_task)) delivered.push_back(col.record(id));
    grid = rca::aggregate_grid(delivered);
  }

  // --- energy accounting (offline slot model) ---
  double energy_base_j = 0.0, energy_policy_j = 0.0;
  std::uint64_t deferral_count = 0;
  std::vector<double> load_series;
  energy::PolicyResult base_result, policy_result;
  if (sc.energy.enabled) {
    load_series = energy::diurnal_loads(static_cast<int>(sc.energy.days));
    const auto tolerant = energy::night_tolerant_share(load_series);
    const energy::CellConfig cell;
    const energy::EnergyProfile profile;
    energy::EsPolicy base;
    base.kind = energy::EsPolicyKind::Baseline;
    energy::EsPolicy chosen;
    chosen.kind = sc.energy.policy;
    chosen.threshold = sc.energy.threshold;
    base_result = energy::apply_policy(base, load_series, tolerant, cell);
    policy_result = energy::apply_policy(chosen, load_series, tolerant, cell);
    energy_base_j = energy::total_energy(base_result.trace, profile) * sc.gnbs;
    energy_policy_j = energy::total_energy(policy_result.trace, profile) * sc.gnbs;
    deferral_count = policy_result.deferrals.size();
  }

  // --- KPIs ---
  auto& k = dig.kpis;
  k["arrivals"] = static_cast<double>(res.arrivals.size());
  k["events_processed"] = static_cast<double>(dig.stats.processed);

  {
    std::vector<double> all, vip, regular;
    std::map<std::uint16_t, std::vector<double>> per_app;
    for (const auto& r : res.latency) {
      all.push_back(r.latency_ms);
      (r.vip ? vip : regular).push_back(r.latency_ms);
      per_app[r.app].push_back(r.latency_ms);
    }
    const auto overall = summarize(all);
    k["latency_mean_ms"] = overall.mean;
    k["latency_p95_ms"] = overall.p95;
    const auto sv = summarize(vip), sr = summarize(regular);
    k["latency_mean_ms.vip"] = sv.mean;
    k["latency_p95_ms.vip"] = sv.p95;
    k["latency_mean_ms.regular"] = sr.mean;
    k["latency_p95_ms.regular"] = sr.p95;
    for (const auto& [app, lat] : per_app) {
      const auto s = summarize(lat);
      const std::string& name = sc.apps.at(app).name;
      k["latency_mean_ms." + name] = s.mean;
      k["latency_p95_ms." + name] = s.p95;
    }
  }

  res.assurance_log = assurer.log();
  k["assurance_actions"] = static_cast<double>(res.assurance_log.size());
  k["monitor_fallbacks"] = static_cast<double>(fallbacks);

  for (collect::TaskHandle h : {rt_task, nrt_task, oam_task}) {
    const auto& st = col.stats(h);
    const std::string p = "collect." + col.task(h).task_id + ".";
    k[p + "offered"] = static_cast<double>(st.offered);
    k[p + "matched"] = static_cast<double>(st.matched);
    k[p + "delivered_records"] = static_cast<double>(st.delivered_records);
    k[p + "delivered_bits"] = static_cast<double>(st.delivered_bits);
    k[p + "budget_drops"] = static_cast<double>(st.budget_drops);
    k[p + "bearer_defers"] = static_cast<double>(st.bearer_defers);
  }
  k["collect.max_ai_share"] = col.max_ai_share();

  std::uint32_t fl_rounds_done = 0;
  if (fl) {
    fl_rounds_done = static_cast<std::uint32_t>(fl->log().size());
    k["fl_rounds"] = static_cast<double>(fl_rounds_done);
    k["fl_final_mse"] = fl->log().empty() ? 0.0 : fl->log().back().global_mse;
  }
  if (sc.rca.enabled) {
    k["rca_macro_precision"] = learned.macro_precision;
    k["rca_macro_recall"] = learned.macro_recall;
    k["rca_accuracy"] = learned.accuracy;
    k["rca_rules_macro_precision"] = ruled.macro_precision;
    k["rca_rules_macro_recall"] = ruled.macro_recall;
    k["rca_grid_cells"] = static_cast<double>(grid.size());
  }
  if (sc.energy.enabled) {
    k["energy_baseline_j"] = energy_base_j;
    k["energy_policy_j"] = energy_policy_j;
    k["energy_saving_pct"] =
        energy_base_j > 0.0 ? 100.0 * (energy_base_j - energy_policy_j) / energy_base_j : 0.0;
    k["energy_deferrals"] = static_cast<double>(deferral_count);
  }
  for (const auto& [reason, n] : dig.stats.drop_reasons)
    k["drop." + reason] = static_cast<double>(n);

  k["policy_actions"] = static_cast<double>(res.assurance_log.size() + deferral_count +
                                            fallbacks + fl_rounds_done + (rca_trained ? 1 : 0));

  // --- exports ---
  Exporter ex;
  {
    auto& f = ex.file("summary.txt");
    f.push_back("run " + dig.run_id);
    for (const auto& [name, value] : k) f.push_back(name + " = " + fmt_kpi(value));
  }
  {
    auto& f = ex.file("latency_series.csv");
    f.push_back("at_us,ue,app,vip,assured,prb_util,rsrp_dbm,latency_ms");
    for (const auto& r : res.latency) {
      std::ostringstream os;
      os << r.at.us << ',' << r.ue << ',' << sc.apps.at(r.app).name << ',' << (r.vip ? 1 : 0)
         << ',' << (r.assured ? 1 : 0) << ',' << fmt_double(r.prb_util) << ','
         << fmt_double(r.rsrp_dbm) << ',' << fmt_double(r.latency_ms);
      f.push_back(os.str());
    }
  }
  {
    auto& f = ex.file("latency_by_app.csv");
    f.push_back("app,class,n,mean_ms,p95_ms");
    std::map<std::string, std::array<std::vector<double>, 2>> groups;  // [regular, vip]
    for (const auto& r : res.latency)
      groups[sc.apps.at(r.app).name][r.vip ? 1 : 0].push_back(r.latency_ms);
    for (const auto& [app, cls] : groups) {
      for (int c = 0; c < 2; ++c) {
        if (cls[c].empty()) continue;
        const auto s = summarize(cls[c]);
        f.push_back(app + "," + (c ? "vip" : "regular") + "," + std::to_string(s.n) + "," +
                    fmt_double(s.mean) + "," + fmt_double(s.p95));
      }
    }
  }
  {
    auto& f = ex.file("collection.csv");
    f.push_back("task,offered,matched,delivered_records,delivered_bits,budget_drops,bearer_defers");
    for (collect::TaskHandle h : {rt_task, nrt_task, oam_task}) {
      const auto& st = col.stats(h);
      std::ostringstream os;
      os << col.task(h).task_id << ',' << st.offered << ',' << st.matched << ','
         << st.delivered_records << ',' << st.delivered_bits << ',' << st.budget_drops << ','
         << st.bearer_defers;
      f.push_back(os.str());
    }
  }
  if (fl) {
    auto& f = ex.file("fl_rounds.csv");
    f.push_back("round,participants,global_mse");
    for (const auto& r : fl->log())
      f.push_back(std::to_string(r.round) + "," + std::to_string(r.participants.size()) + "," +
                  fmt_double(r.global_mse));
  }
  if (sc.rca.enabled) {
    auto& f = ex.file("rca_grid.csv");
    f.push_back("ix,iy,mean_rtt_ms,mean_rsrp_dbm,mean_sinr_db,n");
    for (const auto& [cell, s] : grid) {
      std::ostringstream os;
      os << cell.ix << ',' << cell.iy << ',' << fmt_double(s.mean_rtt_ms) << ','
         << fmt_double(s.mean_rsrp_dbm) << ',' << fmt_double(s.mean_sinr_db) << ',' << s.n;
      f.push_back(os.str());
    }
    auto& g = ex.file("rca_scores.csv");
    g.push_back("model,class,precision,recall");
    for (std::size_t c = 0; c < rca::kRootCauseCount; ++c) {
      const std::string name = rca::to_string(static_cast<rca::RootCause>(c));
      g.push_back("learned," + name + "," + fmt_double(learned.precision[c]) + "," +
                  fmt_double(learned.recall[c]));
      g.push_back("rules," + name + "," + fmt_double(ruled.precision[c]) + "," +
                  fmt_double(ruled.recall[c]));
    }
    g.push_back("learned,macro," + fmt_double(learned.macro_precision) + "," +
                fmt_double(learned.macro_recall));
    g.push_back("rules,macro," + fmt_double(ruled.macro_precision) + "," +
                fmt_double(ruled.macro_recall));
  }
  if (sc.energy.enabled) {
    auto& f = ex.file("energy.csv");
    f.push_back("policy,joules,saving_pct");
    f.push_back("BASELINE," + fmt_double(energy_base_j) + ",0");
    f.push_back(energy::to_string(sc.energy.policy) + "," + fmt_double(energy_policy_j) + "," +
                fmt_double(k["energy_saving_pct"]));
    auto& g = ex.file("energy_series.csv");
    g.push_back("slot,load,baseline_w,policy_w");
    const energy::EnergyProfile profile;
    const auto& bs = base_result.trace.stations.front();
    const auto& ps = policy_result.trace.stations.front();
    for (std::size_t s = 0; s < load_series.size(); ++s) {
      const double bw =
          energy::slot_power(bs.channels[s], bs.carriers[s], bs.tx_power_w[s], profile).total();
      const double pw =
          energy::slot_power(ps.channels[s], ps.carriers[s], ps.tx_power_w[s], profile).total();
      g.push_back(std::to_string(s) + "," + fmt_double(load_series[s]) + "," + fmt_double(bw) +
                  "," + fmt_double(pw));
    }
  }
  if (qos_model || rca_trained) {
    auto& f = ex.file("model_states.csv");
    f.push_back("model,version,at_us,state");
    for (model::ModelHandle h = 0; h < reg.size(); ++h) {
      const auto& d = reg.descriptor(h);
      for (const auto& evn : reg.history(h))
        f.push_back(d.model_id + "," + std::to_string(d.version) + "," +
                    std::to_string(evn.at.us) + "," + model::to_string(evn.state));
    }
  }

  sim::Fnv64 hash;
  hash.update("trace ");
  hash.update(std::to_string(dig.stats.trace_hash));
  hash.update("\n");
  ex.fold_into(hash);
  dig.hash_hex = hash.hex();
  ex.file("digest.txt") = {dig.run_id + " " + dig.hash_hex};

  if (!out_dir.empty()) ex.write(out_dir);
  return res;
}

MetricsDigest run_experiment(const Scenario& sc, const std::string& out_dir) {
  return run_experiment_detail(sc, out_dir).digest;
}

}  // namespace airan::scenario
