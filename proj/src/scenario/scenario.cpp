#include "airan/scenario/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include <nlohmann/json.hpp>

#include "airan/collect/filter.hpp"
#include "airan/collect/schema.hpp"
#include "airan/sim/node.hpp"

namespace airan::scenario {

using json = nlohmann::ordered_json;

std::vector<AppDecl> standard_apps() {
  return {{"cloud_gaming", 15.0}, {"voip", 20.0},         {"video_call", 25.0},
          {"short_video", 30.0},  {"web_browsing", 40.0}, {"file_transfer", 60.0}};
}

namespace {

collect::AttrSchema schema_of(const Scenario& sc) {
  auto schema = collect::AttrSchema::standard();
  for (const auto& name : sc.collection.extra_attributes)
    schema.declare(name, collect::AttrType::Number);
  return schema;
}

[[noreturn]] void fail(const std::string& what) { raise(Errc::ValidationError, what); }

}  // namespace

void Scenario::validate() const {
  if (name.empty()) fail("scenario name must not be empty");
  if (gnbs < 1) fail("topology needs at least one gNB");
  if (ues_per_gnb < 1) fail("topology needs at least one UE per gNB");
  if (horizon_s <= 0) fail("horizon must be positive");
  if (seed == 0) fail("seed must be positive");

  if (apps.empty()) fail("app catalog must not be empty");
  std::set<std::string> declared;
  for (const auto& a : apps) {
    if (a.name.empty()) fail("app name must not be empty");
    if (!(a.base_latency_ms > 0.0)) fail("app \"" + a.name + "\" needs a positive base latency");
    if (!declared.insert(a.name).second) fail("app \"" + a.name + "\" declared twice");
  }
  for (const auto& t : traffic.mix) {
    if (declared.count(t.app) == 0)
      fail("traffic references undeclared app \"" + t.app + "\"");
    if (!(t.rate_per_ue_hz >= 0.0) || !std::isfinite(t.rate_per_ue_hz))
      fail("traffic rate for \"" + t.app + "\" must be finite and non-negative");
    if (t.size_bits == 0) fail("traffic size for \"" + t.app + "\" must be positive");
  }
  if (!(traffic.vip_fraction >= 0.0 && traffic.vip_fraction <= 1.0))
    fail("vip_fraction must be in [0, 1]");
  if (!(traffic.prb_low >= 0.0 && traffic.prb_low <= traffic.prb_high && traffic.prb_high <= 1.0))
    fail("prb_band must satisfy 0 <= low <= high <= 1");
  if (!(traffic.rsrp_low <= traffic.rsrp_high) || traffic.rsrp_low < -140.0 ||
      traffic.rsrp_high > -40.0)
    fail("rsrp_range must satisfy -140 <= low <= high <= -40");

  if (!collection.filter.empty()) {
    try {
      collect::parse_filter(collection.filter, schema_of(*this));
    } catch (const Error& e) {
      fail(std::string("collection filter: ") + e.what());
    }
  }

  if (assurance.enabled) {
    if (!(assurance.perception_accuracy >= 0.0 && assurance.perception_accuracy <= 1.0))
      fail("perception_accuracy must be in [0, 1]");
    if (!(assurance.target_factor >= 1.0)) fail("target_factor must be >= 1");
  }
  if (energy.enabled) {
    if (energy.days < 1) fail("energy days must be >= 1");
    if (!(energy.threshold > 0.0 && energy.threshold <= 1.0))
      fail("energy threshold must be in (0, 1]");
  }
  if (fl.enabled) {
    if (fl.rounds < 1) fail("fl rounds must be >= 1");
    if (fl.clients < 1) fail("fl needs at least one client");
    if (fl.clients > gnbs) fail("fl clients exceed the gNB count");
    if (!(fl.lr > 0.0)) fail("fl learning rate must be positive");
    if (fl.samples_per_client < 4) fail("fl needs at least 4 samples per client");
  }
  if (rca.enabled) {
    if (rca.train < 10 || rca.test < 10) fail("rca train/test sizes must be >= 10");
    if (!(rca.overlap >= 0.0 && rca.overlap <= 1.0)) fail("rca overlap must be in [0, 1]");
  }
  if (monitoring.enabled) {
    if (monitoring.metric.empty()) fail("monitoring metric must not be empty");
    if (!std::isfinite(monitoring.bound)) fail("monitoring bound must be finite");
    if (monitoring.consecutive < 1) fail("monitoring consecutive windows must be >= 1");
  }
}

namespace {

void check_keys(const json& obj, const char* where, std::initializer_list<const char*> allowed) {
  for (const auto& [key, _] : obj.items()) {
    if (std::find_if(allowed.begin(), allowed.end(),
                     [&](const char* a) { return key == a; }) == allowed.end())
      fail(std::string("unknown field \"") + key + "\" in " + where);
  }
}

template <typename T>
void pick(const json& obj, const char* key, T& into) {
  if (auto it = obj.find(key); it != obj.end()) into = it->get<T>();
}

void pick_policy(const json& obj, const char* key, energy::EsPolicyKind& into) {
  if (auto it = obj.find(key); it != obj.end()) {
    auto s = it->get<std::string>();
    if (s == "BASELINE") into = energy::EsPolicyKind::Baseline;
    else if (s == "STATIC_THRESHOLD") into = energy::EsPolicyKind::StaticThreshold;
    else if (s == "PREDICTIVE") into = energy::EsPolicyKind::Predictive;
    else if (s == "SERVICE_AWARE") into = energy::EsPolicyKind::ServiceAware;
    else fail("unknown energy policy \"" + s + "\"");
  }
}

Scenario from_json(const json& j) {
  Scenario sc;
  sc.apps = standard_apps();
  check_keys(j, "scenario",
             {"name", "topology", "apps", "traffic", "collection", "policies", "seed",
              "horizon_s"});
  pick(j, "name", sc.name);
  if (j.contains("topology")) {
    const auto& t = j.at("topology");
    check_keys(t, "topology", {"gnbs", "ues_per_gnb"});
    pick(t, "gnbs", sc.gnbs);
    pick(t, "ues_per_gnb", sc.ues_per_gnb);
  }
  if (j.contains("apps") && j.at("apps").is_array()) {
    sc.apps.clear();
    for (const auto& a : j.at("apps")) {
      check_keys(a, "apps[]", {"name", "base_latency_ms"});
      AppDecl d;
      pick(a, "name", d.name);
      pick(a, "base_latency_ms", d.base_latency_ms);
      sc.apps.push_back(d);
    }
  } else if (j.contains("apps") && j.at("apps") != json("standard")) {
    fail("apps must be \"standard\" or a list of declarations");
  }
  if (j.contains("traffic")) {
    const auto& t = j.at("traffic");
    check_keys(t, "traffic", {"mix", "vip_fraction", "diurnal", "prb_band", "rsrp_range"});
    if (t.contains("mix")) {
      sc.traffic.mix.clear();
      for (const auto& m : t.at("mix")) {
        check_keys(m, "traffic.mix[]", {"app", "rate_per_ue_hz", "size_bits", "delay_tolerant"});
        TrafficApp ta;
        pick(m, "app", ta.app);
        pick(m, "rate_per_ue_hz", ta.rate_per_ue_hz);
        pick(m, "size_bits", ta.size_bits);
        pick(m, "delay_tolerant", ta.delay_tolerant);
        sc.traffic.mix.push_back(ta);
      }
    }
    pick(t, "vip_fraction", sc.traffic.vip_fraction);
    pick(t, "diurnal", sc.traffic.diurnal);
    if (t.contains("prb_band")) {
      const auto& b = t.at("prb_band");
      if (!b.is_array() || b.size() != 2) fail("prb_band must be [low, high]");
      sc.traffic.prb_low = b[0].get<double>();
      sc.traffic.prb_high = b[1].get<double>();
    }
    if (t.contains("rsrp_range")) {
      const auto& b = t.at("rsrp_range");
      if (!b.is_array() || b.size() != 2) fail("rsrp_range must be [low, high]");
      sc.traffic.rsrp_low = b[0].get<double>();
      sc.traffic.rsrp_high = b[1].get<double>();
    }
  }
  if (j.contains("collection")) {
    const auto& c = j.at("collection");
    check_keys(c, "collection", {"filter", "budget_bits", "extra_attributes"});
    pick(c, "filter", sc.collection.filter);
    pick(c, "budget_bits", sc.collection.budget_bits);
    pick(c, "extra_attributes", sc.collection.extra_attributes);
  }
  if (j.contains("policies")) {
    const auto& p = j.at("policies");
    check_keys(p, "policies", {"assurance", "energy", "fl", "rca", "monitoring"});
    if (p.contains("assurance")) {
      const auto& a = p.at("assurance");
      check_keys(a, "policies.assurance", {"enabled", "perception_accuracy", "target_factor"});
      pick(a, "enabled", sc.assurance.enabled);
      pick(a, "perception_accuracy", sc.assurance.perception_accuracy);
      pick(a, "target_factor", sc.assurance.target_factor);
    }
    if (p.contains("energy")) {
      const auto& e = p.at("energy");
      check_keys(e, "policies.energy", {"enabled", "policy", "days", "threshold"});
      pick(e, "enabled", sc.energy.enabled);
      pick_policy(e, "policy", sc.energy.policy);
      pick(e, "days", sc.energy.days);
      pick(e, "threshold", sc.energy.threshold);
    }
    if (p.contains("fl")) {
      const auto& f = p.at("fl");
      check_keys(f, "policies.fl",
                 {"enabled", "rounds", "clients", "local_steps", "lr", "samples_per_client"});
      pick(f, "enabled", sc.fl.enabled);
      pick(f, "rounds", sc.fl.rounds);
      pick(f, "clients", sc.fl.clients);
      pick(f, "local_steps", sc.fl.local_steps);
      pick(f, "lr", sc.fl.lr);
      pick(f, "samples_per_client", sc.fl.samples_per_client);
    }
    if (p.contains("rca")) {
      const auto& r = p.at("rca");
      check_keys(r, "policies.rca", {"enabled", "train", "test", "overlap"});
      pick(r, "enabled", sc.rca.enabled);
      pick(r, "train", sc.rca.train);
      pick(r, "test", sc.rca.test);
      pick(r, "overlap", sc.rca.overlap);
    }
    if (p.contains("monitoring")) {
      const auto& m = p.at("monitoring");
      check_keys(m, "policies.monitoring", {"enabled", "metric", "bound", "consecutive"});
      pick(m, "enabled", sc.monitoring.enabled);
      pick(m, "metric", sc.monitoring.metric);
      pick(m, "bound", sc.monitoring.bound);
      pick(m, "consecutive", sc.monitoring.consecutive);
    }
  }
  pick(j, "seed", sc.seed);
  pick(j, "horizon_s", sc.horizon_s);
  sc.validate();
  return sc;
}

json to_json(const Scenario& sc) {
  json j;
  j["name"] = sc.name;
  j["topology"] = {{"gnbs", sc.gnbs}, {"ues_per_gnb", sc.ues_per_gnb}};
  json apps = json::array();
  for (const auto& a : sc.apps)
    apps.push_back({{"name", a.name}, {"base_latency_ms", a.base_latency_ms}});
  j["apps"] = apps;
  json mix = json::array();
  for (const auto& m : sc.traffic.mix)
    mix.push_back({{"app", m.app},
                   {"rate_per_ue_hz", m.rate_per_ue_hz},
                   {"size_bits", m.size_bits},
                   {"delay_tolerant", m.delay_tolerant}});
  j["traffic"] = {{"mix", mix},
                  {"vip_fraction", sc.traffic.vip_fraction},
                  {"diurnal", sc.traffic.diurnal},
                  {"prb_band", {sc.traffic.prb_low, sc.traffic.prb_high}},
                  {"rsrp_range", {sc.traffic.rsrp_low, sc.traffic.rsrp_high}}};
  j["collection"] = {{"filter", sc.collection.filter},
                     {"budget_bits", sc.collection.budget_bits},
                     {"extra_attributes", sc.collection.extra_attributes}};
  j["policies"] = {
      {"assurance",
       {{"enabled", sc.assurance.enabled},
        {"perception_accuracy", sc.assurance.perception_accuracy},
        {"target_factor", sc.assurance.target_factor}}},
      {"energy",
       {{"enabled", sc.energy.enabled},
        {"policy", energy::to_string(sc.energy.policy)},
        {"days", sc.energy.days},
        {"threshold", sc.energy.threshold}}},
      {"fl",
       {{"enabled", sc.fl.enabled},
        {"rounds", sc.fl.rounds},
        {"clients", sc.fl.clients},
        {"local_steps", sc.fl.local_steps},
        {"lr", sc.fl.lr},
        {"samples_per_client", sc.fl.samples_per_client}}},
      {"rca",
       {{"enabled", sc.rca.enabled},
        {"train", sc.rca.train},
        {"test", sc.rca.test},
        {"overlap", sc.rca.overlap}}},
      {"monitoring",
       {{"enabled", sc.monitoring.enabled},
        {"metric", sc.monitoring.metric},
        {"bound", sc.monitoring.bound},
        {"consecutive", sc.monitoring.consecutive}}}};
  j["seed"] = sc.seed;
  j["horizon_s"] = sc.horizon_s;
  return j;
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i)
      if (text[i] == '\n') ++line;
    raise(Errc::ParseError, origin + ":" + std::to_string(line) + ": " + e.what());
  }
  try {
    return from_json(j);
  } catch (const json::exception& e) {
    raise(Errc::ValidationError, origin + ": " + e.what());
  }
}

Scenario load_scenario(const std::string& path) {
  FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) raise(Errc::Io, "cannot open scenario file " + path);
  std::string text;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) text.append(buf, n);
  std::fclose(f);
  return parse_scenario(text, path);
}

std::string serialize(const Scenario& sc) { return to_json(sc).dump(2) + "\n"; }

namespace {

struct Band {
  const char* tag;
  double lo, hi;
};

Scenario environment(const std::string& env, const Band& band) {
  Scenario sc;
  sc.name = env + "_" + band.tag;
  sc.apps = standard_apps();
  sc.traffic.prb_low = band.lo;
  sc.traffic.prb_high = band.hi;
  sc.collection.filter = "rsrp < -95 OR prb_util >= 0.5";
  sc.collection.budget_bits = 400000;
  sc.assurance.enabled = true;
  sc.monitoring = {true, "accuracy", 0.2, 3};
  sc.fl = {true, 8, 4, 2, 0.05, 30};
  sc.rca = {true, 1200, 500, 0.1};
  sc.horizon_s = 600;
  sc.seed = 1;

  auto mix = [&](std::initializer_list<TrafficApp> apps) {
    sc.traffic.mix.assign(apps.begin(), apps.end());
  };
  if (env == "cbd") {
    sc.gnbs = 4;
    sc.ues_per_gnb = 30;
    sc.traffic.rsrp_low = -110;
    sc.traffic.rsrp_high = -85;
    sc.traffic.vip_fraction = 0.2;
    mix({{"cloud_gaming", 0.004, 24000, false},
         {"video_call", 0.006, 16000, false},
         {"short_video", 0.010, 40000, true},
         {"web_browsing", 0.008, 12000, false},
         {"file_transfer", 0.003, 80000, true}});
  } else if (env == "campus") {
    sc.gnbs = 3;
    sc.ues_per_gnb = 25;
    sc.traffic.rsrp_low = -105;
    sc.traffic.rsrp_high = -85;
    sc.traffic.vip_fraction = 0.1;
    mix({{"short_video", 0.012, 40000, true},
         {"web_browsing", 0.010, 12000, false},
         {"cloud_gaming", 0.005, 24000, false},
         {"file_transfer", 0.004, 80000, true}});
  } else if (env == "hospital") {
    sc.gnbs = 2;
    sc.ues_per_gnb = 20;
    sc.traffic.rsrp_low = -115;
    sc.traffic.rsrp_high = -90;
    sc.traffic.vip_fraction = 0.3;
    mix({{"voip", 0.010, 4000, false},
         {"video_call", 0.008, 16000, false},
         {"web_browsing", 0.006, 12000, false},
         {"file_transfer", 0.002, 80000, true}});
  } else {  // residential
    sc.gnbs = 3;
    sc.ues_per_gnb = 20;
    sc.traffic.rsrp_low = -112;
    sc.traffic.rsrp_high = -88;
    sc.traffic.vip_fraction = 0.1;
    mix({{"short_video", 0.012, 40000, true},
         {"web_browsing", 0.008, 12000, false},
         {"video_call", 0.005, 16000, false},
         {"file_transfer", 0.004, 80000, true},
         {"voip", 0.003, 4000, false}});
  }
  sc.fl.clients = std::min(sc.fl.clients, sc.gnbs);
  return sc;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const char* env : {"cbd", "campus", "hospital", "residential"})
    for (const char* band : {"light", "medium", "heavy"})
      out.push_back(std::string(env) + "_" + band);
  out.push_back("energy_diurnal");
  return out;
}

Scenario preset(const std::string& name) {
  static const Band bands[] = {{"light", 0.10, 0.30}, {"medium", 0.30, 0.50}, {"heavy", 0.50, 0.70}};
  if (name == "energy_diurnal") {
    Scenario sc;
    sc.name = name;
    sc.apps = standard_apps();
    sc.gnbs = 4;
    sc.ues_per_gnb = 10;
    sc.traffic.mix = {{"web_browsing", 0.002, 12000, false}};
    sc.traffic.vip_fraction = 0.0;
    sc.traffic.prb_low = 0.2;
    sc.traffic.prb_high = 0.4;
    sc.energy = {true, energy::EsPolicyKind::ServiceAware, 4, 0.3};
    sc.horizon_s = 300;
    sc.seed = 1;
    return sc;
  }
  for (const char* env : {"cbd", "campus", "hospital", "residential"}) {
    for (const auto& band : bands) {
      if (name == std::string(env) + "_" + band.tag) return environment(env, band);
    }
  }
  raise(Errc::ValidationError, "unknown preset \"" + name + "\"");
}

Scenario with_param(const Scenario& sc, const std::string& dotted_path, const std::string& value) {
  json j = to_json(sc);
  json* at = &j;
  std::string path = dotted_path;
  std::size_t pos;
  while ((pos = path.find('.')) != std::string::npos) {
    std::string head = path.substr(0, pos);
    if (!at->contains(head)) fail("unknown parameter path \"" + dotted_path + "\"");
    at = &(*at)[head];
    path = path.substr(pos + 1);
  }
  if (!at->contains(path)) fail("unknown parameter path \"" + dotted_path + "\"");
  json& leaf = (*at)[path];
  try {
    if (leaf.is_string()) {
      leaf = value;
    } else if (leaf.is_boolean()) {
      if (value == "true") leaf = true;
      else if (value == "false") leaf = false;
      else fail("parameter \"" + dotted_path + "\" expects true/false");
    } else if (leaf.is_number_integer() || leaf.is_number_unsigned()) {
      leaf = json::parse(value);
      if (!leaf.is_number()) fail("parameter \"" + dotted_path + "\" expects a number");
    } else if (leaf.is_number_float()) {
      leaf = std::stod(value);
    } else {
      fail("parameter \"" + dotted_path + "\" is not a scalar");
    }
  } catch (const Error&) {
    throw;
  } catch (...) {
    fail("cannot parse value \"" + value + "\" for parameter \"" + dotted_path + "\"");
  }
  return parse_scenario(j.dump(), "param " + dotted_path);
}

namespace {

UeState draw_state(sim::Rng& rng, const Scenario& sc) {
  UeState st;
  st.rsrp_dbm = rng.uniform(sc.traffic.rsrp_low, sc.traffic.rsrp_high);
  st.prb_util = rng.uniform(sc.traffic.prb_low, sc.traffic.prb_high);
  st.x_m = rng.uniform(0.0, 2000.0);
  st.y_m = rng.uniform(0.0, 2000.0);
  st.speed_kmh = rng.uniform(0.0, 60.0);
  st.device_class = static_cast<std::uint32_t>(rng.below(4));
  st.battery_low = rng.bernoulli(0.15);
  st.vip = rng.bernoulli(sc.traffic.vip_fraction);
  return st;
}

}  // namespace

std::vector<UeState> draw_ue_states(const Scenario& sc) {
  std::vector<UeState> out(sc.ue_count());
  for (std::uint32_t i = 0; i < sc.ue_count(); ++i) {
    auto rng = sim::derive_stream(sc.seed, sim::streams::kTraffic, sim::NodeId::ue(i));
    out[i] = draw_state(rng, sc);
  }
  return out;
}

namespace {

double day_shape(double t_s) {
  constexpr double kDay = 86400.0;
  return 0.45 - 0.30 * std::cos(2.0 * std::numbers::pi * (t_s / kDay));
}

}  // namespace

std::vector<Arrival> generate_traffic(const Scenario& sc) {
  std::vector<std::uint16_t> app_index(sc.traffic.mix.size());
  for (std::size_t m = 0; m < sc.traffic.mix.size(); ++m) {
    auto it = std::find_if(sc.apps.begin(), sc.apps.end(), [&](const AppDecl& a) {
      return a.name == sc.traffic.mix[m].app;
    });
    if (it == sc.apps.end())
      fail("traffic references undeclared app \"" + sc.traffic.mix[m].app + "\"");
    app_index[m] = static_cast<std::uint16_t>(it - sc.apps.begin());
  }

  std::vector<Arrival> out;
  const double horizon = static_cast<double>(sc.horizon_s);
  for (std::uint32_t ue = 0; ue < sc.ue_count(); ++ue) {
    // Same stream as draw_ue_states: the state prefix is consumed first so
    // the arrival walk depends only on (traffic block, seed).
    auto rng = sim::derive_stream(sc.seed, sim::streams::kTraffic, sim::NodeId::ue(ue));
    UeState st = draw_state(rng, sc);

    for (std::size_t m = 0; m < sc.traffic.mix.size(); ++m) {
      const auto& mix = sc.traffic.mix[m];
      if (mix.rate_per_ue_hz <= 0.0) continue;
      // Thinning against the day-shape peak keeps the walk a plain
      // homogeneous process.
      const double peak = sc.traffic.diurnal ? 0.75 / 0.45 : 1.0;
      const double rate = mix.rate_per_ue_hz * peak;
      double t = 0.0;
      while (true) {
        t += -std::log(1.0 - rng.uniform01()) / rate;
        if (t >= horizon) break;
        if (sc.traffic.diurnal && rng.uniform01() >= day_shape(t) / 0.75) continue;
        out.push_back({sim::SimTime::usec(static_cast<std::int64_t>(t * 1e6)), ue, app_index[m],
                       mix.size_bits, st.vip});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Arrival& a, const Arrival& b) {
    if (a.at.us != b.at.us) return a.at.us < b.at.us;
    if (a.ue != b.ue) return a.ue < b.ue;
    return a.app < b.app;
  });
  return out;
}

}  // namespace airan::scenario
