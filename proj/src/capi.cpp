#include "airan/airan.h"

#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "airan/scenario/experiment.hpp"
#include "airan/scenario/scenario.hpp"

struct airan_scenario {
  airan::scenario::Scenario sc;
};

struct airan_result {
  airan::scenario::MetricsDigest digest;
  std::vector<std::string> kpi_names;  // index order for enumeration
};

namespace {

thread_local std::string t_last_error;

constexpr int status_of(airan::Errc c) { return static_cast<int>(c) + 1; }

template <typename F>
int guarded(F&& body) {
  try {
    body();
    return AIRAN_OK;
  } catch (const airan::Error& e) {
    t_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return status_of(airan::Errc::Internal);
  }
}

int require_args(bool ok) {
  if (!ok) t_last_error = "ValidationError: null argument";
  return ok ? AIRAN_OK : status_of(airan::Errc::ValidationError);
}

}  // namespace

extern "C" {

const char* airan_version(void) { return "0.1.0"; }

const char* airan_strstatus(int status) {
  if (status == AIRAN_OK) return "OK";
  const int idx = status - 1;
  if (idx < 0 || idx > static_cast<int>(airan::Errc::Internal)) return "UnknownStatus";
  return airan::errc_name(static_cast<airan::Errc>(idx)).data();
}

const char* airan_last_error(void) { return t_last_error.c_str(); }

int airan_scenario_load(const char* path, airan_scenario_t** out) {
  if (int s = require_args(path && out)) return s;
  return guarded([&] { *out = new airan_scenario{airan::scenario::load_scenario(path)}; });
}

int airan_scenario_parse(const char* text, const char* origin, airan_scenario_t** out) {
  if (int s = require_args(text && out)) return s;
  return guarded([&] {
    *out = new airan_scenario{
        airan::scenario::parse_scenario(text, origin ? origin : "scenario")};
  });
}

int airan_scenario_preset(const char* name, airan_scenario_t** out) {
  if (int s = require_args(name && out)) return s;
  return guarded([&] { *out = new airan_scenario{airan::scenario::preset(name)}; });
}

size_t airan_preset_count(void) { return airan::scenario::preset_names().size(); }

const char* airan_preset_name(size_t index) {
  static thread_local std::string keep;
  const auto names = airan::scenario::preset_names();
  if (index >= names.size()) return nullptr;
  keep = names[index];
  return keep.c_str();
}

int airan_scenario_set(airan_scenario_t* sc, const char* dotted_path, const char* value) {
  if (int s = require_args(sc && dotted_path && value)) return s;
  return guarded([&] { sc->sc = airan::scenario::with_param(sc->sc, dotted_path, value); });
}

int airan_scenario_validate(const airan_scenario_t* sc) {
  if (int s = require_args(sc != nullptr)) return s;
  return guarded([&] { sc->sc.validate(); });
}

const char* airan_scenario_name(const airan_scenario_t* sc) {
  return sc ? sc->sc.name.c_str() : nullptr;
}

int airan_scenario_serialize(const airan_scenario_t* sc, char** out_text) {
  if (int s = require_args(sc && out_text)) return s;
  return guarded([&] {
    const std::string text = airan::scenario::serialize(sc->sc);
    char* copy = static_cast<char*>(std::malloc(text.size() + 1));
    if (!copy) airan::raise(airan::Errc::Internal, "out of memory");
    std::memcpy(copy, text.c_str(), text.size() + 1);
    *out_text = copy;
  });
}

void airan_string_free(char* text) { std::free(text); }

void airan_scenario_free(airan_scenario_t* sc) { delete sc; }

int airan_run(const airan_scenario_t* sc, uint64_t seed, const char* out_dir,
              airan_result_t** out) {
  if (int s = require_args(sc && out)) return s;
  return guarded([&] {
    airan::scenario::Scenario run_sc = sc->sc;
    if (seed != 0) run_sc.seed = seed;
    auto* res = new airan_result{
        airan::scenario::run_experiment(run_sc, out_dir ? out_dir : ""), {}};
    for (const auto& [name, _] : res->digest.kpis) res->kpi_names.push_back(name);
    *out = res;
  });
}

const char* airan_result_run_id(const airan_result_t* r) {
  return r ? r->digest.run_id.c_str() : nullptr;
}

const char* airan_result_digest(const airan_result_t* r) {
  return r ? r->digest.hash_hex.c_str() : nullptr;
}

size_t airan_result_kpi_count(const airan_result_t* r) { return r ? r->kpi_names.size() : 0; }

const char* airan_result_kpi_name(const airan_result_t* r, size_t index) {
  if (!r || index >= r->kpi_names.size()) return nullptr;
  return r->kpi_names[index].c_str();
}

int airan_result_kpi(const airan_result_t* r, const char* name, double* out_value) {
  if (int s = require_args(r && name && out_value)) return s;
  return guarded([&] { *out_value = r->digest.kpi(name); });
}

void airan_result_free(airan_result_t* r) { delete r; }

}  // extern "C"
