// Command-line front end for the RAN experiment library. Talks to the
// library exclusively through its C interface.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "airan/airan.h"

namespace {

void print_error(const std::string& stage, int status) {
  std::fprintf(stderr, "%s failed [%s]: %s\n", stage.c_str(), airan_strstatus(status),
               airan_last_error());
}

/// Resolves --scenario: an existing file path loads; otherwise the name
/// must be a bundled preset.
int open_scenario(const std::string& ref, airan_scenario_t** out) {
  if (std::filesystem::exists(ref)) return airan_scenario_load(ref.c_str(), out);
  const int status = airan_scenario_preset(ref.c_str(), out);
  if (status != AIRAN_OK)
    std::fprintf(stderr, "\"%s\" is neither a scenario file nor a preset; presets are:\n",
                 ref.c_str());
  return status;
}

void print_headline(const airan_result_t* res) {
  std::printf("%s digest=%s\n", airan_result_run_id(res), airan_result_digest(res));
  for (const char* name : {"arrivals", "events_processed", "latency_mean_ms", "latency_p95_ms",
                           "policy_actions"}) {
    double v = 0.0;
    if (airan_result_kpi(res, name, &v) == AIRAN_OK) std::printf("  %s = %g\n", name, v);
  }
}

int list_presets() {
  for (size_t i = 0; i < airan_preset_count(); ++i)
    std::printf("  %s\n", airan_preset_name(i));
  return 2;
}

int cmd_validate(const std::string& scenario_ref) {
  airan_scenario_t* sc = nullptr;
  int status = open_scenario(scenario_ref, &sc);
  if (status != AIRAN_OK) {
    if (!std::filesystem::exists(scenario_ref)) return list_presets();
    print_error("validate", status);
    return 1;
  }
  status = airan_scenario_validate(sc);
  if (status != AIRAN_OK) {
    print_error("validate", status);
    airan_scenario_free(sc);
    return 1;
  }
  std::printf("%s: valid\n", airan_scenario_name(sc));
  airan_scenario_free(sc);
  return 0;
}

int cmd_run(const std::string& scenario_ref, std::uint64_t seed, const std::string& out_dir) {
  airan_scenario_t* sc = nullptr;
  int status = open_scenario(scenario_ref, &sc);
  if (status != AIRAN_OK) {
    if (!std::filesystem::exists(scenario_ref)) return list_presets();
    print_error("load", status);
    return 1;
  }
  airan_result_t* res = nullptr;
  status = airan_run(sc, seed, out_dir.empty() ? nullptr : out_dir.c_str(), &res);
  airan_scenario_free(sc);
  if (status != AIRAN_OK) {
    print_error("run", status);
    return 1;
  }
  print_headline(res);
  if (!out_dir.empty()) std::printf("exports written to %s\n", out_dir.c_str());
  airan_result_free(res);
  return 0;
}

int cmd_sweep(const std::string& scenario_ref, const std::string& param,
              const std::string& out_dir) {
  const auto eq = param.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 >= param.size()) {
    std::fprintf(stderr, "--param must look like path=value[,value...]\n");
    return 1;
  }
  const std::string path = param.substr(0, eq);
  std::vector<std::string> values;
  std::size_t at = eq + 1;
  while (true) {
    const auto comma = param.find(',', at);
    values.push_back(param.substr(at, comma - at));
    if (comma == std::string::npos) break;
    at = comma + 1;
  }

  airan_scenario_t* base = nullptr;
  int status = open_scenario(scenario_ref, &base);
  if (status != AIRAN_OK) {
    if (!std::filesystem::exists(scenario_ref)) return list_presets();
    print_error("load", status);
    return 1;
  }
  char* base_text = nullptr;
  status = airan_scenario_serialize(base, &base_text);
  airan_scenario_free(base);
  if (status != AIRAN_OK) {
    print_error("sweep", status);
    return 1;
  }

  int rc = 0;
  for (const auto& value : values) {
    airan_scenario_t* sc = nullptr;
    status = airan_scenario_parse(base_text, scenario_ref.c_str(), &sc);
    if (status == AIRAN_OK) status = airan_scenario_set(sc, path.c_str(), value.c_str());
    airan_result_t* res = nullptr;
    if (status == AIRAN_OK) {
      const std::string run_dir = out_dir + "/" + value;
      status = airan_run(sc, 0, run_dir.c_str(), &res);
    }
    airan_scenario_free(sc);
    if (status != AIRAN_OK) {
      print_error(path + "=" + value, status);
      rc = 1;
      continue;
    }
    std::printf("%s=%s: %s digest=%s\n", path.c_str(), value.c_str(), airan_result_run_id(res),
                airan_result_digest(res));
    airan_result_free(res);
  }
  airan_string_free(base_text);
  if (rc == 0) std::printf("sweep complete: %zu runs under %s\n", values.size(), out_dir.c_str());
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("deterministic RAN experiment runner (library ") + airan_version() +
               ")"};
  app.require_subcommand(1);

  std::string scenario_ref, out_dir, param;
  std::uint64_t seed = 0;

  auto* run = app.add_subcommand("run", "execute one scenario");
  run->add_option("--scenario", scenario_ref, "scenario file or preset name")->required();
  run->add_option("--seed", seed, "override the scenario seed (0 keeps it)");
  run->add_option("--out", out_dir, "directory for metrics exports");

  auto* sweep = app.add_subcommand("sweep", "run one scenario across parameter values");
  sweep->add_option("--scenario", scenario_ref, "scenario file or preset name")->required();
  sweep->add_option("--param", param, "dotted path and values: path=v1,v2,...")->required();
  sweep->add_option("--out", out_dir, "root directory; one subdirectory per value")->required();

  auto* validate = app.add_subcommand("validate", "check a scenario without running it");
  validate->add_option("--scenario", scenario_ref, "scenario file or preset name")->required();

  CLI11_PARSE(app, argc, argv);

  if (app.got_subcommand(run)) return cmd_run(scenario_ref, seed, out_dir);
  if (app.got_subcommand(sweep)) return cmd_sweep(scenario_ref, param, out_dir);
  return cmd_validate(scenario_ref);
}
