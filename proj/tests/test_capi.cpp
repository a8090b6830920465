#include <doctest.h>

#include <cstring>
#include <string>

#include "airan/airan.h"

namespace {

struct ScenarioGuard {
  airan_scenario_t* sc = nullptr;
  ~ScenarioGuard() { airan_scenario_free(sc); }
};

struct ResultGuard {
  airan_result_t* res = nullptr;
  ~ResultGuard() { airan_result_free(res); }
};

}  // namespace

TEST_CASE("status names are stable and zero means success") {
  CHECK(std::string(airan_strstatus(AIRAN_OK)) == "OK");
  CHECK(std::string(airan_strstatus(9999)) == "UnknownStatus");
  CHECK(std::string(airan_strstatus(-3)) == "UnknownStatus");
  CHECK(airan_version() != nullptr);
}

TEST_CASE("presets are reachable through the flat interface") {
  CHECK(airan_preset_count() == 13);
  bool saw_cbd_heavy = false;
  for (size_t i = 0; i < airan_preset_count(); ++i) {
    const char* name = airan_preset_name(i);
    REQUIRE(name != nullptr);
    if (std::string(name) == "cbd_heavy") saw_cbd_heavy = true;
  }
  CHECK(saw_cbd_heavy);
  CHECK(airan_preset_name(airan_preset_count()) == nullptr);

  ScenarioGuard g;
  REQUIRE(airan_scenario_preset("cbd_heavy", &g.sc) == AIRAN_OK);
  CHECK(std::string(airan_scenario_name(g.sc)) == "cbd_heavy");
  CHECK(airan_scenario_validate(g.sc) == AIRAN_OK);
}

TEST_CASE("failures carry the category and a message") {
  ScenarioGuard g;
  const int status = airan_scenario_load("/no/such/file.json", &g.sc);
  CHECK(status != AIRAN_OK);
  CHECK(std::string(airan_strstatus(status)) == "Io");
  CHECK(std::string(airan_last_error()).find("/no/such/file.json") != std::string::npos);

  const int parse = airan_scenario_parse("{ broken", "cli.json", &g.sc);
  CHECK(std::string(airan_strstatus(parse)) == "ParseError");
  CHECK(std::string(airan_last_error()).find("cli.json:1") != std::string::npos);

  const int preset = airan_scenario_preset("nope", &g.sc);
  CHECK(std::string(airan_strstatus(preset)) == "ValidationError");

  CHECK(airan_scenario_load(nullptr, &g.sc) != AIRAN_OK);
  CHECK(airan_scenario_validate(nullptr) != AIRAN_OK);
}

TEST_CASE("setting a parameter rewrites and revalidates") {
  ScenarioGuard g;
  REQUIRE(airan_scenario_preset("campus_light", &g.sc) == AIRAN_OK);
  CHECK(airan_scenario_set(g.sc, "seed", "9") == AIRAN_OK);
  CHECK(airan_scenario_set(g.sc, "traffic.vip_fraction", "0.5") == AIRAN_OK);

  const int bad = airan_scenario_set(g.sc, "traffic.vip_fraction", "7.0");
  CHECK(std::string(airan_strstatus(bad)) == "ValidationError");
  // The failed set left the previous value in place.
  char* text = nullptr;
  REQUIRE(airan_scenario_serialize(g.sc, &text) == AIRAN_OK);
  CHECK(std::string(text).find("\"vip_fraction\": 0.5") != std::string::npos);
  airan_string_free(text);
}

TEST_CASE("serialize round-trips through parse") {
  ScenarioGuard a;
  REQUIRE(airan_scenario_preset("hospital_medium", &a.sc) == AIRAN_OK);
  char* text = nullptr;
  REQUIRE(airan_scenario_serialize(a.sc, &text) == AIRAN_OK);

  ScenarioGuard b;
  REQUIRE(airan_scenario_parse(text, "roundtrip", &b.sc) == AIRAN_OK);
  char* text2 = nullptr;
  REQUIRE(airan_scenario_serialize(b.sc, &text2) == AIRAN_OK);
  CHECK(std::string(text) == std::string(text2));
  airan_string_free(text);
  airan_string_free(text2);
}

TEST_CASE("runs deliver kpis and a reproducible digest") {
  ScenarioGuard g;
  REQUIRE(airan_scenario_preset("hospital_light", &g.sc) == AIRAN_OK);

  ResultGuard r1, r2;
  REQUIRE(airan_run(g.sc, 0, nullptr, &r1.res) == AIRAN_OK);
  REQUIRE(airan_run(g.sc, 0, nullptr, &r2.res) == AIRAN_OK);
  CHECK(std::string(airan_result_digest(r1.res)) == airan_result_digest(r2.res));
  CHECK(std::string(airan_result_run_id(r1.res)) == "hospital_light-seed1");

  double arrivals = 0.0;
  REQUIRE(airan_result_kpi(r1.res, "arrivals", &arrivals) == AIRAN_OK);
  CHECK(arrivals > 0.0);

  double missing = 0.0;
  const int status = airan_result_kpi(r1.res, "no_such_kpi", &missing);
  CHECK(std::string(airan_strstatus(status)) == "ValidationError");

  REQUIRE(airan_result_kpi_count(r1.res) > 10);
  bool found = false;
  for (size_t i = 0; i < airan_result_kpi_count(r1.res); ++i) {
    const char* name = airan_result_kpi_name(r1.res, i);
    REQUIRE(name != nullptr);
    double v = 0.0;
    CHECK(airan_result_kpi(r1.res, name, &v) == AIRAN_OK);
    if (std::string(name) == "latency_mean_ms") found = true;
  }
  CHECK(found);
  CHECK(airan_result_kpi_name(r1.res, airan_result_kpi_count(r1.res)) == nullptr);

  // A seed override changes the run identity and (with overwhelming
  // probability) the digest.
  ResultGuard r3;
  REQUIRE(airan_run(g.sc, 42, nullptr, &r3.res) == AIRAN_OK);
  CHECK(std::string(airan_result_run_id(r3.res)) == "hospital_light-seed42");
  CHECK(std::string(airan_result_digest(r3.res)) != airan_result_digest(r1.res));
}
