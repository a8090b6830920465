#ifndef AIRAN_H
#define AIRAN_H

/* C interface to the AI-native RAN simulation library.
 *
 * Every function that can fail returns an int status: 0 on success, a
 * positive error category otherwise (see airan_strstatus). The most
 * recent failure message for the calling thread is kept in
 * airan_last_error(). Objects are opaque handles owned by the caller
 * and released with the matching *_free function.
 */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define AIRAN_OK 0

typedef struct airan_scenario airan_scenario_t;
typedef struct airan_result airan_result_t;

/* --- library --- */

const char* airan_version(void);

/* Stable name of a status code ("OK", "ParseError", ...). */
const char* airan_strstatus(int status);

/* Message of the most recent failure on this thread. Never NULL. */
const char* airan_last_error(void);

/* --- scenarios --- */

/* Loads and validates a scenario file. */
int airan_scenario_load(const char* path, airan_scenario_t** out);

/* Same from in-memory text; `origin` labels error messages. */
int airan_scenario_parse(const char* text, const char* origin, airan_scenario_t** out);

/* Instantiates a bundled preset by name. */
int airan_scenario_preset(const char* name, airan_scenario_t** out);

size_t airan_preset_count(void);
const char* airan_preset_name(size_t index); /* NULL when out of range */

/* Overrides one scalar field by dotted path (e.g. "seed",
 * "traffic.vip_fraction", "policies.energy.policy") and revalidates.
 * On failure the scenario is unchanged. */
int airan_scenario_set(airan_scenario_t* sc, const char* dotted_path, const char* value);

/* Re-checks every constraint; the failing one is in airan_last_error(). */
int airan_scenario_validate(const airan_scenario_t* sc);

const char* airan_scenario_name(const airan_scenario_t* sc);

/* Canonical textual form; free the returned text with airan_string_free. */
int airan_scenario_serialize(const airan_scenario_t* sc, char** out_text);

void airan_string_free(char* text);
void airan_scenario_free(airan_scenario_t* sc);

/* --- runs --- */

/* Executes the scenario. `seed` overrides the scenario's seed unless 0.
 * A non-empty `out_dir` (NULL allowed) receives the metrics exports;
 * the result digest covers the same content either way. */
int airan_run(const airan_scenario_t* sc, uint64_t seed, const char* out_dir,
              airan_result_t** out);

const char* airan_result_run_id(const airan_result_t* r);

/* Content hash over the full ordered event-effect stream and exports;
 * byte-identical across runs of the same scenario and seed. */
const char* airan_result_digest(const airan_result_t* r);

size_t airan_result_kpi_count(const airan_result_t* r);
const char* airan_result_kpi_name(const airan_result_t* r, size_t index); /* NULL if out of range */

/* Looks one KPI up by name; fails when the run did not produce it. */
int airan_result_kpi(const airan_result_t* r, const char* name, double* out_value);

void airan_result_free(airan_result_t* r);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* AIRAN_H */
