/*
 * uswarm - hierarchical UAV-swarm data-collection mission planner.
 *
 * C interface to the planning engine: opaque handles, integer status codes,
 * and a thread-local textual error. Every object returned through an out
 * parameter is owned by the caller and released with the matching *_free.
 */
#ifndef USWARM_USWARM_H
#define USWARM_USWARM_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum usw_status {
  USW_OK = 0,
  USW_ERR_CONFIG = 1,     /* invalid parameters, counts, or configuration */
  USW_ERR_INFEASIBLE = 2, /* structurally valid but unsolvable instance */
  USW_ERR_IO = 3,         /* unreadable, unwritable, or malformed file */
  USW_ERR_INTERNAL = 4
} usw_status;

typedef struct usw_scenario usw_scenario;
typedef struct usw_deployment usw_deployment;
typedef struct usw_archive usw_archive;

const char* usw_version(void);

/* Message describing the last failure on this thread; empty when none. */
const char* usw_last_error(void);

void usw_string_free(char* s);

/* ----- scenario ---------------------------------------------------------- */

/* Random scenario with the stock parameter set; config_path (optional) points
 * to a JSON file of parameter overrides keyed by the conventional symbol
 * names (alpha, beta, f, c, g, Q, P_u_min, ..., sigma2_dbm_hz, eta_los,
 * eta_nlos). Deterministic for a given seed. */
usw_status usw_scenario_generate(int num_gus, int num_swarms, int num_tuavs, uint64_t seed,
                                 const char* config_path, usw_scenario** out);
usw_status usw_scenario_load(const char* path, usw_scenario** out);
usw_status usw_scenario_save(const usw_scenario* scenario, const char* path);

/* Newline-separated invariant violations; empty string when valid. */
usw_status usw_scenario_validate(const usw_scenario* scenario, char** report);

int usw_scenario_num_gus(const usw_scenario* scenario);
void usw_scenario_free(usw_scenario* scenario);

/* ----- pre-deployment ----------------------------------------------------- */

usw_status usw_predeploy(const usw_scenario* scenario, usw_deployment** out);
usw_status usw_deployment_load(const char* path, usw_deployment** out);
usw_status usw_deployment_save(const usw_deployment* deployment, const char* path);
int usw_deployment_num_tuavs(const usw_deployment* deployment);
/* Hover candidates of one T-UAV; negative on a bad index. */
int usw_deployment_num_candidates(const usw_deployment* deployment, int tuav);
void usw_deployment_free(usw_deployment* deployment);

/* ----- optimization -------------------------------------------------------- */

/* engine: "ins-woa" or "nsga2". params_json (optional) is an object with any
 * of: population, iterations, seed, offset_radius, budget, threads,
 * spiral_b. */
usw_status usw_optimize(const usw_scenario* scenario, const usw_deployment* deployment,
                        const char* engine, const char* params_json, usw_archive** out);

int usw_archive_size(const usw_archive* archive);
long long usw_archive_evaluations(const usw_archive* archive);
/* out_f = {TEU joules, AEG joules, ADG seconds}. */
usw_status usw_archive_objectives(const usw_archive* archive, int index, double out_f[3]);
usw_status usw_archive_violation(const usw_archive* archive, int index, double* out);
usw_status usw_archive_compromise(const usw_archive* archive, int* index);
/* Exact hypervolume against a reference no member may exceed. */
usw_status usw_archive_hypervolume(const usw_archive* archive, const double reference[3],
                                   double* out);
usw_status usw_archive_export_csv(const usw_archive* archive, const char* path);
usw_status usw_archive_export_trajectories(const usw_archive* archive, const char* path);
void usw_archive_free(usw_archive* archive);

/* ----- experiment harness --------------------------------------------------- */

/* plan_json keys: users (array), engines (array of "ins-woa"/"nsga2"),
 * seeds (array), swarms, tuavs, population, iterations, offset_radius,
 * threads, budget, config (path). Writes per-run archives, trajectories,
 * summary.csv, series.csv and records.json into out_dir. */
usw_status usw_run_compare(const char* plan_json, const char* out_dir);

/* Figure-data files (objective series, power histograms, hover altitudes,
 * wall times) from a records.json produced by usw_run_compare. */
usw_status usw_write_report(const char* records_json, const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* USWARM_USWARM_H */
