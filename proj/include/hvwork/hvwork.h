/* C interface to the hidden-variables workbench.
 *
 * Everything crosses this boundary as opaque handles, status codes, plain
 * numbers, or JSON text. Strings returned through char** out-parameters are
 * heap-allocated; release them with hvw_string_free. Handles are released
 * with hvw_model_free. On any failure the function returns a nonzero status
 * and hvw_last_error() describes it (thread-local).
 */
#ifndef HVWORK_HVWORK_H
#define HVWORK_HVWORK_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hvw_status {
  HVW_OK = 0,
  HVW_ERR_ARGUMENT = 1,
  HVW_ERR_LOOKUP = 2,
  HVW_ERR_PARSE = 3,
  HVW_ERR_INVARIANT = 4,
  HVW_ERR_PRECONDITION = 5,
  HVW_ERR_WRONG_AUDIT = 6,
  HVW_ERR_TOTAL_NO_SHOW = 7,
  HVW_ERR_NO_WITNESS = 8,
  HVW_ERR_IO = 9,
  HVW_ERR_INTERNAL = 10,
} hvw_status;

typedef struct hvw_model hvw_model;

const char* hvw_version(void);
const char* hvw_status_name(hvw_status status);
/* Message for the most recent failure on this thread; never NULL. */
const char* hvw_last_error(void);
void hvw_string_free(char* text);
void hvw_model_free(hvw_model* model);

/* ---- model files ------------------------------------------------------ */

hvw_status hvw_model_parse_json(const char* text, hvw_model** out);
hvw_status hvw_model_load_file(const char* path, hvw_model** out);
hvw_status hvw_model_to_json(const hvw_model* model, char** out_json);
hvw_status hvw_model_save_file(const hvw_model* model, const char* path);

/* ---- audits on a model ------------------------------------------------ */

/* {"label", "classification": {...}, "overlaps": [...], "composite": bool} */
hvw_status hvw_model_describe(const hvw_model* model, char** out_json);

hvw_status hvw_model_overlap(const hvw_model* model, const char* state_a,
                             const char* state_b, double* q_base,
                             double* q_under_first, double* q_under_second);

/* outcomes_json is a JSON array of outcome labels. */
hvw_status hvw_check_born(const hvw_model* model, const char* state_id,
                          const char* observable_id, const char* outcomes_json,
                          double* residual);
hvw_status hvw_check_conditional(const hvw_model* model, const char* state_id,
                                 const char* observable_id,
                                 const char* outcomes_json, double* residual);
hvw_status hvw_reproduced_probability(const hvw_model* model,
                                      const char* state_id,
                                      const char* observable_id,
                                      const char* outcomes_json,
                                      double* probability);

/* ---- builders ---------------------------------------------------------- */

/* states_json: [{"id": "...", "amplitudes": [[re, im], ...]}, ...]
 * observables_json: [{"id": "...", "outcomes": [...], "basis": [...]}, ...]
 */
hvw_status hvw_build_mixed_toy(const char* states_json,
                               const char* observables_json, hvw_model** out);
/* geometry: "disjoint-intervals" or "unit-circle-rays" */
hvw_status hvw_build_segregated_toy(const char* states_json,
                                    const char* observables_json,
                                    const char* geometry, hvw_model** out);
hvw_status hvw_build_uniform_state_dependent(const char* measurement_json,
                                             const char* observable_id,
                                             const char* states_json,
                                             hvw_model** out);

/* ---- transforms -------------------------------------------------------- */

hvw_status hvw_segregate(const hvw_model* model, hvw_model** out);
hvw_status hvw_mix(const hvw_model* model, hvw_model** out);
/* suite_json may be NULL for the full singleton suite of model a. */
hvw_status hvw_equivalence(const hvw_model* a, const hvw_model* b,
                           const char* suite_json, char** report_json);

/* ---- composition ------------------------------------------------------- */

/* rule: "independent", "compatible", or "compact-native" */
hvw_status hvw_compose(const hvw_model* component, const char* rule,
                       const char* state_a, const char* state_b, int L,
                       hvw_model** out);
hvw_status hvw_compose_prism(const hvw_model* component, const char* state_a,
                             const char* state_b, int L,
                             const char* measurement_json,
                             const char* observable_id, hvw_model** out);
/* The deterministic state-independent table consistent with the
 * antidistinguishing Born zeros, for contradiction/additivity fixtures. */
hvw_status hvw_compose_forced(const hvw_model* component, const char* state_a,
                              const char* state_b, int L,
                              const char* measurement_json,
                              const char* observable_id, hvw_model** out);

hvw_status hvw_check_compatibility(const hvw_model* composite,
                                   const hvw_model* component,
                                   const char* state_a, const char* state_b,
                                   char** report_json);
hvw_status hvw_check_compactness(const hvw_model* composite,
                                 const hvw_model* component,
                                 const char* state_a, const char* state_b,
                                 char** report_json);
hvw_status hvw_common_support_measure(const hvw_model* composite,
                                      double* measure);

/* ---- antidistinguishing scenarios -------------------------------------- */

hvw_status hvw_pbr_basis_l2(char** measurement_json);
/* Certification report for a scenario document. */
hvw_status hvw_pbr_verify(const char* scenario_json, char** report_json);
hvw_status hvw_pbr_detect(const hvw_model* composite, const char* scenario_json,
                          char** verdict_json);
hvw_status hvw_pbr_inefficiency(const hvw_model* composite, char** report_json);
hvw_status hvw_pbr_additivity(const hvw_model* composite, const char* cell_id,
                              char** report_json);

/* ---- demos and the property suite -------------------------------------- */

/* name: toy, segregate, mix, pbr, or additivity. */
hvw_status hvw_run_demo(const char* name, double tolerance, char** report_json);
/* {"file name": "json text", ...} fixture documents behind a demo. */
hvw_status hvw_demo_models(const char* name, char** files_json);
hvw_status hvw_property_suite(uint64_t seed, int count, char** report_json);

#ifdef __cplusplus
}
#endif

#endif /* HVWORK_HVWORK_H */
