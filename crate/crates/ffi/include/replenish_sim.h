#ifndef REPLENISH_SIM_H
#define REPLENISH_SIM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. Zero is success.
 */
typedef enum ReplenishStatus {
  REPLENISH_STATUS_OK = 0,
  REPLENISH_STATUS_NULL_POINTER = 1,
  REPLENISH_STATUS_INVALID_UTF8 = 2,
  REPLENISH_STATUS_PARSE_ERROR = 3,
  REPLENISH_STATUS_INVALID_SCENARIO = 4,
  REPLENISH_STATUS_UNKNOWN_POLICY = 5,
  REPLENISH_STATUS_UNKNOWN_BUNDLED = 6,
  REPLENISH_STATUS_RUN_FAILED = 7,
  REPLENISH_STATUS_IO = 8,
  REPLENISH_STATUS_PANIC = 9,
} ReplenishStatus;

/**
 * Opaque result of one simulation run.
 */
typedef struct ReplenishReport ReplenishReport;

/**
 * Opaque parsed and validated scenario.
 */
typedef struct ReplenishScenario ReplenishScenario;

/**
 * Headline metrics of a run. Money fields are integer cents.
 */
typedef struct ReplenishMetrics {
  double stockout_rate;
  double fill_rate;
  double avg_inventory_value;
  double inventory_turnover;
  int64_t total_cost_cents;
  int64_t purchase_cost_cents;
  int64_t holding_cost_cents;
  int64_t stockout_cost_cents;
  int64_t spoilage_cost_cents;
  uint64_t demand_units;
  uint64_t sales_units;
  uint64_t stockout_units;
  uint64_t spoiled_units;
  uint64_t orders_placed;
  uint64_t adopted;
  double trend_roi;
} ReplenishMetrics;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until the next call.
 */
const char *replenish_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *replenish_version(void);

/**
 * Parses and validates TOML scenario text.
 *
 * # Safety
 * `toml` must be a NUL-terminated string and `out` a valid pointer.
 */
enum ReplenishStatus replenish_scenario_from_toml(const char *toml, struct ReplenishScenario **out);

/**
 * Loads and validates a scenario file.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a valid pointer.
 */
enum ReplenishStatus replenish_scenario_load(const char *path, struct ReplenishScenario **out);

/**
 * One of the bundled benchmarks: `B0`, `B1` or `B2`.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum ReplenishStatus replenish_scenario_bundled(const char *name, struct ReplenishScenario **out);

/**
 * SHA-256 of the scenario as lowercase hex. Free with [`replenish_string_free`].
 *
 * # Safety
 * `scenario` must come from this library and `out` must be a valid pointer.
 */
enum ReplenishStatus replenish_scenario_hash(const struct ReplenishScenario *scenario, char **out);

/**
 * # Safety
 * `scenario` must come from this library or be null; it must not be used afterwards.
 */
void replenish_scenario_free(struct ReplenishScenario *scenario);

/**
 * Runs `policy` (e.g. `"agentic"`) with its default agent toggles.
 *
 * # Safety
 * `scenario` must come from this library, `policy` must be a NUL-terminated string and `out` a
 * valid pointer.
 */
enum ReplenishStatus replenish_run(const struct ReplenishScenario *scenario,
                                   const char *policy,
                                   uint64_t seed,
                                   struct ReplenishReport **out);

/**
 * Runs `policy` with explicit negotiation, supplier-selection and trend toggles.
 *
 * # Safety
 * Same as [`replenish_run`].
 */
enum ReplenishStatus replenish_run_with_toggles(const struct ReplenishScenario *scenario,
                                                const char *policy,
                                                uint64_t seed,
                                                bool negotiation,
                                                bool supplier_selection,
                                                bool trend,
                                                struct ReplenishReport **out);

/**
 * # Safety
 * `report` must come from this library and `out` must be a valid pointer.
 */
enum ReplenishStatus replenish_report_metrics(const struct ReplenishReport *report,
                                              struct ReplenishMetrics *out);

/**
 * Full report as JSON. Free with [`replenish_string_free`].
 *
 * # Safety
 * `report` must come from this library and `out` must be a valid pointer.
 */
enum ReplenishStatus replenish_report_to_json(const struct ReplenishReport *report, char **out);

/**
 * Writes the run's CSV files and summary into `dir`, creating it if needed.
 *
 * # Safety
 * `report` must come from this library and `dir` must be a NUL-terminated string.
 */
enum ReplenishStatus replenish_report_write(const struct ReplenishReport *report, const char *dir);

/**
 * # Safety
 * `report` must come from this library or be null; it must not be used afterwards.
 */
void replenish_report_free(struct ReplenishReport *report);

/**
 * # Safety
 * `s` must be a string returned by this library or null.
 */
void replenish_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* REPLENISH_SIM_H */
