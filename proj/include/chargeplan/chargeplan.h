#ifndef CHARGEPLAN_CHARGEPLAN_H
#define CHARGEPLAN_CHARGEPLAN_H

#include <stdint.h>

#if defined(CHARGEPLAN_BUILDING_LIBRARY)
#define CHP_API __attribute__((visibility("default")))
#else
#define CHP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as CLI exit codes for the first four values. */
typedef enum chp_status {
    CHP_OK = 0,
    CHP_INFEASIBLE = 1, /* infeasible problem, or violations found */
    CHP_USAGE = 2,      /* bad argument, configuration or input document */
    CHP_LIMIT = 3,      /* solver limit reached */
    CHP_INTERNAL = 4
} chp_status;

typedef struct chp_scenario chp_scenario;
typedef struct chp_result chp_result;

CHP_API const char* chp_version(void);

/* JSON error report for the last failing call on this thread, or "" if none. */
CHP_API const char* chp_last_error(void);

/* Strings returned through char** out-parameters are owned by the caller. */
CHP_API void chp_string_free(char* s);

CHP_API chp_status chp_scenario_load(const char* path, chp_scenario** out);
CHP_API chp_status chp_scenario_parse(const char* json, chp_scenario** out);
CHP_API chp_status chp_scenario_generate(uint64_t seed, int trucks, int locations, int days, double tightness,
                                         chp_scenario** out);
CHP_API chp_status chp_scenario_to_json(const chp_scenario* s, char** out);
/* Change the block length; price profiles are resampled by minute. */
CHP_API chp_status chp_scenario_set_block_minutes(chp_scenario* s, int minutes);
/* Writes {"valid": bool, "issues": [...]}. CHP_INFEASIBLE when issues were found. */
CHP_API chp_status chp_scenario_validate(const chp_scenario* s, char** report);
CHP_API void chp_scenario_free(chp_scenario* s);

/*
 * Options are a JSON object; every key is optional:
 *   alpha, slack_minutes, design ("codesign" | "fixed"), fixed_counts {loc: {type: n}},
 *   gap, node_limit, time_limit_s, trace (bool, node log on stderr)
 * The result handle is produced whenever the pipeline ran, including infeasible
 * outcomes, so the report can still be inspected.
 */
CHP_API chp_status chp_solve(const chp_scenario* s, const char* options_json, chp_result** out);
CHP_API chp_status chp_result_report(const chp_result* r, char** json);
CHP_API chp_status chp_result_power_csv(const chp_result* r, char** csv);
CHP_API chp_status chp_result_lp(const chp_result* r, char** lp);
CHP_API double chp_result_objective(const chp_result* r);
CHP_API void chp_result_free(chp_result* r);

/* policy: "main-depot-only:N:TYPE", "peak-demand-cover:TYPE" or "explicit:PATH".
   Options as for chp_solve plus "threads". */
CHP_API chp_status chp_compare(const chp_scenario* s, const char* policy, const char* options_json, char** report);

/*
 * Sweep options: alphas [..], slack_minutes [..], designs ["codesign", "fixed"],
 * fixed_counts, policy (alternative to fixed_counts), gap, node_limit,
 * time_limit_s, threads, out_dir.
 */
CHP_API chp_status chp_sweep(const chp_scenario* s, const char* options_json, char** summary);

#ifdef __cplusplus
}
#endif

#endif
