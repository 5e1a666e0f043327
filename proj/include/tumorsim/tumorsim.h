#ifndef TUMORSIM_H
#define TUMORSIM_H

/* C interface of the tumour growth simulator.
 *
 * Handles are opaque. Every call returns a ts_status; on failure the message
 * of the last error on the calling thread is available from ts_last_error().
 * Strings handed out by the library are released with ts_string_free. */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define TS_API __declspec(dllexport)
#else
#define TS_API __attribute__((visibility("default")))
#endif

typedef enum ts_status {
  TS_OK = 0,
  TS_INVALID_PARAMETER,
  TS_NON_INTEGER_GRID,
  TS_SINGULAR_SYSTEM,
  TS_INVALID_INITIAL_DATA,
  TS_DOMAIN_SATURATED,
  TS_DEGENERATE_COEFFICIENT,
  TS_MAXIMUM_PRINCIPLE_VIOLATED,
  TS_CFL_INFEASIBLE,
  TS_PRECONDITION_VIOLATED,
  TS_INVARIANT_VIOLATED,
  TS_CONFIG_ERROR,
  TS_IO_ERROR,
  TS_NULL_ARGUMENT,
  TS_INTERNAL_ERROR
} ts_status;

typedef enum ts_termination {
  TS_COMPLETED = 0,
  TS_HORIZON_REACHED,
  TS_DOMAIN_SATURATED_STOP,
  TS_INVARIANT_VIOLATION,
  TS_MODEL_ERROR
} ts_termination;

typedef struct ts_config ts_config;
typedef struct ts_trajectory ts_trajectory;

TS_API const char* ts_last_error(void);
TS_API const char* ts_status_name(ts_status status);
TS_API void ts_string_free(char* s);

TS_API ts_status ts_config_load(const char* path, ts_config** out);
TS_API ts_status ts_config_parse(const char* json_text, ts_config** out);
TS_API void ts_config_free(ts_config* config);
TS_API ts_status ts_config_set_snapshots(ts_config* config, size_t count);
TS_API ts_status ts_config_set_output_dir(ts_config* config, const char* dir);
TS_API ts_status ts_config_set_force(ts_config* config, int force);
TS_API ts_status ts_config_set_t_final(ts_config* config, double t_final);
TS_API ts_status ts_config_output_dir(const ts_config* config, char** out);

/* JSON documents; *out is owned by the caller. */
TS_API ts_status ts_cfl_json(const ts_config* config, char** out);
TS_API ts_status ts_horizon_json(const ts_config* config, char** out);

/* Fails with TS_CFL_INFEASIBLE for strict configurations outside the CFL
 * window. Model errors during the run end it early; see the termination. */
TS_API ts_status ts_run(const ts_config* config, ts_trajectory** out);
TS_API void ts_trajectory_free(ts_trajectory* traj);
TS_API ts_status ts_trajectory_termination(const ts_trajectory* traj, ts_termination* out);
TS_API ts_status ts_trajectory_violation_count(const ts_trajectory* traj, size_t* out);
TS_API ts_status ts_trajectory_final_radius(const ts_trajectory* traj, double* out);
TS_API ts_status ts_trajectory_summary_json(const ts_trajectory* traj, char** out);
/* Writes snapshots, radius.csv, summary.json and plots into dir (NULL: the
 * configured output directory). */
TS_API ts_status ts_trajectory_write(const ts_trajectory* traj, const char* dir);

/* grid: "a_star_hi=LO:HI:N,a_star_lo=V,m02=LO:HI:N". CSV table in *out. */
TS_API ts_status ts_sweep_csv(const ts_config* config, const char* grid, char** out);
TS_API ts_status ts_refine_json(const ts_config* config, size_t levels, char** out);

#ifdef __cplusplus
}
#endif

#endif
