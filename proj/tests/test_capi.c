/* Exercises the C interface from plain C. */

#include <stdio.h>
#include <string.h>

#include "tumorsim/tumorsim.h"

static int failures = 0;

#define EXPECT(cond)                                                  \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                     \
    }                                                                 \
  } while (0)

int main(int argc, char** argv) {
  if (argc < 2) {
    fprintf(stderr, "usage: test_capi CONFIG\n");
    return 2;
  }

  ts_config* cfg = NULL;
  EXPECT(ts_config_load("/nonexistent/x.json", &cfg) == TS_CONFIG_ERROR);
  EXPECT(cfg == NULL);
  EXPECT(strlen(ts_last_error()) > 0);

  EXPECT(ts_config_parse("{\"model\": {}}", &cfg) == TS_CONFIG_ERROR);
  EXPECT(strstr(ts_last_error(), "model.") != NULL);

  EXPECT(ts_config_load(argv[1], &cfg) == TS_OK);
  EXPECT(cfg != NULL);
  EXPECT(ts_config_set_t_final(cfg, -1.0) == TS_CONFIG_ERROR);
  EXPECT(ts_config_set_t_final(cfg, 0.05) == TS_OK);
  EXPECT(ts_config_set_snapshots(cfg, 0) == TS_CONFIG_ERROR);
  EXPECT(ts_config_set_snapshots(cfg, 2) == TS_OK);

  char* text = NULL;
  EXPECT(ts_cfl_json(cfg, &text) == TS_OK);
  EXPECT(text != NULL && strstr(text, "\"feasible\": true") != NULL);
  ts_string_free(text);

  text = NULL;
  EXPECT(ts_horizon_json(cfg, &text) == TS_PRECONDITION_VIOLATED);
  EXPECT(text == NULL);

  ts_trajectory* traj = NULL;
  EXPECT(ts_run(cfg, &traj) == TS_OK);
  ts_termination term = TS_MODEL_ERROR;
  EXPECT(ts_trajectory_termination(traj, &term) == TS_OK);
  EXPECT(term == TS_COMPLETED);
  double radius = 0.0;
  EXPECT(ts_trajectory_final_radius(traj, &radius) == TS_OK);
  EXPECT(radius >= 1.0);
  EXPECT(ts_trajectory_summary_json(traj, &text) == TS_OK);
  EXPECT(text != NULL && strstr(text, "\"monitors\"") != NULL);
  ts_string_free(text);
  ts_trajectory_free(traj);

  EXPECT(ts_sweep_csv(cfg, "a_star_hi=0.81:0.9:3,a_star_lo=0.05", &text) == TS_OK);
  EXPECT(text != NULL && strncmp(text, "a_star_hi,a_star_lo,m02", 23) == 0);
  ts_string_free(text);
  EXPECT(ts_sweep_csv(cfg, "bogus=1", &text) == TS_CONFIG_ERROR);

  EXPECT(ts_refine_json(cfg, 1, &text) == TS_INVALID_PARAMETER);

  EXPECT(ts_cfl_json(NULL, &text) == TS_NULL_ARGUMENT);
  EXPECT(strcmp(ts_status_name(TS_OK), "ok") == 0);

  ts_config_set_force(cfg, 0);
  ts_config_free(cfg);
  ts_config_free(NULL);
  ts_trajectory_free(NULL);

  if (failures) {
    fprintf(stderr, "%d check(s) failed\n", failures);
    return 1;
  }
  printf("C interface checks passed\n");
  return 0;
}
