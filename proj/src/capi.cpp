#include "tumorsim/tumorsim.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <sstream>
#include <string>

#include "tumorsim/config.hpp"
#include "tumorsim/export.hpp"
#include "tumorsim/orchestrator.hpp"

struct ts_config {
  tumorsim::RunConfig cfg;
};

struct ts_trajectory {
  tumorsim::Trajectory traj;
  tumorsim::RunConfig cfg;
};

namespace {

thread_local std::string last_error;

ts_status status_of(tumorsim::ErrorCode code) {
  using tumorsim::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidParameter: return TS_INVALID_PARAMETER;
    case ErrorCode::NonIntegerGrid: return TS_NON_INTEGER_GRID;
    case ErrorCode::SingularSystem: return TS_SINGULAR_SYSTEM;
    case ErrorCode::InvalidInitialData: return TS_INVALID_INITIAL_DATA;
    case ErrorCode::DomainSaturated: return TS_DOMAIN_SATURATED;
    case ErrorCode::DegenerateCoefficient: return TS_DEGENERATE_COEFFICIENT;
    case ErrorCode::MaximumPrincipleViolated: return TS_MAXIMUM_PRINCIPLE_VIOLATED;
    case ErrorCode::CflInfeasible: return TS_CFL_INFEASIBLE;
    case ErrorCode::PreconditionViolated: return TS_PRECONDITION_VIOLATED;
    case ErrorCode::InvariantViolated: return TS_INVARIANT_VIOLATED;
    case ErrorCode::ConfigError: return TS_CONFIG_ERROR;
    case ErrorCode::IoError: return TS_IO_ERROR;
  }
  return TS_INTERNAL_ERROR;
}

// Runs fn, translating exceptions into a status and the thread-local message.
template <class Fn>
ts_status guarded(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return TS_OK;
  } catch (const tumorsim::SimError& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return TS_INTERNAL_ERROR;
  } catch (const std::exception& e) {
    last_error = e.what();
    return TS_INTERNAL_ERROR;
  } catch (...) {
    last_error = "unknown error";
    return TS_INTERNAL_ERROR;
  }
}

ts_status null_argument(const char* what) {
  last_error = std::string(what) + " must not be NULL";
  return TS_NULL_ARGUMENT;
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* ts_last_error(void) { return last_error.c_str(); }

const char* ts_status_name(ts_status status) {
  switch (status) {
    case TS_OK: return "ok";
    case TS_INVALID_PARAMETER: return "invalid parameter";
    case TS_NON_INTEGER_GRID: return "non-integer grid";
    case TS_SINGULAR_SYSTEM: return "singular system";
    case TS_INVALID_INITIAL_DATA: return "invalid initial data";
    case TS_DOMAIN_SATURATED: return "domain saturated";
    case TS_DEGENERATE_COEFFICIENT: return "degenerate coefficient";
    case TS_MAXIMUM_PRINCIPLE_VIOLATED: return "maximum principle violated";
    case TS_CFL_INFEASIBLE: return "CFL infeasible";
    case TS_PRECONDITION_VIOLATED: return "precondition violated";
    case TS_INVARIANT_VIOLATED: return "invariant violated";
    case TS_CONFIG_ERROR: return "config error";
    case TS_IO_ERROR: return "I/O error";
    case TS_NULL_ARGUMENT: return "null argument";
    case TS_INTERNAL_ERROR: return "internal error";
  }
  return "unknown status";
}

void ts_string_free(char* s) { std::free(s); }

ts_status ts_config_load(const char* path, ts_config** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] { *out = new ts_config{tumorsim::parse_config_file(path)}; });
}

ts_status ts_config_parse(const char* json_text, ts_config** out) {
  if (!json_text) return null_argument("json_text");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] { *out = new ts_config{tumorsim::parse_config_text(json_text)}; });
}

void ts_config_free(ts_config* config) { delete config; }

ts_status ts_config_set_snapshots(ts_config* config, size_t count) {
  if (!config) return null_argument("config");
  return guarded([&] {
    if (count == 0) throw tumorsim::ConfigError("output.snapshots", "expected a positive integer");
    config->cfg.output.snapshots = count;
  });
}

ts_status ts_config_set_output_dir(ts_config* config, const char* dir) {
  if (!config) return null_argument("config");
  if (!dir) return null_argument("dir");
  return guarded([&] { config->cfg.output.directory = dir; });
}

ts_status ts_config_set_force(ts_config* config, int force) {
  if (!config) return null_argument("config");
  config->cfg.mode = force ? tumorsim::RunMode::Forced : tumorsim::RunMode::Strict;
  last_error.clear();
  return TS_OK;
}

ts_status ts_config_set_t_final(ts_config* config, double t_final) {
  if (!config) return null_argument("config");
  return guarded([&] {
    auto scheme = config->cfg.scheme;
    scheme.T_final = t_final;
    try {
      scheme.validate();
    } catch (const tumorsim::SimError& e) {
      throw tumorsim::ConfigError("scheme.T_final", e.what());
    }
    config->cfg.scheme = scheme;
  });
}

ts_status ts_config_output_dir(const ts_config* config, char** out) {
  if (!config) return null_argument("config");
  if (!out) return null_argument("out");
  return guarded([&] { *out = duplicate(config->cfg.output.directory); });
}

ts_status ts_cfl_json(const ts_config* config, char** out) {
  if (!config) return null_argument("config");
  if (!out) return null_argument("out");
  return guarded([&] {
    const auto report = tumorsim::validate_cfl(config->cfg.model, config->cfg.scheme);
    *out = duplicate(tumorsim::cfl_json(report, config->cfg.reference_C_CFL).dump(2));
  });
}

ts_status ts_horizon_json(const ts_config* config, char** out) {
  if (!config) return null_argument("config");
  if (!out) return null_argument("out");
  return guarded([&] {
    const auto hz = tumorsim::existence_horizon(config->cfg.model, config->cfg.scheme);
    *out = duplicate(tumorsim::horizon_json(hz).dump(2));
  });
}

ts_status ts_run(const ts_config* config, ts_trajectory** out) {
  if (!config) return null_argument("config");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    const auto& c = config->cfg;
    auto traj = tumorsim::run(c.model, c.scheme, c.alpha0.function(), c.c0.function(), c.run_options());
    *out = new ts_trajectory{std::move(traj), c};
  });
}

void ts_trajectory_free(ts_trajectory* traj) { delete traj; }

ts_status ts_trajectory_termination(const ts_trajectory* traj, ts_termination* out) {
  if (!traj) return null_argument("traj");
  if (!out) return null_argument("out");
  using tumorsim::Termination;
  switch (traj->traj.termination) {
    case Termination::Completed: *out = TS_COMPLETED; break;
    case Termination::HorizonReached: *out = TS_HORIZON_REACHED; break;
    case Termination::DomainSaturated: *out = TS_DOMAIN_SATURATED_STOP; break;
    case Termination::InvariantViolation: *out = TS_INVARIANT_VIOLATION; break;
    case Termination::ModelError: *out = TS_MODEL_ERROR; break;
  }
  last_error = traj->traj.message;
  return TS_OK;
}

ts_status ts_trajectory_violation_count(const ts_trajectory* traj, size_t* out) {
  if (!traj) return null_argument("traj");
  if (!out) return null_argument("out");
  *out = traj->traj.violations.size();
  return TS_OK;
}

ts_status ts_trajectory_final_radius(const ts_trajectory* traj, double* out) {
  if (!traj) return null_argument("traj");
  if (!out) return null_argument("out");
  *out = traj->traj.steps.empty() ? 0.0 : traj->traj.steps.back().radius;
  return TS_OK;
}

ts_status ts_trajectory_summary_json(const ts_trajectory* traj, char** out) {
  if (!traj) return null_argument("traj");
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = duplicate(tumorsim::summary_json(traj->traj, traj->cfg.reference_C_CFL).dump(2));
  });
}

ts_status ts_trajectory_write(const ts_trajectory* traj, const char* dir) {
  if (!traj) return null_argument("traj");
  return guarded([&] {
    const std::string target = dir ? dir : traj->cfg.output.directory;
    tumorsim::write_run_outputs(target, traj->traj, traj->cfg);
  });
}

ts_status ts_sweep_csv(const ts_config* config, const char* grid, char** out) {
  if (!config) return null_argument("config");
  if (!grid) return null_argument("grid");
  if (!out) return null_argument("out");
  return guarded([&] {
    const auto& c = config->cfg;
    const auto spec = tumorsim::parse_grid_spec(grid, c.scheme);
    const auto rows = tumorsim::sweep_horizon(c.model, c.scheme, spec);
    std::ostringstream os;
    tumorsim::write_sweep_csv(os, rows);
    *out = duplicate(os.str());
  });
}

ts_status ts_refine_json(const ts_config* config, size_t levels, char** out) {
  if (!config) return null_argument("config");
  if (!out) return null_argument("out");
  return guarded([&] {
    if (levels < 2) throw tumorsim::SimError(tumorsim::ErrorCode::InvalidParameter, "levels: need at least 2");
    const auto& c = config->cfg;
    const auto report = tumorsim::refine(c.model, c.scheme, c.alpha0.function(), c.c0.function(), levels);
    *out = duplicate(tumorsim::refinement_json(report).dump(2));
  });
}

}  // extern "C"
