#pragma once

// Coupled time loop, CFL window, existence horizon, parameter sweeps and
// refinement studies.

#include <optional>
#include <string>
#include <vector>

#include "tumorsim/diagnostics.hpp"
#include "tumorsim/kernel.hpp"
#include "tumorsim/transport.hpp"

namespace tumorsim {

struct CflReport {
  double C_CFL = 0.0;      // +inf when a^* == alphaR
  double ratio = 0.0;      // delta / h
  double lower = 0.0;      // rho * C_CFL
  double delta_cap = 0.0;  // min((1-rho)/s2, 2(1-rho)/(1+s2))
  bool unbounded = false;
  bool feasible = false;
};

CflReport validate_cfl(const ModelParams& params, const SchemeConfig& config);

struct Horizon {
  double F_min = 0.0;
  double F_max = 0.0;
  double T_m = 0.0;
  double T_M = 0.0;
  double T_ell = 0.0;
  double T_star = 0.0;
};

/// Requires a_star_lo < alpha_thr and m02 < a_star_hi (PreconditionViolated).
Horizon existence_horizon(const ModelParams& params, const SchemeConfig& config);

/// Level n together with the source factors (built from level n-1) that produced it.
struct StepResult {
  State state;
  SourceCoeffs coeffs;
};

StepResult advance(const State& prev, const ModelParams& params, const SchemeConfig& config,
                   const Mesh& mesh);

/// transport -> radius -> velocity -> oxygen. Errors carry the step index.
State step(const State& prev, const ModelParams& params, const SchemeConfig& config,
           const Mesh& mesh);

/// init_state followed by the velocity solve at n = 0.
State initial_state(const ScalarFunction& alpha0, const ScalarFunction& c0,
                    const ModelParams& params, const SchemeConfig& config, const Mesh& mesh);

enum class RunMode {
  Strict,  // CFL must be feasible; any monitor violation stops the run
  Forced,  // CFL is reported but not enforced; violations are only logged
};

enum class Termination {
  Completed,
  HorizonReached,
  DomainSaturated,
  InvariantViolation,
  ModelError,
};

const char* to_string(Termination t) noexcept;
const char* to_string(RunMode m) noexcept;

struct RunOptions {
  std::size_t snapshots = 10;
  RunMode mode = RunMode::Strict;
  bool stop_at_horizon = false;
};

struct Snapshot {
  double t = 0.0;
  State state;
};

struct Trajectory {
  ModelParams params;
  SchemeConfig config;
  RunMode mode = RunMode::Strict;
  CflReport cfl;
  std::optional<Horizon> horizon;
  std::string horizon_error;

  State initial;
  std::vector<Snapshot> snapshots;  // uniformly spaced, the last one is the final level
  std::vector<StepDiagnostics> steps;  // one record per level, including n = 0
  std::vector<Violation> violations;
  State final_state;

  Termination termination = Termination::Completed;
  std::string message;
  RunSummary summary;

  double rho_ccfl() const noexcept { return config.rho * cfl.C_CFL; }
};

/// Step indices at which snapshots are stored for a run of `steps` steps.
std::vector<std::size_t> snapshot_schedule(std::size_t steps, std::size_t count);

std::size_t step_count(const SchemeConfig& config);

Trajectory run(const ModelParams& params, const SchemeConfig& config, const ScalarFunction& alpha0,
               const ScalarFunction& c0, const RunOptions& options = {});

struct SweepAxis {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 1;

  std::vector<double> values() const;
};

struct SweepGrid {
  SweepAxis a_star_hi;
  SweepAxis a_star_lo;
  SweepAxis m02;
};

struct SweepRow {
  double a_star_hi = 0.0;
  double a_star_lo = 0.0;
  double m02 = 0.0;
  std::optional<Horizon> horizon;  // empty when the point violates the preconditions
};

std::vector<SweepRow> sweep_horizon(const ModelParams& params, const SchemeConfig& config,
                                    const SweepGrid& grid);

/// Index of the first row attaining the largest T_star among rows accepted
/// by `keep`; empty when no row qualifies.
template <class Pred>
std::optional<std::size_t> argmax_t_star(const std::vector<SweepRow>& rows, Pred keep) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].horizon || !keep(rows[i])) continue;
    if (!best || rows[i].horizon->T_star > rows[*best].horizon->T_star) best = i;
  }
  return best;
}

struct RefinementLevel {
  double h = 0.0;
  double delta = 0.0;
  State final_state;
  double alpha_space_bv = 0.0;
  double alpha_time_bv = 0.0;
  Termination termination = Termination::Completed;
  std::string message;
};

struct RefinementReport {
  std::vector<RefinementLevel> levels;
  std::vector<double> l1_differences;  // between consecutive levels
  std::vector<double> ratios;          // consecutive l1_differences
};

/// L1 distance between two cell fields on nested uniform grids.
double l1_difference(const CellField& coarse, double h_coarse, const CellField& fine, double h_fine);

/// Runs the configuration at (h, delta), (h/2, delta/2), ... in parallel.
RefinementReport refine(const ModelParams& params, const SchemeConfig& config,
                        const ScalarFunction& alpha0, const ScalarFunction& c0, std::size_t levels,
                        RunMode mode = RunMode::Forced);

}  // namespace tumorsim
