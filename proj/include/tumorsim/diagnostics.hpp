#pragma once

// Discrete invariants and a-priori bounds checked along a run, plus the
// post-processing helpers that read them back.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tumorsim/kernel.hpp"
#include "tumorsim/transport.hpp"
#include "tumorsim/velocity.hpp"

namespace tumorsim {

// Monitor names used in violation logs.
inline constexpr const char* kMonitorCRange = "c_range";
inline constexpr const char* kMonitorAlphaDomain = "alpha_domain";
inline constexpr const char* kMonitorAlphaGlobal = "alpha_global";
inline constexpr const char* kMonitorUBound = "u_bound";
inline constexpr const char* kMonitorMass = "mass_balance";
inline constexpr const char* kMonitorEnergy = "velocity_energy";
inline constexpr const char* kMonitorFluxBv = "flux_bv";
inline constexpr const char* kMonitorConvexity = "convexity";
inline constexpr const char* kMonitorRadiusGrowth = "radius_growth";

inline constexpr double kIdentityTolerance = 1e-12;
inline constexpr double kBoundTolerance = 1e-9;

struct Violation {
  std::string monitor;
  std::size_t step = 0;
  std::size_t index = 0;  // cell or node index; 0 for scalar monitors
  double value = 0.0;
  double limit = 0.0;
};

struct StepDiagnostics {
  std::size_t step = 0;
  double t = 0.0;
  double mass_residual = 0.0;
  double c_min = 1.0;
  double c_max = 1.0;
  double alpha_min_on_domain = 0.0;
  double alpha_max = 0.0;
  double u_inf_norm = 0.0;
  double flux_bv = 0.0;
  double alpha_space_bv = 0.0;
  double radius = 0.0;
  double radius_monotone_part = 0.0;
  double alpha_time_variation = 0.0;  // h * sum_j |alpha_j^n - alpha_j^{n-1}|
  double velocity_energy = 0.0;
  double convexity_weight = 1.0;      // smallest upwind weight used to reach this level
};

/// Relative defect of the discrete mass balance between two levels.
double mass_balance_residual(const State& prev, const State& next, const SourceCoeffs& coeffs,
                             const SchemeConfig& config);

/// Pointwise bounds: 0 <= c <= 1, a_* <= alpha <= a^* on the tumour domain,
/// 0 <= alpha <= a^* everywhere, |u| <= u_max.
std::vector<Violation> bound_monitor(const State& state, const ModelParams& params,
                                     const SchemeConfig& config);

struct BvNorms {
  double alpha_space_bv = 0.0;
  double flux_bv = 0.0;
};

BvNorms bv_norms(const State& state, const ModelParams& params, const Mesh& mesh);

/// Smallest coefficient of the upwind convex combination built from the
/// velocity of `prev`; negative means the advection update is not convex.
double convexity_weight(const State& prev, const SchemeConfig& config);

struct DecompositionVerdict {
  bool pass = true;
  std::optional<std::size_t> first_offending_step;
};

/// Checks that ell(t_n) - t_n / (rho * C_CFL) is nonincreasing along the records.
DecompositionVerdict radius_decomposition(std::span<const StepDiagnostics> steps, double rho_ccfl);

/// Continuous constant extension of u beyond the radius.
NodalField extend_velocity_hat(const State& state, const Mesh& mesh);

/// Everything measurable from a single level (prev may be null at n = 0).
StepDiagnostics measure_step(const State* prev, const State& next, const SourceCoeffs* coeffs,
                             const ModelParams& params, const SchemeConfig& config,
                             const Mesh& mesh, double rho_ccfl);

/// Monitors that need the step record in addition to the state.
std::vector<Violation> step_monitor(const State* prev, const State& next,
                                    const StepDiagnostics& record, const ModelParams& params,
                                    const SchemeConfig& config);

struct RunSummary {
  double max_mass_residual = 0.0;
  double c_min = 1.0;
  double c_max = 1.0;
  double max_u_inf_norm = 0.0;
  double max_flux_bv = 0.0;
  double alpha_time_bv = 0.0;
  DecompositionVerdict decomposition;
  std::size_t violation_count = 0;
};

RunSummary summarize(std::span<const StepDiagnostics> steps, std::span<const Violation> violations,
                     double rho_ccfl);

}  // namespace tumorsim
