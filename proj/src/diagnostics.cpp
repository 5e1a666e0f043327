#include "tumorsim/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tumorsim {

namespace {
inline double pos(double v) noexcept { return v > 0.0 ? v : 0.0; }
inline double neg(double v) noexcept { return v < 0.0 ? -v : 0.0; }

bool alpha_within_bounds(const State& s, const SchemeConfig& config) {
  const double lo = config.a_star_lo * (1.0 - kBoundTolerance);
  const double hi = config.a_star_hi * (1.0 + kBoundTolerance);
  for (std::size_t j = 0; j < s.Jn; ++j) {
    if (s.alpha[j] < lo || s.alpha[j] > hi) return false;
  }
  return true;
}
}  // namespace

double mass_balance_residual(const State& prev, const State& next, const SourceCoeffs& coeffs,
                             const SchemeConfig& config) {
  const double h = config.h;
  double mass_prev = 0.0;
  double mass_next = 0.0;
  double source = 0.0;
  for (std::size_t j = 0; j < prev.alpha.size(); ++j) {
    const double a0 = prev.alpha[j];
    const double a1 = next.alpha[j];
    mass_prev += a0;
    mass_next += a1;
    source += pos(a0 - config.alpha_thr) * (1.0 - a0) * coeffs.b[j] -
              pos(a1 - config.alpha_thr) * coeffs.d[j];
  }
  mass_prev *= h;
  mass_next *= h;
  const double defect = mass_next - mass_prev - config.delta * h * source;
  return std::abs(defect) / std::max(mass_prev, 1e-30);
}

std::vector<Violation> bound_monitor(const State& state, const ModelParams& params,
                                     const SchemeConfig& config) {
  std::vector<Violation> out;
  for (std::size_t i = 0; i < state.c.size(); ++i) {
    const double v = state.c[i];
    if (v < -kIdentityTolerance) out.push_back({kMonitorCRange, state.n, i, v, 0.0});
    if (v > 1.0 + kIdentityTolerance) out.push_back({kMonitorCRange, state.n, i, v, 1.0});
  }

  const double lo = config.a_star_lo * (1.0 - kBoundTolerance);
  const double hi = config.a_star_hi * (1.0 + kBoundTolerance);
  for (std::size_t j = 0; j < state.alpha.size(); ++j) {
    const double a = state.alpha[j];
    if (j < state.Jn && (a < lo || a > hi)) {
      out.push_back({kMonitorAlphaDomain, state.n, j, a, a < lo ? config.a_star_lo : config.a_star_hi});
    }
    if (a < 0.0 || a > hi) {
      out.push_back({kMonitorAlphaGlobal, state.n, j, a, a < 0.0 ? 0.0 : config.a_star_hi});
    }
  }

  const double u_max = velocity_bounds(params, config).u_max * (1.0 + kBoundTolerance);
  for (std::size_t i = 0; i < state.u.size(); ++i) {
    if (std::abs(state.u[i]) > u_max) {
      out.push_back({kMonitorUBound, state.n, i, state.u[i], u_max});
    }
  }
  return out;
}

BvNorms bv_norms(const State& state, const ModelParams& params, const Mesh& mesh) {
  BvNorms out;
  const auto& a = state.alpha;
  const std::size_t J = a.size();
  if (J == 0) return out;

  // Jumps against the zero extension at both ends of (0, ellm).
  double bv = std::abs(a[0]) + std::abs(a[J - 1]);
  for (std::size_t j = 0; j + 1 < J; ++j) bv += std::abs(a[j + 1] - a[j]);
  out.alpha_space_bv = bv;

  const CellField g = stress_flux(a, state.u, state.Jn, params, mesh);
  double tv = 0.0;
  for (std::size_t j = 0; j + 1 < J; ++j) tv += std::abs(g[j + 1] - g[j]);
  out.flux_bv = tv;
  return out;
}

double convexity_weight(const State& prev, const SchemeConfig& config) {
  const double ratio = config.delta / config.h;
  double weight = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < prev.alpha.size(); ++j) {
    weight = std::min(weight, 1.0 - ratio * (neg(prev.u[j + 1]) + pos(prev.u[j])));
  }
  return weight;
}

DecompositionVerdict radius_decomposition(std::span<const StepDiagnostics> steps, double rho_ccfl) {
  DecompositionVerdict verdict;
  for (std::size_t i = 1; i < steps.size(); ++i) {
    const double prev = steps[i - 1].radius - steps[i - 1].t / rho_ccfl;
    const double next = steps[i].radius - steps[i].t / rho_ccfl;
    const double slack = kIdentityTolerance * std::max({1.0, std::abs(prev), std::abs(next)});
    if (next > prev + slack) {
      verdict.pass = false;
      verdict.first_offending_step = steps[i].step;
      break;
    }
  }
  return verdict;
}

NodalField extend_velocity_hat(const State& state, const Mesh& mesh) {
  NodalField out = state.u;
  const double edge = state.u[state.Jn];
  for (std::size_t j = state.Jn + 1; j < mesh.nodes(); ++j) out[j] = edge;
  return out;
}

StepDiagnostics measure_step(const State* prev, const State& next, const SourceCoeffs* coeffs,
                             const ModelParams& params, const SchemeConfig& config,
                             const Mesh& mesh, double rho_ccfl) {
  StepDiagnostics d;
  d.step = next.n;
  d.t = static_cast<double>(next.n) * config.delta;
  if (prev != nullptr && coeffs != nullptr) {
    d.mass_residual = mass_balance_residual(*prev, next, *coeffs, config);
    double variation = 0.0;
    for (std::size_t j = 0; j < next.alpha.size(); ++j) {
      variation += std::abs(next.alpha[j] - prev->alpha[j]);
    }
    d.alpha_time_variation = mesh.h() * variation;
    d.convexity_weight = convexity_weight(*prev, config);
  }

  const auto [c_lo, c_hi] = std::minmax_element(next.c.values.begin(), next.c.values.end());
  d.c_min = *c_lo;
  d.c_max = *c_hi;

  d.alpha_max = *std::max_element(next.alpha.values.begin(), next.alpha.values.end());
  d.alpha_min_on_domain = 0.0;
  if (next.Jn > 0) {
    d.alpha_min_on_domain = *std::min_element(next.alpha.values.begin(),
                                              next.alpha.values.begin() + static_cast<std::ptrdiff_t>(next.Jn));
  }

  double u_inf = 0.0;
  for (double v : next.u.values) u_inf = std::max(u_inf, std::abs(v));
  d.u_inf_norm = u_inf;

  const BvNorms bv = bv_norms(next, params, mesh);
  d.alpha_space_bv = bv.alpha_space_bv;
  d.flux_bv = bv.flux_bv;
  d.velocity_energy = velocity_energy(next.alpha, next.u, next.Jn, mesh.h());

  d.radius = next.radius(mesh);
  d.radius_monotone_part = d.radius - d.t / rho_ccfl;
  return d;
}

std::vector<Violation> step_monitor(const State* prev, const State& next,
                                    const StepDiagnostics& record, const ModelParams& params,
                                    const SchemeConfig& config) {
  std::vector<Violation> out;
  if (prev != nullptr) {
    if (record.mass_residual > kIdentityTolerance) {
      out.push_back({kMonitorMass, next.n, 0, record.mass_residual, kIdentityTolerance});
    }
    if (record.convexity_weight < -kIdentityTolerance) {
      out.push_back({kMonitorConvexity, next.n, 0, record.convexity_weight, 0.0});
    }
    if (next.Jn > prev->Jn + 1) {
      out.push_back({kMonitorRadiusGrowth, next.n, next.Jn, static_cast<double>(next.Jn),
                     static_cast<double>(prev->Jn + 1)});
    }
  }

  // The energy and BV estimates are only claimed inside the a_*/a^* band.
  if (alpha_within_bounds(next, config)) {
    const VelocityBounds bounds = velocity_bounds(params, config);
    const double energy_limit = bounds.energy_bound * (1.0 + kBoundTolerance);
    if (record.velocity_energy > energy_limit) {
      out.push_back({kMonitorEnergy, next.n, 0, record.velocity_energy, bounds.energy_bound});
    }
    const double bv_limit = bounds.bv_bound * (1.0 + kBoundTolerance);
    if (record.flux_bv > bv_limit) {
      out.push_back({kMonitorFluxBv, next.n, 0, record.flux_bv, bounds.bv_bound});
    }
  }
  return out;
}

RunSummary summarize(std::span<const StepDiagnostics> steps, std::span<const Violation> violations,
                     double rho_ccfl) {
  RunSummary s;
  for (const auto& d : steps) {
    s.max_mass_residual = std::max(s.max_mass_residual, d.mass_residual);
    s.c_min = std::min(s.c_min, d.c_min);
    s.c_max = std::max(s.c_max, d.c_max);
    s.max_u_inf_norm = std::max(s.max_u_inf_norm, d.u_inf_norm);
    s.max_flux_bv = std::max(s.max_flux_bv, d.flux_bv);
    s.alpha_time_bv += d.alpha_time_variation;
  }
  s.decomposition = radius_decomposition(steps, rho_ccfl);
  s.violation_count = violations.size();
  return s;
}

}  // namespace tumorsim
