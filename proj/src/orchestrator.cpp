#include "tumorsim/orchestrator.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <map>
#include <sstream>

#include "tumorsim/oxygen.hpp"
#include "tumorsim/velocity.hpp"

namespace tumorsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

SimError annotate(const SimError& e, std::size_t n) {
  std::ostringstream os;
  os << "step " << n << ": " << e.what();
  return SimError(e.code(), os.str());
}

// Keeps the worst offender per monitor so a long forced run logs at most one
// entry per monitor and step.
void append_condensed(std::vector<Violation>& log, std::vector<Violation> found) {
  std::map<std::string, Violation> worst;
  for (auto& v : found) {
    auto it = worst.find(v.monitor);
    if (it == worst.end() ||
        std::abs(v.value - v.limit) > std::abs(it->second.value - it->second.limit)) {
      worst[v.monitor] = std::move(v);
    }
  }
  for (auto& [name, v] : worst) log.push_back(std::move(v));
}

}  // namespace

const char* to_string(Termination t) noexcept {
  switch (t) {
    case Termination::Completed: return "completed";
    case Termination::HorizonReached: return "horizon_reached";
    case Termination::DomainSaturated: return "domain_saturated";
    case Termination::InvariantViolation: return "invariant_violation";
    case Termination::ModelError: return "model_error";
  }
  return "unknown";
}

const char* to_string(RunMode m) noexcept {
  return m == RunMode::Strict ? "strict" : "forced";
}

CflReport validate_cfl(const ModelParams& params, const SchemeConfig& config) {
  CflReport r;
  const double excess = std::abs(config.a_star_hi - params.alphaR);
  const double gap = std::abs(1.0 - config.a_star_hi);
  r.ratio = config.delta / config.h;
  r.delta_cap = std::min((1.0 - config.rho) / params.s2, 2.0 * (1.0 - config.rho) / (1.0 + params.s2));
  if (excess == 0.0) {
    // No velocity is generated inside the a^* band, so neither side of the
    // ratio window constrains the step.
    r.unbounded = true;
    r.C_CFL = kInf;
    r.lower = 0.0;
    r.feasible = config.delta < r.delta_cap;
    return r;
  }
  r.C_CFL = std::sqrt(config.a_star_lo) * params.mu * gap * gap / (2.0 * config.ellm * excess);
  r.lower = config.rho * r.C_CFL;
  r.feasible = r.lower <= r.ratio && r.ratio <= r.C_CFL && config.delta < r.delta_cap;
  return r;
}

Horizon existence_horizon(const ModelParams& params, const SchemeConfig& config) {
  if (!(config.a_star_lo < config.alpha_thr)) {
    throw SimError(ErrorCode::PreconditionViolated,
                   "existence horizon needs a_star_lo < alpha_thr");
  }
  if (!(config.m02 < config.a_star_hi)) {
    throw SimError(ErrorCode::PreconditionViolated, "existence horizon needs m02 < a_star_hi");
  }
  const double hi = config.a_star_hi;
  const double excess = std::abs(hi - params.alphaR);
  const double gap = std::abs(1.0 - hi);
  const double mu32 = std::pow(params.mu, 1.5);
  const double spread = config.ellm * std::sqrt(params.k) * excess / (mu32 * std::pow(gap, 2.5));

  Horizon hz;
  hz.F_min = spread + hi * (hi - params.alphaR) / (params.mu * gap * gap);
  hz.T_m = std::log((hz.F_min + params.s2 * config.alpha_thr) /
                    (hz.F_min + config.a_star_lo * params.s2)) / params.s2;
  hz.F_max = 1.0 - config.alpha_thr + spread / config.a_star_lo;
  hz.T_M = (hi - config.m02) / hz.F_max;
  hz.T_ell = config.rho * validate_cfl(params, config).C_CFL * (config.ellm - config.ell0);
  hz.T_star = std::min({hz.T_m, hz.T_M, hz.T_ell});
  return hz;
}

StepResult advance(const State& prev, const ModelParams& params, const SchemeConfig& config,
                   const Mesh& mesh) {
  const std::size_t n = prev.n + 1;
  try {
    StepResult out;
    out.coeffs = source_coeffs(prev.c, params);
    State& next = out.state;
    next.n = n;
    next.alpha = advance_alpha(prev, out.coeffs, config);
    next.Jn = recover_radius(next.alpha, config);
    next.u = solve_velocity(next.alpha, next.Jn, params, mesh);
    next.c = solve_oxygen(next.alpha, prev.c, next.Jn, params, config, mesh);
    return out;
  } catch (const SimError& e) {
    throw annotate(e, n);
  }
}

State step(const State& prev, const ModelParams& params, const SchemeConfig& config,
           const Mesh& mesh) {
  return advance(prev, params, config, mesh).state;
}

State initial_state(const ScalarFunction& alpha0, const ScalarFunction& c0,
                    const ModelParams& params, const SchemeConfig& config, const Mesh& mesh) {
  State s = init_state(alpha0, c0, config, mesh);
  try {
    s.u = solve_velocity(s.alpha, s.Jn, params, mesh);
  } catch (const SimError& e) {
    throw annotate(e, 0);
  }
  return s;
}

std::vector<std::size_t> snapshot_schedule(std::size_t steps, std::size_t count) {
  if (steps == 0) return {0};
  if (count == 0) return {steps};
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i <= count; ++i) {
    const auto n = static_cast<std::size_t>(
        std::llround(static_cast<double>(i) * static_cast<double>(steps) / static_cast<double>(count)));
    if (n > 0 && (out.empty() || out.back() != n)) out.push_back(n);
  }
  return out;
}

std::size_t step_count(const SchemeConfig& config) {
  return static_cast<std::size_t>(std::floor(config.T_final / config.delta + 1e-9));
}

Trajectory run(const ModelParams& params, const SchemeConfig& config, const ScalarFunction& alpha0,
               const ScalarFunction& c0, const RunOptions& options) {
  params.validate();
  const Mesh mesh = build_mesh(config);

  Trajectory traj;
  traj.params = params;
  traj.config = config;
  traj.mode = options.mode;
  traj.cfl = validate_cfl(params, config);
  if (options.mode == RunMode::Strict && !traj.cfl.feasible) {
    std::ostringstream os;
    os << "CFL window violated: delta/h = " << traj.cfl.ratio << ", window [" << traj.cfl.lower
       << ", " << traj.cfl.C_CFL << "], delta cap " << traj.cfl.delta_cap;
    throw SimError(ErrorCode::CflInfeasible, os.str());
  }
  try {
    traj.horizon = existence_horizon(params, config);
  } catch (const SimError& e) {
    traj.horizon_error = e.what();
  }

  const double rho_ccfl = traj.rho_ccfl();
  const std::size_t N = step_count(config);
  const auto schedule = snapshot_schedule(N, options.snapshots);

  traj.initial = initial_state(alpha0, c0, params, config, mesh);
  traj.steps.reserve(N + 1);
  traj.steps.push_back(measure_step(nullptr, traj.initial, nullptr, params, config, mesh, rho_ccfl));
  {
    auto found = bound_monitor(traj.initial, params, config);
    auto more = step_monitor(nullptr, traj.initial, traj.steps.back(), params, config);
    found.insert(found.end(), more.begin(), more.end());
    append_condensed(traj.violations, std::move(found));
  }
  if (N == 0) traj.snapshots.push_back({0.0, traj.initial});

  State current = traj.initial;
  std::size_t next_snapshot = 0;
  bool stop = options.mode == RunMode::Strict && !traj.violations.empty();
  if (stop) {
    traj.termination = Termination::InvariantViolation;
    traj.message = "initial state violates " + traj.violations.front().monitor;
  }

  for (std::size_t n = 1; n <= N && !stop; ++n) {
    StepResult result;
    try {
      result = advance(current, params, config, mesh);
    } catch (const SimError& e) {
      // A step that blows up is usually the consequence of negative upwind
      // weights; log that cause too, since no record is produced for it.
      const double weight = convexity_weight(current, config);
      if (weight < -kIdentityTolerance) traj.violations.push_back({kMonitorConvexity, n, 0, weight, 0.0});
      traj.termination = e.code() == ErrorCode::DomainSaturated ? Termination::DomainSaturated
                                                                : Termination::ModelError;
      traj.message = e.what();
      break;
    }

    const StepDiagnostics record =
        measure_step(&current, result.state, &result.coeffs, params, config, mesh, rho_ccfl);
    auto found = bound_monitor(result.state, params, config);
    auto more = step_monitor(&current, result.state, record, params, config);
    found.insert(found.end(), more.begin(), more.end());
    const bool violated = !found.empty();
    append_condensed(traj.violations, std::move(found));
    traj.steps.push_back(record);
    current = std::move(result.state);

    if (next_snapshot < schedule.size() && schedule[next_snapshot] == n) {
      traj.snapshots.push_back({record.t, current});
      ++next_snapshot;
    }

    if (violated && options.mode == RunMode::Strict) {
      traj.termination = Termination::InvariantViolation;
      traj.message = "step " + std::to_string(n) + ": monitor " + traj.violations.back().monitor +
                     " violated";
      break;
    }
    if (options.stop_at_horizon && traj.horizon && record.t >= traj.horizon->T_star) {
      traj.termination = Termination::HorizonReached;
      traj.message = "existence horizon reached";
      break;
    }
  }

  if (traj.snapshots.empty() || traj.snapshots.back().state.n != current.n) {
    traj.snapshots.push_back({static_cast<double>(current.n) * config.delta, current});
  }
  traj.final_state = std::move(current);
  traj.summary = summarize(traj.steps, traj.violations, rho_ccfl);
  return traj;
}

std::vector<double> SweepAxis::values() const {
  if (count <= 1) return {lo};
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  out.back() = hi;
  return out;
}

std::vector<SweepRow> sweep_horizon(const ModelParams& params, const SchemeConfig& config,
                                    const SweepGrid& grid) {
  std::vector<SweepRow> rows;
  const auto his = grid.a_star_hi.values();
  const auto los = grid.a_star_lo.values();
  const auto m02s = grid.m02.values();
  rows.reserve(his.size() * los.size() * m02s.size());
  for (double m02 : m02s) {
    for (double lo : los) {
      for (double hi : his) {
        SchemeConfig point = config;
        point.a_star_hi = hi;
        point.a_star_lo = lo;
        point.m02 = m02;
        SweepRow row{hi, lo, m02, std::nullopt};
        const bool admissible = lo > 0.0 && lo < point.alpha_thr && m02 < hi && hi < 1.0;
        if (admissible) row.horizon = existence_horizon(params, point);
        rows.push_back(row);
      }
    }
  }
  return rows;
}

double l1_difference(const CellField& coarse, double h_coarse, const CellField& fine, double h_fine) {
  const auto ratio = static_cast<std::size_t>(std::llround(h_coarse / h_fine));
  if (ratio == 0 || coarse.size() * ratio != fine.size()) {
    throw SimError(ErrorCode::InvalidParameter, "l1_difference: grids are not nested");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < fine.size(); ++i) sum += std::abs(fine[i] - coarse[i / ratio]);
  return h_fine * sum;
}

RefinementReport refine(const ModelParams& params, const SchemeConfig& config,
                        const ScalarFunction& alpha0, const ScalarFunction& c0, std::size_t levels,
                        RunMode mode) {
  if (levels == 0) throw SimError(ErrorCode::InvalidParameter, "refine: need at least one level");

  std::vector<std::future<RefinementLevel>> jobs;
  for (std::size_t i = 0; i < levels; ++i) {
    SchemeConfig cfg = config;
    const double scale = std::ldexp(1.0, -static_cast<int>(i));
    cfg.h = config.h * scale;
    cfg.delta = config.delta * scale;
    jobs.push_back(std::async(std::launch::async, [=, &params]() {
      RunOptions opts;
      opts.snapshots = 1;
      opts.mode = mode;
      const Trajectory traj = run(params, cfg, alpha0, c0, opts);
      RefinementLevel level;
      level.h = cfg.h;
      level.delta = cfg.delta;
      level.final_state = traj.final_state;
      level.alpha_space_bv = traj.steps.back().alpha_space_bv;
      level.alpha_time_bv = traj.summary.alpha_time_bv;
      level.termination = traj.termination;
      level.message = traj.message;
      return level;
    }));
  }

  RefinementReport report;
  for (auto& job : jobs) report.levels.push_back(job.get());
  for (std::size_t i = 1; i < levels; ++i) {
    const auto& coarse = report.levels[i - 1];
    const auto& fine = report.levels[i];
    report.l1_differences.push_back(
        l1_difference(coarse.final_state.alpha, coarse.h, fine.final_state.alpha, fine.h));
  }
  for (std::size_t i = 1; i < report.l1_differences.size(); ++i) {
    report.ratios.push_back(report.l1_differences[i] / report.l1_differences[i - 1]);
  }
  return report;
}

}  // namespace tumorsim
