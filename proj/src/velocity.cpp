#include "tumorsim/velocity.hpp"

#include <cmath>
#include <sstream>

namespace tumorsim {

double stress(double alpha, const ModelParams& params) noexcept {
  const double excess = alpha - params.alphaR;
  if (excess <= 0.0) return 0.0;
  const double gap = 1.0 - alpha;
  return alpha * excess / (gap * gap);
}

VelocityBounds velocity_bounds(const ModelParams& params, const SchemeConfig& config) {
  const double hi = config.a_star_hi;
  const double excess = std::abs(hi - params.alphaR);
  const double gap = std::abs(1.0 - hi);
  const double lm = config.ellm;

  VelocityBounds b;
  b.u_max = lm * excess / (std::sqrt(config.a_star_lo) * params.mu * gap * gap);
  b.bv_bound = lm * std::sqrt(params.k / params.mu) * excess / std::pow(gap, 2.5);
  b.flux_grad_neg_max = b.bv_bound;
  b.flux_grad_max = b.bv_bound + hi * (hi - params.alphaR) / (gap * gap);
  b.energy_bound = (1.0 + 1.0 / std::sqrt(params.k)) * std::sqrt(lm / params.mu) * excess / (gap * gap);
  if (hi <= params.alphaR) {
    // H vanishes identically below alphaR, so the positive part is zero.
    b.flux_grad_max = b.bv_bound;
  }
  return b;
}

TridiagonalSystem assemble_velocity_system(const CellField& alpha, std::size_t Jn,
                                           const ModelParams& params, const Mesh& mesh) {
  if (Jn == 0 || Jn > alpha.size()) {
    throw SimError(ErrorCode::InvalidParameter, "assemble_velocity_system: need 1 <= Jn <= J");
  }
  const double h = mesh.h();
  for (std::size_t j = 0; j < Jn; ++j) {
    if (!(alpha[j] > 0.0 && alpha[j] < 1.0)) {
      std::ostringstream os;
      os << "volume fraction " << alpha[j] << " in cell " << j << " outside (0,1)";
      throw SimError(ErrorCode::DegenerateCoefficient, os.str());
    }
  }

  // Unknown i is node i+1; node 0 carries the Dirichlet value and is dropped.
  TridiagonalSystem sys;
  sys.diag.assign(Jn, 0.0);
  sys.lower.assign(Jn - 1, 0.0);
  sys.upper.assign(Jn - 1, 0.0);
  sys.rhs.assign(Jn, 0.0);

  for (std::size_t j = 0; j < Jn; ++j) {
    const double a = alpha[j];
    const double mass = params.k * h * a / (1.0 - a);
    const double stiff = params.mu * a / h;
    const double diag = mass / 3.0 + stiff;
    const double off = mass / 6.0 - stiff;
    const double load = stress(a, params);

    // Local nodes j (left) and j+1 (right) map to unknowns j-1 and j.
    if (j > 0) {
      sys.diag[j - 1] += diag;
      sys.rhs[j - 1] -= load;
      sys.upper[j - 1] += off;
      sys.lower[j - 1] += off;
    }
    sys.diag[j] += diag;
    sys.rhs[j] += load;
  }
  return sys;
}

NodalField solve_velocity(const CellField& alpha, std::size_t Jn, const ModelParams& params,
                          const Mesh& mesh) {
  NodalField u(mesh.nodes(), 0.0);
  if (Jn == 0) return u;
  const auto sys = assemble_velocity_system(alpha, Jn, params, mesh);
  const auto x = sys.solve();
  for (std::size_t i = 0; i < Jn; ++i) u[i + 1] = x[i];
  return u;
}

double velocity_energy(const CellField& alpha, const NodalField& u, std::size_t Jn, double h) {
  double grad = 0.0;
  double mass = 0.0;
  for (std::size_t j = 0; j < Jn; ++j) {
    const double a = alpha[j];
    const double slope = (u[j + 1] - u[j]) / h;
    grad += h * a * slope * slope;
    const double l = u[j];
    const double r = u[j + 1];
    mass += a / (1.0 - a) * h / 3.0 * (l * l + l * r + r * r);
  }
  return std::sqrt(grad) + std::sqrt(mass);
}

CellField stress_flux(const CellField& alpha, const NodalField& u, std::size_t Jn,
                      const ModelParams& params, const Mesh& mesh) {
  CellField g(alpha.size(), 0.0);
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    // Beyond the radius u is identically zero (not linear up to u(ell)).
    const double slope = (j < Jn) ? (u[j + 1] - u[j]) / mesh.h() : 0.0;
    g[j] = params.mu * alpha[j] * slope - stress(alpha[j], params);
  }
  return g;
}

}  // namespace tumorsim
