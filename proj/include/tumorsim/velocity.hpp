#pragma once

// P1 finite-element cell velocity on the tumour domain (0, ell_h^n), with
// u = 0 at x = 0, extended by zero beyond the recovered radius.

#include "tumorsim/kernel.hpp"

namespace tumorsim {

/// Stress nonlinearity H(a) = a (a - alphaR)^+ / (1 - a)^2.
double stress(double alpha, const ModelParams& params) noexcept;

/// A-priori velocity bounds valid while a_star_lo <= alpha <= a_star_hi.
struct VelocityBounds {
  double u_max = 0.0;              // sup-norm of u
  double flux_grad_max = 0.0;      // sup-norm of mu*alpha*u_x
  double flux_grad_neg_max = 0.0;  // sup-norm of (mu*alpha*u_x)^-
  double bv_bound = 0.0;           // BV bound on mu*alpha*u_x - H(alpha)
  double energy_bound = 0.0;       // bound on ||sqrt(a) u_x|| + ||sqrt(a/(1-a)) u||
};

VelocityBounds velocity_bounds(const ModelParams& params, const SchemeConfig& config);

/// System for the unknowns u(x_1) .. u(x_Jn); row i corresponds to node i+1.
TridiagonalSystem assemble_velocity_system(const CellField& alpha, std::size_t Jn,
                                           const ModelParams& params, const Mesh& mesh);

NodalField solve_velocity(const CellField& alpha, std::size_t Jn, const ModelParams& params,
                          const Mesh& mesh);

/// ||sqrt(alpha) u_x|| + ||sqrt(alpha / (1 - alpha)) u|| over (0, x_Jn), exact for P1.
double velocity_energy(const CellField& alpha, const NodalField& u, std::size_t Jn, double h);

/// Cellwise value of mu*alpha*u_x - H(alpha) on the zero-extended velocity.
CellField stress_flux(const CellField& alpha, const NodalField& u, std::size_t Jn,
                      const ModelParams& params, const Mesh& mesh);

}  // namespace tumorsim
