#pragma once

// Backward-Euler, mass-lumped P1 oxygen tension on (0, ell_h^n): homogeneous
// Neumann at x = 0, Dirichlet value 1 at the radius, unit extension beyond.

#include "tumorsim/kernel.hpp"

namespace tumorsim {

/// Matrix pieces of (M + delta*lambda*D + Q*delta*S) c = M c_prev - delta*b
/// on the unknown nodes 0 .. Jn-1.
struct OxygenSystem {
  std::vector<double> M_diag;
  std::vector<double> D_lower;  // D_lower[i] couples row i+1 to column i
  std::vector<double> D_diag;
  std::vector<double> D_upper;
  std::vector<double> S_diag;
  std::vector<double> b;
  std::vector<double> c_prev;  // level n-1 values on the unknown nodes

  std::size_t size() const noexcept { return M_diag.size(); }

  /// Combined tridiagonal system for the given delta, lambda, Q.
  TridiagonalSystem combine(double delta, double lambda, double Q) const;
};

OxygenSystem assemble_oxygen_system(const CellField& alpha, const NodalField& c_prev,
                                    std::size_t Jn, const ModelParams& params,
                                    const SchemeConfig& config, const Mesh& mesh);

NodalField solve_oxygen(const CellField& alpha, const NodalField& c_prev, std::size_t Jn,
                        const ModelParams& params, const SchemeConfig& config, const Mesh& mesh);

}  // namespace tumorsim
