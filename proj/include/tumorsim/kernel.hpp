#pragma once

// Meshing, field containers, the tridiagonal solver, mass lumping, linear
// interpolation and construction of the initial discrete state.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "tumorsim/error.hpp"

namespace tumorsim {

/// Physical constants of the two-phase model.
struct ModelParams {
  double k = 1.0;       // cell/fluid traction
  double mu = 1.0;      // cell-phase viscosity
  double lambda = 1.0;  // oxygen diffusivity
  double Q = 0.5;       // oxygen consumption rate
  double Q1hat = 0.0;   // consumption saturation
  double s1 = 10.0;
  double s2 = 0.5;
  double s3 = 0.5;
  double s4 = 10.0;
  double alphaR = 0.8;  // repulsion threshold

  /// Throws SimError(InvalidParameter) naming the first bad field.
  void validate() const;
};

/// Discretisation constants plus the a-priori bounds used by the analysis.
struct SchemeConfig {
  double h = 0.05;
  double delta = 1e-3;
  double ell0 = 1.0;
  double ellm = 10.0;
  double alpha_thr = 0.1;
  double rho = 0.1;
  double a_star_lo = 0.4;
  double a_star_hi = 0.82;
  double m01 = 0.8;
  double m02 = 0.8;
  double T_final = 1.0;

  /// Checks ordering and range constraints. Grid integrality is checked by
  /// build_mesh so that it reports NonIntegerGrid.
  void validate() const;
};

/// Uniform mesh of (0, ellm): nodes x_j = j*h, cells X_j = (x_j, x_{j+1}).
class Mesh {
public:
  Mesh(std::size_t cells, double h) : cells_(cells), h_(h) {}

  std::size_t cells() const noexcept { return cells_; }
  std::size_t nodes() const noexcept { return cells_ + 1; }
  double h() const noexcept { return h_; }
  double length() const noexcept { return static_cast<double>(cells_) * h_; }
  double x(std::size_t j) const noexcept { return static_cast<double>(j) * h_; }
  double cell_midpoint(std::size_t j) const noexcept { return (static_cast<double>(j) + 0.5) * h_; }

private:
  std::size_t cells_;
  double h_;
};

namespace detail {
template <class Tag>
struct Field {
  std::vector<double> values;

  Field() = default;
  explicit Field(std::size_t n, double fill = 0.0) : values(n, fill) {}
  explicit Field(std::vector<double> v) : values(std::move(v)) {}

  std::size_t size() const noexcept { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
  std::span<const double> view() const noexcept { return values; }

  friend bool operator==(const Field&, const Field&) = default;
};
struct CellTag {};
struct NodeTag {};
}  // namespace detail

/// Piecewise-constant function, one value per cell (length J).
using CellField = detail::Field<detail::CellTag>;
/// Continuous piecewise-linear function, one value per node (length J+1).
using NodalField = detail::Field<detail::NodeTag>;

/// One time level of the discrete solution.
struct State {
  std::size_t n = 0;
  CellField alpha;
  NodalField u;
  NodalField c;
  std::size_t Jn = 0;  // radius index, ell_h^n = Jn * h

  double radius(const Mesh& mesh) const noexcept { return mesh.x(Jn); }

  friend bool operator==(const State&, const State&) = default;
};

/// Returns the integer n with value/h == n, or throws NonIntegerGrid.
std::size_t grid_index(double value, double h, const char* what);

Mesh build_mesh(const SchemeConfig& config);

/// Thomas elimination. lower/upper have length n-1; lower[i] couples row i+1
/// to column i and upper[i] couples row i to column i+1.
std::vector<double> solve_tridiagonal(std::span<const double> lower,
                                      std::span<const double> diag,
                                      std::span<const double> upper,
                                      std::span<const double> rhs);

/// Tridiagonal linear system in the same band layout solve_tridiagonal takes.
struct TridiagonalSystem {
  std::vector<double> lower;
  std::vector<double> diag;
  std::vector<double> upper;
  std::vector<double> rhs;

  std::size_t size() const noexcept { return diag.size(); }
  std::vector<double> solve() const { return solve_tridiagonal(lower, diag, upper, rhs); }
};

/// Node-centred piecewise constant produced by mass lumping: value w_j on
/// the node-centred interval of width h/2 (end nodes) or h (interior).
struct LumpedField {
  std::vector<double> values;
  std::vector<double> widths;

  double integral() const;
  double l2_norm() const;
  double evaluate(double x, double h) const;
};

/// Mass lumping of the nodal values on a uniform grid of spacing h.
LumpedField lump(std::span<const double> nodal, double h);
inline LumpedField lump(const NodalField& f, const Mesh& mesh) { return lump(f.view(), mesh.h()); }

/// Linear interpolant through nodal samples.
NodalField interpolate_linear(std::span<const double> samples, const Mesh& mesh);

/// Evaluates the P1 function with the given nodal values at x in [0, length].
double evaluate_linear(std::span<const double> nodal, double h, double x);

/// Exact L2 norm of the P1 function over its first `cells` cells.
double p1_l2_norm(std::span<const double> nodal, double h, std::size_t cells);

using ScalarFunction = std::function<double(double)>;

/// alpha: 3-point Gauss-Legendre cell averages of the zero extension of alpha0;
/// c: nodal samples of c0 inside (0, ell0) and 1 from x = ell0 onwards.
/// The velocity field is left at zero; the orchestrator fills it in.
State init_state(const ScalarFunction& alpha0, const ScalarFunction& c0,
                 const SchemeConfig& config, const Mesh& mesh);

}  // namespace tumorsim
