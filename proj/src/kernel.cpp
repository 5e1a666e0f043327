#include "tumorsim/kernel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <string>

namespace tumorsim {

namespace {

constexpr double kGridTolerance = 1e-12;
constexpr double kPivotTolerance = 1e-14;

[[noreturn]] void bad_parameter(const std::string& name, const std::string& why) {
  throw SimError(ErrorCode::InvalidParameter, name + ": " + why);
}

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) bad_parameter(name, "must be finite");
}

void require_positive(double v, const char* name) {
  require_finite(v, name);
  if (!(v > 0.0)) bad_parameter(name, "must be > 0");
}

void require_nonnegative(double v, const char* name) {
  require_finite(v, name);
  if (!(v >= 0.0)) bad_parameter(name, "must be >= 0");
}

void require_unit_open(double v, const char* name) {
  require_finite(v, name);
  if (!(v > 0.0 && v < 1.0)) bad_parameter(name, "must lie in (0,1)");
}

}  // namespace

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::NonIntegerGrid: return "NonIntegerGrid";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::InvalidInitialData: return "InvalidInitialData";
    case ErrorCode::DomainSaturated: return "DomainSaturated";
    case ErrorCode::DegenerateCoefficient: return "DegenerateCoefficient";
    case ErrorCode::MaximumPrincipleViolated: return "MaximumPrincipleViolated";
    case ErrorCode::CflInfeasible: return "CflInfeasible";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::InvariantViolated: return "InvariantViolated";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

void ModelParams::validate() const {
  require_positive(k, "k");
  require_positive(mu, "mu");
  require_positive(lambda, "lambda");
  require_nonnegative(Q, "Q");
  require_nonnegative(Q1hat, "Q1hat");
  require_positive(s1, "s1");
  require_positive(s2, "s2");
  require_positive(s3, "s3");
  require_positive(s4, "s4");
  require_unit_open(alphaR, "alphaR");
}

void SchemeConfig::validate() const {
  require_positive(h, "h");
  require_positive(delta, "delta");
  require_positive(ell0, "ell0");
  require_positive(ellm, "ellm");
  if (!(ell0 < ellm)) bad_parameter("ell0", "must be < ellm");
  require_unit_open(alpha_thr, "alpha_thr");
  require_unit_open(rho, "rho");
  require_unit_open(a_star_lo, "a_star_lo");
  require_unit_open(a_star_hi, "a_star_hi");
  require_unit_open(m01, "m01");
  require_unit_open(m02, "m02");
  if (!(a_star_lo <= m01)) bad_parameter("m01", "must be >= a_star_lo");
  if (!(m01 <= m02)) bad_parameter("m02", "must be >= m01");
  if (!(m02 <= a_star_hi)) bad_parameter("a_star_hi", "must be >= m02");
  require_nonnegative(T_final, "T_final");
}

std::size_t grid_index(double value, double h, const char* what) {
  const double ratio = value / h;
  const double nearest = std::round(ratio);
  if (!std::isfinite(ratio) || nearest < 0.0 ||
      std::abs(ratio - nearest) > kGridTolerance * std::max(1.0, std::abs(ratio))) {
    std::ostringstream os;
    os.precision(17);
    os << what << "/h = " << ratio << " is not an integer";
    throw SimError(ErrorCode::NonIntegerGrid, os.str());
  }
  return static_cast<std::size_t>(nearest);
}

Mesh build_mesh(const SchemeConfig& config) {
  config.validate();
  const std::size_t cells = grid_index(config.ellm, config.h, "ellm");
  grid_index(config.ell0, config.h, "ell0");
  if (cells == 0) throw SimError(ErrorCode::NonIntegerGrid, "mesh has no cells");
  return Mesh(cells, config.h);
}

std::vector<double> solve_tridiagonal(std::span<const double> lower,
                                      std::span<const double> diag,
                                      std::span<const double> upper,
                                      std::span<const double> rhs) {
  const std::size_t n = diag.size();
  if (n == 0 || rhs.size() != n || lower.size() + 1 != n || upper.size() + 1 != n) {
    throw SimError(ErrorCode::InvalidParameter, "solve_tridiagonal: inconsistent sizes");
  }

  // Row magnitudes of the original matrix set the scale for the pivot test.
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = std::abs(diag[i]);
    if (i > 0) row = std::max(row, std::abs(lower[i - 1]));
    if (i + 1 < n) row = std::max(row, std::abs(upper[i]));
    scale = std::max(scale, row);
  }

  std::vector<double> c(n, 0.0);  // modified super-diagonal
  std::vector<double> x(n, 0.0);
  double pivot = diag[0];
  for (std::size_t i = 0;; ++i) {
    if (!(std::abs(pivot) >= kPivotTolerance * scale) || scale == 0.0) {
      std::ostringstream os;
      os << "solve_tridiagonal: pivot " << pivot << " at row " << i << " below tolerance";
      throw SimError(ErrorCode::SingularSystem, os.str());
    }
    const double prev = (i == 0) ? 0.0 : x[i - 1];
    const double sub = (i == 0) ? 0.0 : lower[i - 1];
    x[i] = (rhs[i] - sub * prev) / pivot;
    if (i + 1 == n) break;
    c[i] = upper[i] / pivot;
    pivot = diag[i + 1] - lower[i] * c[i];
  }
  for (std::size_t i = n - 1; i-- > 0;) {
    x[i] -= c[i] * x[i + 1];
  }
  return x;
}

double LumpedField::integral() const {
  double sum = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) sum += values[j] * widths[j];
  return sum;
}

double LumpedField::l2_norm() const {
  double sum = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) sum += values[j] * values[j] * widths[j];
  return std::sqrt(sum);
}

double LumpedField::evaluate(double x, double h) const {
  if (values.empty()) return 0.0;
  // Node-centred intervals: node j owns [x_j - h/2, x_j + h/2).
  const double pos = x / h + 0.5;
  auto j = static_cast<std::ptrdiff_t>(std::floor(pos));
  j = std::clamp<std::ptrdiff_t>(j, 0, static_cast<std::ptrdiff_t>(values.size()) - 1);
  return values[static_cast<std::size_t>(j)];
}

LumpedField lump(std::span<const double> nodal, double h) {
  LumpedField out;
  out.values.assign(nodal.begin(), nodal.end());
  out.widths.assign(nodal.size(), h);
  if (!out.widths.empty()) {
    out.widths.front() = 0.5 * h;
    out.widths.back() = 0.5 * h;
  }
  if (out.widths.size() == 1) out.widths.front() = 0.0;
  return out;
}

NodalField interpolate_linear(std::span<const double> samples, const Mesh& mesh) {
  if (samples.size() != mesh.nodes()) {
    throw SimError(ErrorCode::InvalidParameter, "interpolate_linear: need one sample per node");
  }
  return NodalField(std::vector<double>(samples.begin(), samples.end()));
}

double evaluate_linear(std::span<const double> nodal, double h, double x) {
  if (nodal.empty()) return 0.0;
  if (nodal.size() == 1) return nodal[0];
  const std::size_t last_cell = nodal.size() - 2;
  const double pos = x / h;
  auto j = static_cast<std::size_t>(std::clamp(std::floor(pos), 0.0, static_cast<double>(last_cell)));
  const double theta = pos - static_cast<double>(j);
  return (1.0 - theta) * nodal[j] + theta * nodal[j + 1];
}

double p1_l2_norm(std::span<const double> nodal, double h, std::size_t cells) {
  double sum = 0.0;
  for (std::size_t j = 0; j < cells; ++j) {
    const double a = nodal[j];
    const double b = nodal[j + 1];
    sum += h / 3.0 * (a * a + a * b + b * b);
  }
  return std::sqrt(sum);
}

State init_state(const ScalarFunction& alpha0, const ScalarFunction& c0,
                 const SchemeConfig& config, const Mesh& mesh) {
  const std::size_t J0 = grid_index(config.ell0, mesh.h(), "ell0");
  const std::size_t J = mesh.cells();
  if (J0 >= J) throw SimError(ErrorCode::InvalidParameter, "ell0 must be < ellm");

  // 3-point Gauss-Legendre on the reference interval (-1, 1).
  static const std::array<double, 3> nodes = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)};
  static const std::array<double, 3> weights = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  constexpr double tol = 1e-12;

  State s;
  s.n = 0;
  s.Jn = J0;
  s.alpha = CellField(J, 0.0);
  s.u = NodalField(J + 1, 0.0);
  s.c = NodalField(J + 1, 1.0);

  for (std::size_t j = 0; j < J0; ++j) {
    const double mid = mesh.cell_midpoint(j);
    double avg = 0.0;
    for (std::size_t q = 0; q < 3; ++q) {
      const double x = mid + 0.5 * mesh.h() * nodes[q];
      const double a = alpha0(x);
      if (!std::isfinite(a) || a < config.m01 - tol || a > config.m02 + tol) {
        std::ostringstream os;
        os << "alpha0(" << x << ") = " << a << " outside [m01, m02] = [" << config.m01 << ", "
           << config.m02 << "]";
        throw SimError(ErrorCode::InvalidInitialData, os.str());
      }
      avg += 0.5 * weights[q] * a;
    }
    s.alpha[j] = avg;
  }

  for (std::size_t j = 0; j < J0; ++j) {
    const double v = c0(mesh.x(j));
    if (!std::isfinite(v) || v < -tol || v > 1.0 + tol) {
      std::ostringstream os;
      os << "c0(" << mesh.x(j) << ") = " << v << " outside [0, 1]";
      throw SimError(ErrorCode::InvalidInitialData, os.str());
    }
    s.c[j] = v;
  }
  return s;
}

}  // namespace tumorsim
