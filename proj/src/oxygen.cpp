#include "tumorsim/oxygen.hpp"

#include <cmath>
#include <sstream>

namespace tumorsim {

namespace {
constexpr double kMaxPrincipleSlack = 1e-12;
}

TridiagonalSystem OxygenSystem::combine(double delta, double lambda, double Q) const {
  const std::size_t n = size();
  TridiagonalSystem sys;
  sys.diag.resize(n);
  sys.rhs.resize(n);
  sys.lower.resize(n - 1);
  sys.upper.resize(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    sys.diag[i] = M_diag[i] + delta * lambda * D_diag[i] + Q * delta * S_diag[i];
    sys.rhs[i] = M_diag[i] * c_prev[i] - delta * b[i];
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    sys.lower[i] = delta * lambda * D_lower[i];
    sys.upper[i] = delta * lambda * D_upper[i];
  }
  return sys;
}

OxygenSystem assemble_oxygen_system(const CellField& alpha, const NodalField& c_prev,
                                    std::size_t Jn, const ModelParams& params,
                                    const SchemeConfig& /*config*/, const Mesh& mesh) {
  if (Jn == 0 || Jn > alpha.size()) {
    throw SimError(ErrorCode::InvalidParameter, "assemble_oxygen_system: need 1 <= Jn <= J");
  }
  const double h = mesh.h();
  OxygenSystem sys;
  sys.M_diag.assign(Jn, h);
  sys.M_diag[0] = 0.5 * h;

  sys.D_diag.assign(Jn, 2.0 / h);
  sys.D_diag[0] = 1.0 / h;
  sys.D_lower.assign(Jn - 1, -1.0 / h);
  sys.D_upper.assign(Jn - 1, -1.0 / h);

  // Each cell adjacent to node i contributes (h*alpha_j/2) times the cell
  // average of (Pi_h phi_i)^2, which is 1/2.
  sys.S_diag.assign(Jn, 0.0);
  for (std::size_t i = 0; i < Jn; ++i) {
    const double left = (i > 0) ? alpha[i - 1] : 0.0;
    const double weight = 1.0 + params.Q1hat * std::abs(c_prev[i]);
    sys.S_diag[i] = h * (left + alpha[i]) / 4.0 / weight;
  }

  sys.b.assign(Jn, 0.0);
  sys.b[Jn - 1] = -params.lambda / h;

  sys.c_prev.assign(c_prev.values.begin(), c_prev.values.begin() + static_cast<std::ptrdiff_t>(Jn));
  return sys;
}

NodalField solve_oxygen(const CellField& alpha, const NodalField& c_prev, std::size_t Jn,
                        const ModelParams& params, const SchemeConfig& config, const Mesh& mesh) {
  NodalField c(mesh.nodes(), 1.0);
  if (Jn == 0) return c;
  const auto sys = assemble_oxygen_system(alpha, c_prev, Jn, params, config, mesh);
  const auto x = sys.combine(config.delta, params.lambda, params.Q).solve();
  for (std::size_t i = 0; i < Jn; ++i) {
    if (!(x[i] >= -kMaxPrincipleSlack && x[i] <= 1.0 + kMaxPrincipleSlack)) {
      std::ostringstream os;
      os.precision(17);
      os << "oxygen tension " << x[i] << " at node " << i << " outside [0,1]";
      throw SimError(ErrorCode::MaximumPrincipleViolated, os.str());
    }
    c[i] = x[i];
  }
  return c;
}

}  // namespace tumorsim
