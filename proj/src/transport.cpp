#include "tumorsim/transport.hpp"

#include <algorithm>
#include <sstream>

namespace tumorsim {

namespace {
inline double pos(double v) noexcept { return v > 0.0 ? v : 0.0; }
inline double neg(double v) noexcept { return v < 0.0 ? -v : 0.0; }
}  // namespace

double growth_rate(double c, const ModelParams& params) noexcept {
  return (1.0 + params.s1) * c / (1.0 + params.s1 * c);
}

double death_rate(double c, const ModelParams& params) noexcept {
  return (params.s2 + params.s3 * c) / (1.0 + params.s4 * c);
}

SourceCoeffs source_coeffs(const NodalField& c, const ModelParams& params) {
  const std::size_t J = c.size() - 1;
  SourceCoeffs out{CellField(J), CellField(J)};
  for (std::size_t j = 0; j < J; ++j) {
    out.b[j] = 0.5 * (growth_rate(c[j], params) + growth_rate(c[j + 1], params));
    out.d[j] = 0.5 * (death_rate(c[j], params) + death_rate(c[j + 1], params));
  }
  return out;
}

double resolve_sink(double K, double d, double delta, double alpha_thr) noexcept {
  // The left side is strictly increasing and piecewise linear with a kink at
  // alpha_thr, where its value is alpha_thr.
  if (K <= alpha_thr) return K;
  return (K + delta * d * alpha_thr) / (1.0 + delta * d);
}

CellField explicit_update(const State& prev, const SourceCoeffs& coeffs, const SchemeConfig& config) {
  const auto& a = prev.alpha;
  const auto& u = prev.u;
  const std::size_t J = a.size();
  const double ratio = config.delta / config.h;

  CellField K(J);
  for (std::size_t j = 0; j < J; ++j) {
    // u_0 = 0, so the left ghost value never contributes; use alpha_0.
    const double left = (j == 0) ? a[0] : a[j - 1];
    const double right = (j + 1 < J) ? a[j + 1] : 0.0;
    const double flux = pos(u[j + 1]) * a[j] - neg(u[j + 1]) * right - pos(u[j]) * left +
                        neg(u[j]) * a[j];
    const double growth = pos(a[j] - config.alpha_thr) * (1.0 - a[j]) * coeffs.b[j];
    K[j] = a[j] - ratio * flux + config.delta * growth;
  }
  return K;
}

CellField advance_alpha(const State& prev, const SourceCoeffs& coeffs, const SchemeConfig& config) {
  CellField next = explicit_update(prev, coeffs, config);
  for (std::size_t j = 0; j < next.size(); ++j) {
    next[j] = resolve_sink(next[j], coeffs.d[j], config.delta, config.alpha_thr);
  }
  return next;
}

std::size_t recover_radius(const CellField& alpha, const SchemeConfig& config) {
  const std::size_t J = alpha.size();
  if (J > 0 && alpha[J - 1] >= config.alpha_thr) {
    std::ostringstream os;
    os << "last cell volume fraction " << alpha[J - 1] << " >= alpha_thr; tumour reached the box";
    throw SimError(ErrorCode::DomainSaturated, os.str());
  }
  for (std::size_t j = J; j-- > 0;) {
    if (alpha[j] >= config.alpha_thr) return j + 1;
  }
  return 0;
}

}  // namespace tumorsim
