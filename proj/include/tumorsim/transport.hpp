#pragma once

// Explicit upwind finite-volume advance of the cell volume fraction and
// recovery of the discrete tumour radius.

#include "tumorsim/kernel.hpp"

namespace tumorsim {

/// Growth (b) and death (d) factors per cell, pointwise averages over each
/// cell of the oxygen-dependent rates.
struct SourceCoeffs {
  CellField b;
  CellField d;
};

double growth_rate(double c, const ModelParams& params) noexcept;
double death_rate(double c, const ModelParams& params) noexcept;

SourceCoeffs source_coeffs(const NodalField& c, const ModelParams& params);

/// Unique root of  alpha + delta * (alpha - alpha_thr)^+ * d = K  for d >= 0.
double resolve_sink(double K, double d, double delta, double alpha_thr) noexcept;

/// Explicit part of the update (everything except the implicit sink).
CellField explicit_update(const State& prev, const SourceCoeffs& coeffs, const SchemeConfig& config);

CellField advance_alpha(const State& prev, const SourceCoeffs& coeffs, const SchemeConfig& config);

/// One past the last cell with alpha >= alpha_thr (0 if none). Throws
/// DomainSaturated if the last cell of the box is above threshold.
std::size_t recover_radius(const CellField& alpha, const SchemeConfig& config);

}  // namespace tumorsim
