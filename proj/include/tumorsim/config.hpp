#pragma once

// JSON run configuration.
//
//   {
//     "model":   { k, mu, lambda, Q, Q1hat, s1, s2, s3, s4, alphaR },
//     "scheme":  { h, delta, ellm, alpha_thr, a_star_lo, a_star_hi, m01, m02,
//                  T_final, [ell0 = 1], [rho = 0.1] },
//     "initial": { "alpha0": PROFILE, "c0": PROFILE },
//     "output":  { [directory = "out"], [snapshots = 10], [plots = true] },
//     "mode":    "strict" | "forced",                    (default "strict")
//     "reference": { "C_CFL": number }                   (optional)
//   }
//
// PROFILE is {"type": "constant", "value": v} or
// {"type": "polynomial", "coefficients": [c0, c1, ...]} meaning sum c_i x^i.
// Unknown keys anywhere are rejected.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tumorsim/kernel.hpp"
#include "tumorsim/orchestrator.hpp"

namespace tumorsim {

struct InitialProfile {
  enum class Kind { Constant, Polynomial };
  Kind kind = Kind::Constant;
  std::vector<double> coefficients;  // a single entry for Constant

  double operator()(double x) const;
  ScalarFunction function() const;
};

struct OutputOptions {
  std::string directory = "out";
  std::size_t snapshots = 10;
  bool plots = true;
};

struct RunConfig {
  ModelParams model;
  SchemeConfig scheme;
  InitialProfile alpha0;
  InitialProfile c0;
  OutputOptions output;
  RunMode mode = RunMode::Strict;
  std::optional<double> reference_C_CFL;

  RunOptions run_options() const;
};

/// Throws ConfigError carrying the key path of the first problem found.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::filesystem::path& path);

nlohmann::json config_to_json(const RunConfig& config);

}  // namespace tumorsim
