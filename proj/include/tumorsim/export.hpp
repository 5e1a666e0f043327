#pragma once

// CSV/JSON export of runs and standalone SVG line plots.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tumorsim/config.hpp"
#include "tumorsim/orchestrator.hpp"

namespace tumorsim {

/// 17 significant digits, enough for a bitwise round trip of doubles.
std::string format_number(double v);

/// Header "x,alpha,u,c", one row per node; alpha is the value of the cell to
/// the right of the node, repeated at the last node.
void write_snapshot_csv(std::ostream& out, const State& state, const Mesh& mesh);

struct SnapshotTable {
  std::vector<double> x;
  std::vector<double> alpha;  // per node as written
  std::vector<double> u;
  std::vector<double> c;

  CellField cell_alpha() const;  // drops the duplicated last row
};

SnapshotTable read_snapshot_csv(std::istream& in);

/// Header "t,ell", one row per recorded level.
void write_radius_csv(std::ostream& out, const Trajectory& traj);

nlohmann::json cfl_json(const CflReport& report, std::optional<double> reference_C_CFL = std::nullopt);
nlohmann::json horizon_json(const Horizon& horizon);
nlohmann::json summary_json(const Trajectory& traj, std::optional<double> reference_C_CFL = std::nullopt);
nlohmann::json refinement_json(const RefinementReport& report);

/// Parses "a_star_hi=LO:HI:N,a_star_lo=V,m02=LO:HI:N"; axes left out keep the
/// value from `base` as a single point.
SweepGrid parse_grid_spec(const std::string& spec, const SchemeConfig& base);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

enum class PlotField { Alpha, Velocity, Oxygen, Radius };

std::optional<PlotField> plot_field_from_string(const std::string& name);
const char* to_string(PlotField field) noexcept;

/// Standalone SVG 1.1 document: one polyline per snapshot over (0, ell_h^n)
/// for the spatial fields, a single (t, ell) polyline for the radius.
std::string render_svg(const Trajectory& traj, PlotField which);

/// snapshot_NNN.csv, radius.csv, summary.json and (optionally) the four plots.
void write_run_outputs(const std::filesystem::path& dir, const Trajectory& traj,
                       const RunConfig& config);

}  // namespace tumorsim
