#include "tumorsim/export.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace tumorsim {

using nlohmann::json;

namespace {

json finite_or_null(double v) {
  return std::isfinite(v) ? json(v) : json(nullptr);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, const std::string& context) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size()) {
    throw SimError(ErrorCode::InvalidParameter, context + ": cannot parse number \"" + t + "\"");
  }
  return v;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

// Blue at the first snapshot through to red at the last.
std::string time_colour(double fraction) {
  const double f = std::clamp(fraction, 0.0, 1.0);
  const int r = static_cast<int>(std::lround(31 + f * (214 - 31)));
  const int g = static_cast<int>(std::lround(63 + f * (39 - 63)));
  const int b = static_cast<int>(std::lround(191 + f * (40 - 191)));
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

struct Series {
  std::vector<std::pair<double, double>> points;
  std::string label;
  std::string colour;
};

std::vector<std::pair<double, double>> field_points(const State& s, PlotField which, double h) {
  std::vector<std::pair<double, double>> pts;
  const std::size_t Jn = s.Jn;
  switch (which) {
    case PlotField::Alpha:
      for (std::size_t j = 0; j < Jn; ++j) {
        pts.emplace_back(static_cast<double>(j) * h, s.alpha[j]);
        pts.emplace_back(static_cast<double>(j + 1) * h, s.alpha[j]);
      }
      if (pts.empty()) pts.emplace_back(0.0, s.alpha[0]);
      break;
    case PlotField::Velocity:
      for (std::size_t j = 0; j <= Jn; ++j) pts.emplace_back(static_cast<double>(j) * h, s.u[j]);
      break;
    case PlotField::Oxygen:
      for (std::size_t j = 0; j <= Jn; ++j) pts.emplace_back(static_cast<double>(j) * h, s.c[j]);
      break;
    case PlotField::Radius:
      break;
  }
  return pts;
}

std::string svg_document(const std::vector<Series>& series, const std::string& title,
                         const std::string& xlabel, const std::string& ylabel, bool legend) {
  constexpr double W = 820, H = 500, left = 75, right = 150, top = 40, bottom = 60;
  double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;
  bool first = true;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      if (first) {
        xmin = xmax = x;
        ymin = ymax = y;
        first = false;
      }
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (xmax - xmin <= 0.0) xmax = xmin + 1.0;
  if (ymax - ymin <= 0.0) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;

  const double pw = W - left - right;
  const double ph = H - top - bottom;
  auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double y) { return top + (ymax - y) / (ymax - ymin) * ph; };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W << "\" height=\"" << H
     << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n"
     << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n"
     << "<text x=\"" << left + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"16\">" << escape_xml(title) << "</text>\n"
     << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int i = 0; i <= 4; ++i) {
    const double fx = xmin + (xmax - xmin) * i / 4.0;
    const double fy = ymin + (ymax - ymin) * i / 4.0;
    os << "<text x=\"" << sx(fx) << "\" y=\"" << top + ph + 18
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << short_number(fx)
       << "</text>\n";
    os << "<text x=\"" << left - 6 << "\" y=\"" << sy(fy) + 4
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << short_number(fy)
       << "</text>\n";
  }
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 15
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << escape_xml(xlabel)
     << "</text>\n";
  os << "<text x=\"18\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"13\" transform=\"rotate(-90 18 " << top + ph / 2 << ")\">" << escape_xml(ylabel)
     << "</text>\n";

  for (const auto& s : series) {
    os << "<polyline fill=\"none\" stroke=\"" << s.colour << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      if (i) os << ' ';
      os << sx(s.points[i].first) << ',' << sy(s.points[i].second);
    }
    os << "\"/>\n";
  }

  if (legend) {
    double y = top + 10;
    for (const auto& s : series) {
      os << "<line x1=\"" << left + pw + 12 << "\" y1=\"" << y << "\" x2=\"" << left + pw + 36
         << "\" y2=\"" << y << "\" stroke=\"" << s.colour << "\" stroke-width=\"2\"/>\n";
      os << "<text x=\"" << left + pw + 42 << "\" y=\"" << y + 4
         << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape_xml(s.label) << "</text>\n";
      y += 16;
    }
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_snapshot_csv(std::ostream& out, const State& state, const Mesh& mesh) {
  out << "x,alpha,u,c\n";
  const std::size_t J = mesh.cells();
  for (std::size_t j = 0; j <= J; ++j) {
    const double a = state.alpha[j < J ? j : J - 1];
    out << format_number(mesh.x(j)) << ',' << format_number(a) << ',' << format_number(state.u[j])
        << ',' << format_number(state.c[j]) << '\n';
  }
}

CellField SnapshotTable::cell_alpha() const {
  if (alpha.size() < 2) return CellField();
  return CellField(std::vector<double>(alpha.begin(), alpha.end() - 1));
}

SnapshotTable read_snapshot_csv(std::istream& in) {
  SnapshotTable t;
  std::string line;
  if (!std::getline(in, line) || trim(line) != "x,alpha,u,c") {
    throw SimError(ErrorCode::IoError, "snapshot CSV: missing header x,alpha,u,c");
  }
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto cols = split(line, ',');
    if (cols.size() != 4) {
      throw SimError(ErrorCode::IoError, "snapshot CSV: row " + std::to_string(row) + " needs 4 columns");
    }
    const std::string ctx = "snapshot CSV row " + std::to_string(row);
    t.x.push_back(parse_double(cols[0], ctx));
    t.alpha.push_back(parse_double(cols[1], ctx));
    t.u.push_back(parse_double(cols[2], ctx));
    t.c.push_back(parse_double(cols[3], ctx));
  }
  return t;
}

void write_radius_csv(std::ostream& out, const Trajectory& traj) {
  out << "t,ell\n";
  for (const auto& d : traj.steps) out << format_number(d.t) << ',' << format_number(d.radius) << '\n';
}

json cfl_json(const CflReport& r, std::optional<double> reference_C_CFL) {
  json j = {{"C_CFL", finite_or_null(r.C_CFL)},
            {"ratio", r.ratio},
            {"lower", finite_or_null(r.lower)},
            {"delta_cap", r.delta_cap},
            {"unbounded", r.unbounded},
            {"feasible", r.feasible}};
  if (reference_C_CFL) {
    j["reference_C_CFL"] = *reference_C_CFL;
    j["reference_discrepancy"] = finite_or_null(r.C_CFL - *reference_C_CFL);
    j["reference_note"] =
        "reference value supplied with the configuration; C_CFL above is evaluated from the "
        "window formula and the two differ when reference_discrepancy is nonzero";
    j["reference_ratio_admissible"] = r.lower <= r.ratio && r.ratio <= *reference_C_CFL;
  }
  return j;
}

json horizon_json(const Horizon& hz) {
  return {{"F_min", hz.F_min}, {"F_max", hz.F_max},          {"T_m", hz.T_m},
          {"T_M", hz.T_M},     {"T_ell", finite_or_null(hz.T_ell)}, {"T_star", hz.T_star}};
}

json summary_json(const Trajectory& traj, std::optional<double> reference_C_CFL) {
  const VelocityBounds bounds = velocity_bounds(traj.params, traj.config);
  json doc;
  doc["mode"] = to_string(traj.mode);
  doc["termination"] = to_string(traj.termination);
  doc["message"] = traj.message;
  doc["steps"] = traj.final_state.n;
  doc["final_time"] = static_cast<double>(traj.final_state.n) * traj.config.delta;
  doc["final_radius"] = traj.steps.empty() ? 0.0 : traj.steps.back().radius;
  doc["cfl"] = cfl_json(traj.cfl, reference_C_CFL);
  if (traj.horizon) {
    doc["horizon"] = horizon_json(*traj.horizon);
  } else {
    doc["horizon"] = {{"error", traj.horizon_error}};
  }

  std::map<std::string, std::size_t> counts;
  for (const auto& v : traj.violations) ++counts[v.monitor];
  json listed = json::array();
  for (std::size_t i = 0; i < traj.violations.size() && i < 50; ++i) {
    const auto& v = traj.violations[i];
    listed.push_back({{"monitor", v.monitor}, {"step", v.step}, {"index", v.index},
                      {"value", v.value}, {"limit", v.limit}});
  }

  const auto& s = traj.summary;
  json decomposition = {{"pass", s.decomposition.pass}};
  if (s.decomposition.first_offending_step) {
    decomposition["first_offending_step"] = *s.decomposition.first_offending_step;
  }
  doc["monitors"] = {{"max_mass_residual", s.max_mass_residual},
                     {"c_min", s.c_min},
                     {"c_max", s.c_max},
                     {"max_u_inf_norm", s.max_u_inf_norm},
                     {"u_max_bound", bounds.u_max},
                     {"max_flux_bv", s.max_flux_bv},
                     {"flux_bv_bound", bounds.bv_bound},
                     {"alpha_time_bv", s.alpha_time_bv},
                     {"radius_decomposition", decomposition},
                     {"violation_count", s.violation_count},
                     {"violations_by_monitor", counts},
                     {"violations", listed}};
  doc["passed"] = traj.violations.empty() && traj.termination == Termination::Completed &&
                  s.decomposition.pass;
  return doc;
}

json refinement_json(const RefinementReport& report) {
  json levels = json::array();
  for (const auto& l : report.levels) {
    levels.push_back({{"h", l.h},
                      {"delta", l.delta},
                      {"steps", l.final_state.n},
                      {"radius", static_cast<double>(l.final_state.Jn) * l.h},
                      {"alpha_space_bv", l.alpha_space_bv},
                      {"alpha_time_bv", l.alpha_time_bv},
                      {"termination", to_string(l.termination)},
                      {"message", l.message}});
  }
  return {{"levels", levels}, {"l1_differences", report.l1_differences}, {"ratios", report.ratios}};
}

SweepGrid parse_grid_spec(const std::string& spec, const SchemeConfig& base) {
  SweepGrid grid{{base.a_star_hi, base.a_star_hi, 1},
                 {base.a_star_lo, base.a_star_lo, 1},
                 {base.m02, base.m02, 1}};
  for (const auto& part : split(spec, ',')) {
    const std::string item = trim(part);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("grid", "expected key=value in \"" + item + "\"");
    const std::string key = trim(item.substr(0, eq));
    SweepAxis* axis = nullptr;
    if (key == "a_star_hi") axis = &grid.a_star_hi;
    else if (key == "a_star_lo") axis = &grid.a_star_lo;
    else if (key == "m02") axis = &grid.m02;
    else throw ConfigError("grid." + key, "unknown axis (use a_star_hi, a_star_lo, m02)");

    const auto fields = split(item.substr(eq + 1), ':');
    try {
      if (fields.size() == 1) {
        const double v = parse_double(fields[0], "grid." + key);
        *axis = {v, v, 1};
      } else if (fields.size() == 3) {
        const double lo = parse_double(fields[0], "grid." + key);
        const double hi = parse_double(fields[1], "grid." + key);
        const double n = parse_double(fields[2], "grid." + key);
        if (n < 1 || n != std::floor(n)) throw ConfigError("grid." + key, "count must be a positive integer");
        *axis = {lo, hi, static_cast<std::size_t>(n)};
      } else {
        throw ConfigError("grid." + key, "expected VALUE or LO:HI:COUNT");
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const SimError& e) {
      throw ConfigError("grid." + key, e.what());
    }
  }
  return grid;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "a_star_hi,a_star_lo,m02,feasible,F_min,F_max,T_m,T_M,T_ell,T_star\n";
  for (const auto& r : rows) {
    out << format_number(r.a_star_hi) << ',' << format_number(r.a_star_lo) << ','
        << format_number(r.m02) << ',';
    if (r.horizon) {
      const auto& h = *r.horizon;
      out << "1," << format_number(h.F_min) << ',' << format_number(h.F_max) << ','
          << format_number(h.T_m) << ',' << format_number(h.T_M) << ',' << format_number(h.T_ell)
          << ',' << format_number(h.T_star) << '\n';
    } else {
      out << "0,,,,,,\n";
    }
  }
}

std::optional<PlotField> plot_field_from_string(const std::string& name) {
  if (name == "alpha") return PlotField::Alpha;
  if (name == "u") return PlotField::Velocity;
  if (name == "c") return PlotField::Oxygen;
  if (name == "radius") return PlotField::Radius;
  return std::nullopt;
}

const char* to_string(PlotField field) noexcept {
  switch (field) {
    case PlotField::Alpha: return "alpha";
    case PlotField::Velocity: return "u";
    case PlotField::Oxygen: return "c";
    case PlotField::Radius: return "radius";
  }
  return "unknown";
}

std::string render_svg(const Trajectory& traj, PlotField which) {
  std::vector<Series> series;
  if (which == PlotField::Radius) {
    Series s;
    s.colour = time_colour(1.0);
    s.label = "radius";
    // Thin long runs to at most ~2000 vertices; always keep the last record.
    const std::size_t stride = std::max<std::size_t>(1, traj.steps.size() / 2000);
    for (std::size_t i = 0; i < traj.steps.size(); i += stride) {
      s.points.emplace_back(traj.steps[i].t, traj.steps[i].radius);
    }
    if (!traj.steps.empty() && (traj.steps.size() - 1) % stride != 0) {
      s.points.emplace_back(traj.steps.back().t, traj.steps.back().radius);
    }
    series.push_back(std::move(s));
    return svg_document(series, "tumour radius", "t", "radius", false);
  }

  const std::size_t count = traj.snapshots.size();
  for (std::size_t i = 0; i < count; ++i) {
    const auto& snap = traj.snapshots[i];
    Series s;
    s.points = field_points(snap.state, which, traj.config.h);
    s.colour = time_colour(count > 1 ? static_cast<double>(i) / static_cast<double>(count - 1) : 1.0);
    s.label = "t = " + short_number(snap.t);
    series.push_back(std::move(s));
  }
  const char* title = which == PlotField::Alpha      ? "cell volume fraction"
                      : which == PlotField::Velocity ? "cell velocity"
                                                     : "oxygen tension";
  return svg_document(series, title, "x", to_string(which), true);
}

void write_run_outputs(const std::filesystem::path& dir, const Trajectory& traj,
                       const RunConfig& config) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw SimError(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());

  auto open = [&](const std::string& name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw SimError(ErrorCode::IoError, "cannot write " + (dir / name).string());
    return out;
  };

  const Mesh mesh = build_mesh(traj.config);
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "snapshot_%03zu.csv", i);
    auto out = open(name);
    write_snapshot_csv(out, traj.snapshots[i].state, mesh);
  }
  {
    auto out = open("radius.csv");
    write_radius_csv(out, traj);
  }
  {
    auto out = open("summary.json");
    json doc = summary_json(traj, config.reference_C_CFL);
    json snaps = json::array();
    for (const auto& s : traj.snapshots) snaps.push_back({{"t", s.t}, {"radius", s.state.radius(mesh)}});
    doc["snapshots"] = snaps;
    doc["config"] = config_to_json(config);
    out << doc.dump(2) << '\n';
  }
  if (config.output.plots) {
    for (PlotField f : {PlotField::Alpha, PlotField::Velocity, PlotField::Oxygen, PlotField::Radius}) {
      auto out = open(std::string("plot_") + to_string(f) + ".svg");
      out << render_svg(traj, f);
    }
  }
}

}  // namespace tumorsim
