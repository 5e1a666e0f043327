#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>

#include "tumorsim/config.hpp"
#include "tumorsim/export.hpp"

using namespace tumorsim;
namespace fs = std::filesystem;

namespace {
const fs::path kConfigDir = TUMORSIM_CONFIG_DIR;

nlohmann::json reference_json() {
  std::ifstream in(kConfigDir / "breward_ref.json");
  return nlohmann::json::parse(in);
}

std::string config_error_path(const nlohmann::json& doc) {
  try {
    parse_config(doc);
  } catch (const ConfigError& e) {
    return e.key_path();
  }
  return "<none>";
}

// Balanced open/close tags, a single root element and no stray '<' or '&'.
bool well_formed_xml(const std::string& text) {
  std::vector<std::string> stack;
  std::size_t pos = 0;
  bool root_seen = false;
  while ((pos = text.find('<', pos)) != std::string::npos) {
    const auto end = text.find('>', pos);
    if (end == std::string::npos) return false;
    const std::string tag = text.substr(pos + 1, end - pos - 1);
    pos = end + 1;
    if (tag.empty()) return false;
    if (tag[0] == '?' || tag[0] == '!') continue;
    if (tag[0] == '/') {
      if (stack.empty() || stack.back() != tag.substr(1)) return false;
      stack.pop_back();
      continue;
    }
    const std::string name = tag.substr(0, tag.find_first_of(" \t\n/"));
    if (stack.empty()) {
      if (root_seen) return false;
      root_seen = true;
    }
    if (tag.back() != '/') stack.push_back(name);
  }
  if (!stack.empty() || !root_seen) return false;
  // Text content must not carry raw markup characters.
  return std::regex_search(text, std::regex("&(?!amp;|lt;|gt;|quot;)")) == false;
}

std::size_t count(const std::string& text, const std::string& what) {
  std::size_t n = 0;
  for (auto p = text.find(what); p != std::string::npos; p = text.find(what, p + 1)) ++n;
  return n;
}

Trajectory short_run(double T, std::size_t snapshots) {
  const RunConfig cfg = parse_config(reference_json());
  SchemeConfig s = cfg.scheme;
  s.T_final = T;
  RunOptions o = cfg.run_options();
  o.snapshots = snapshots;
  return run(cfg.model, s, cfg.alpha0.function(), cfg.c0.function(), o);
}
}  // namespace

TEST_CASE("the shipped reference configuration") {
  const RunConfig c = parse_config_file(kConfigDir / "breward_ref.json");
  CHECK(c.model.k == 1);
  CHECK(c.model.mu == 1);
  CHECK(c.model.Q == 0.5);
  CHECK(c.model.Q1hat == 0);
  CHECK(c.model.s1 == 10);
  CHECK(c.model.s4 == 10);
  CHECK(c.model.s2 == 0.5);
  CHECK(c.model.s3 == 0.5);
  CHECK(c.model.alphaR == 0.8);
  CHECK(c.scheme.a_star_lo == 0.4);
  CHECK(c.scheme.a_star_hi == 0.82);
  CHECK(c.scheme.ellm == 10);
  CHECK(c.scheme.alpha_thr == 0.1);
  CHECK(c.scheme.rho == 0.1);
  CHECK(c.scheme.delta == 1e-3);
  CHECK(c.scheme.h == 5e-2);
  CHECK(c.output.snapshots == 10);
  REQUIRE(c.reference_C_CFL.has_value());
}

TEST_CASE("configuration errors carry key paths") {
  auto doc = reference_json();
  doc["model"].erase("mu");
  CHECK(config_error_path(doc) == "model.mu");

  doc = reference_json();
  doc["scheme"]["alpha_thr"] = 1.5;
  CHECK(config_error_path(doc) == "scheme.alpha_thr");

  doc = reference_json();
  doc["scheme"]["colour"] = 1;
  CHECK(config_error_path(doc) == "scheme.colour");

  doc = reference_json();
  doc["scheme"]["h"] = 0.3;
  CHECK(config_error_path(doc) == "scheme.h");

  doc = reference_json();
  doc["initial"]["alpha0"] = {{"type", "spline"}};
  CHECK(config_error_path(doc) == "initial.alpha0.type");

  CHECK_THROWS_AS(parse_config_text("{not json"), ConfigError);
  CHECK_THROWS_AS(parse_config_file("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("defaults for optional keys") {
  auto doc = reference_json();
  doc["scheme"].erase("ell0");
  doc["scheme"].erase("rho");
  doc.erase("output");
  doc.erase("mode");
  const RunConfig c = parse_config(doc);
  CHECK(c.scheme.ell0 == 1.0);
  CHECK(c.scheme.rho == 0.1);
  CHECK(c.output.snapshots == 10);
  CHECK(c.mode == RunMode::Strict);
}

TEST_CASE("configuration round trip") {
  const RunConfig c = parse_config(reference_json());
  const RunConfig again = parse_config(config_to_json(c));
  CHECK(config_to_json(again) == config_to_json(c));
}

TEST_CASE("polynomial profiles") {
  auto doc = reference_json();
  doc["initial"]["alpha0"] = {{"type", "polynomial"}, {"coefficients", {0.8, 0.0, 0.0}}};
  doc["initial"]["c0"] = {{"type", "polynomial"}, {"coefficients", {1.0, -0.1}}};
  const RunConfig c = parse_config(doc);
  CHECK(c.alpha0(0.3) == doctest::Approx(0.8));
  CHECK(c.c0(1.0) == doctest::Approx(0.9));
}

TEST_CASE("snapshot CSV round trip is bitwise") {
  const auto t = short_run(0.3, 3);
  const Mesh m = build_mesh(t.config);
  for (const auto& snap : t.snapshots) {
    std::stringstream buf;
    write_snapshot_csv(buf, snap.state, m);
    const std::string text = buf.str();
    CHECK(text.rfind("x,alpha,u,c\n", 0) == 0);
    CHECK(text.find('\r') == std::string::npos);
    const auto table = read_snapshot_csv(buf);
    REQUIRE(table.x.size() == m.nodes());
    CHECK(table.cell_alpha() == snap.state.alpha);
    CHECK(table.u == snap.state.u.values);
    CHECK(table.c == snap.state.c.values);
    CHECK(table.alpha.back() == table.alpha[table.alpha.size() - 2]);
  }
}

TEST_CASE("17 significant digits") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  for (double v : {1.0 / 3.0, 2.0 / 7.0, 1e-300, 123456.789}) CHECK(std::stod(format_number(v)) == v);
}

TEST_CASE("radius CSV") {
  const auto t = short_run(0.01, 2);
  std::stringstream buf;
  write_radius_csv(buf, t);
  std::string line;
  std::getline(buf, line);
  CHECK(line == "t,ell");
  std::size_t rows = 0;
  while (std::getline(buf, line)) ++rows;
  CHECK(rows == t.steps.size());
}

TEST_CASE("SVG output") {
  const auto t = short_run(0.3, 4);
  for (PlotField f : {PlotField::Alpha, PlotField::Velocity, PlotField::Oxygen, PlotField::Radius}) {
    const std::string svg = render_svg(t, f);
    CHECK(well_formed_xml(svg));
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(count(svg, "<polyline") == (f == PlotField::Radius ? 1u : t.snapshots.size()));
  }
  const auto single = short_run(0.0, 10);
  CHECK(count(render_svg(single, PlotField::Alpha), "<polyline") == 1);
  CHECK(plot_field_from_string("u") == PlotField::Velocity);
  CHECK_FALSE(plot_field_from_string("pressure").has_value());
}

TEST_CASE("summary JSON keeps verdicts and horizon on forced runs") {
  const auto t = short_run(0.05, 2);
  const auto s = summary_json(t, 0.0361);
  CHECK(s.contains("monitors"));
  CHECK(s["monitors"].contains("radius_decomposition"));
  CHECK(s.contains("horizon"));
  CHECK(s["cfl"]["reference_C_CFL"] == 0.0361);
  CHECK(s["cfl"]["ratio"].get<double>() == doctest::Approx(0.02));
}

TEST_CASE("grid specification") {
  const SchemeConfig base;
  const auto g = parse_grid_spec("a_star_hi=0.81:0.99:10, a_star_lo=0.05", base);
  CHECK(g.a_star_hi.count == 10);
  CHECK(g.a_star_lo.values() == std::vector<double>{0.05});
  CHECK(g.m02.values() == std::vector<double>{base.m02});
  CHECK_THROWS_AS(parse_grid_spec("temperature=1", base), ConfigError);
  CHECK_THROWS_AS(parse_grid_spec("m02=1:2", base), ConfigError);
}

TEST_CASE("run outputs on disk") {
  const fs::path dir = fs::temp_directory_path() / "tumorsim_io_test";
  fs::remove_all(dir);
  RunConfig cfg = parse_config(reference_json());
  cfg.scheme.T_final = 0.1;
  const auto t = run(cfg.model, cfg.scheme, cfg.alpha0.function(), cfg.c0.function(), cfg.run_options());
  write_run_outputs(dir, t, cfg);
  for (int i = 0; i < 10; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "snapshot_%03d.csv", i);
    CHECK(fs::exists(dir / name));
  }
  for (const char* f : {"radius.csv", "summary.json", "plot_alpha.svg", "plot_u.svg", "plot_c.svg", "plot_radius.svg"}) {
    CHECK(fs::exists(dir / f));
  }
  fs::remove_all(dir);
}

TEST_CASE("command-line exit codes") {
  const std::string exe = TUMORSIM_CLI;
  const std::string cfg = (kConfigDir / "breward_ref.json").string();
  const std::string quiet = " > /dev/null 2>&1";
  auto status = [](const std::string& cmd) {
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  CHECK(status(exe + " cfl " + cfg + quiet) == 0);
  CHECK(status(exe + " run /nonexistent/missing.json" + quiet) == 2);
  CHECK(status(exe + " horizon " + cfg + quiet) == 1);  // a_* = 0.4 >= alpha_thr
  CHECK(status(exe + " frobnicate" + quiet) == 2);

  const fs::path out = fs::temp_directory_path() / "tumorsim_cli_test";
  fs::remove_all(out);
  CHECK(status(exe + " run " + cfg + " --t-final 0.05 --snapshots 2 --out " + out.string() + quiet) == 0);
  CHECK(fs::exists(out / "snapshot_001.csv"));
  CHECK_FALSE(fs::exists(out / "snapshot_002.csv"));

  const std::string text = [&] {
    const fs::path f = out / "cfl.json";
    status(exe + " cfl " + cfg + " --out " + out.string() + quiet);
    std::ifstream in(f);
    std::stringstream b;
    b << in.rdbuf();
    return b.str();
  }();
  const auto doc = nlohmann::json::parse(text);
  CHECK(doc["ratio"].get<double>() == doctest::Approx(0.02));
  CHECK(doc["feasible"] == true);
  fs::remove_all(out);
}
