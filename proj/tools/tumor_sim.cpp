// tumor-sim: command-line front end over the C interface.
//
// Exit status: 0 success, 1 model or monitor error, 2 configuration error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tumorsim/tumorsim.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitModel = 1;
constexpr int kExitConfig = 2;

struct ConfigDeleter {
  void operator()(ts_config* c) const { ts_config_free(c); }
};
struct TrajectoryDeleter {
  void operator()(ts_trajectory* t) const { ts_trajectory_free(t); }
};
struct StringDeleter {
  void operator()(char* s) const { ts_string_free(s); }
};
using ConfigPtr = std::unique_ptr<ts_config, ConfigDeleter>;
using TrajectoryPtr = std::unique_ptr<ts_trajectory, TrajectoryDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

int fail(ts_status status) {
  std::cerr << "tumor-sim: " << ts_status_name(status) << ": " << ts_last_error() << '\n';
  return status == TS_CONFIG_ERROR ? kExitConfig : kExitModel;
}

struct Options {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::size_t> snapshots;
  std::optional<double> t_final;
  bool force = false;
  std::size_t levels = 3;
  std::string grid;
};

int load(const Options& o, ConfigPtr& cfg) {
  ts_config* raw = nullptr;
  ts_status st = ts_config_load(o.config.c_str(), &raw);
  cfg.reset(raw);
  if (st != TS_OK) return fail(st);
  if (o.out && (st = ts_config_set_output_dir(cfg.get(), o.out->c_str())) != TS_OK) return fail(st);
  if (o.snapshots && (st = ts_config_set_snapshots(cfg.get(), *o.snapshots)) != TS_OK) return fail(st);
  if (o.t_final && (st = ts_config_set_t_final(cfg.get(), *o.t_final)) != TS_OK) return fail(st);
  if (o.force && (st = ts_config_set_force(cfg.get(), 1)) != TS_OK) return fail(st);
  return kExitOk;
}

// Prints text, and also stores it as dir/name when an output directory was given.
int emit(const Options& o, const char* text, const char* name) {
  std::cout << text;
  if (!o.out) return kExitOk;
  std::error_code ec;
  std::filesystem::create_directories(*o.out, ec);
  const auto path = std::filesystem::path(*o.out) / name;
  std::ofstream file(path, std::ios::binary);
  if (!file || !(file << text)) {
    std::cerr << "tumor-sim: cannot write " << path.string() << '\n';
    return kExitModel;
  }
  return kExitOk;
}

int cmd_json(const Options& o, ts_status (*fn)(const ts_config*, char**), const char* name) {
  ConfigPtr cfg;
  if (int rc = load(o, cfg)) return rc;
  char* raw = nullptr;
  const ts_status st = fn(cfg.get(), &raw);
  StringPtr text(raw);
  if (st != TS_OK) return fail(st);
  std::string body = std::string(text.get()) + "\n";
  return emit(o, body.c_str(), name);
}

int cmd_run(const Options& o) {
  ConfigPtr cfg;
  if (int rc = load(o, cfg)) return rc;
  ts_trajectory* raw = nullptr;
  ts_status st = ts_run(cfg.get(), &raw);
  TrajectoryPtr traj(raw);
  if (st != TS_OK) return fail(st);

  if ((st = ts_trajectory_write(traj.get(), nullptr)) != TS_OK) return fail(st);

  char* dir_raw = nullptr;
  ts_config_output_dir(cfg.get(), &dir_raw);
  StringPtr dir(dir_raw);
  ts_termination term = TS_COMPLETED;
  ts_trajectory_termination(traj.get(), &term);
  const std::string message = ts_last_error();
  std::size_t violations = 0;
  ts_trajectory_violation_count(traj.get(), &violations);
  double radius = 0.0;
  ts_trajectory_final_radius(traj.get(), &radius);

  std::printf("outputs written to %s\nfinal radius %.6g, %zu monitor violation(s)\n", dir.get(), radius,
              violations);
  if (term != TS_COMPLETED) {
    std::cerr << "tumor-sim: run stopped early: " << message << '\n';
    return kExitModel;
  }
  return kExitOk;
}

int cmd_sweep(const Options& o) {
  if (o.grid.empty()) {
    std::cerr << "tumor-sim: sweep needs --grid\n";
    return kExitConfig;
  }
  ConfigPtr cfg;
  if (int rc = load(o, cfg)) return rc;
  char* raw = nullptr;
  const ts_status st = ts_sweep_csv(cfg.get(), o.grid.c_str(), &raw);
  StringPtr text(raw);
  if (st != TS_OK) return fail(st);
  return emit(o, text.get(), "sweep.csv");
}

int cmd_refine(const Options& o) {
  ConfigPtr cfg;
  if (int rc = load(o, cfg)) return rc;
  char* raw = nullptr;
  const ts_status st = ts_refine_json(cfg.get(), o.levels, &raw);
  StringPtr text(raw);
  if (st != TS_OK) return fail(st);
  std::string body = std::string(text.get()) + "\n";
  return emit(o, body.c_str(), "refine.json");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete two-phase tumour growth simulator"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", o.config, "JSON configuration file")->required();
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--t-final", o.t_final, "override scheme.T_final");
    sub->add_flag("--force", o.force, "run even outside the CFL window, logging violations");
  };

  auto* run = app.add_subcommand("run", "simulate and write snapshots, radius.csv, summary.json, plots");
  add_common(run);
  run->add_option("--snapshots", o.snapshots, "number of stored snapshots")->check(CLI::PositiveNumber);

  auto* cfl = app.add_subcommand("cfl", "print the CFL report as JSON");
  add_common(cfl);
  auto* horizon = app.add_subcommand("horizon", "print the existence horizon as JSON");
  add_common(horizon);

  auto* sweep = app.add_subcommand("sweep", "tabulate the existence horizon over a parameter grid");
  add_common(sweep);
  sweep->add_option("--grid", o.grid, "e.g. a_star_hi=0.81:0.99:50,a_star_lo=0.005:0.09:50")->required();

  auto* refine = app.add_subcommand("refine", "L1 differences of alpha under (h, delta) halving");
  add_common(refine);
  refine->add_option("--levels", o.levels, "number of levels")->check(CLI::Range(2, 8));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  if (!std::filesystem::exists(o.config)) {
    std::cerr << "tumor-sim: config: cannot open " << o.config << '\n';
    return kExitConfig;
  }
  if (*run) return cmd_run(o);
  if (*cfl) return cmd_json(o, ts_cfl_json, "cfl.json");
  if (*horizon) return cmd_json(o, ts_horizon_json, "horizon.json");
  if (*sweep) return cmd_sweep(o);
  return cmd_refine(o);
}
