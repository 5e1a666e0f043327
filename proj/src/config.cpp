#include "tumorsim/config.hpp"

#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

namespace tumorsim {

using nlohmann::json;

namespace {

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

const json& require_object(const json& doc, const std::string& path) {
  if (!doc.is_object()) throw ConfigError(path, "expected an object");
  return doc;
}

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<const char*> allowed) {
  const std::set<std::string> names(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!names.contains(key)) throw ConfigError(join(path, key), "unknown key");
  }
}

double read_number(const json& obj, const std::string& path, const char* key) {
  const std::string where = join(path, key);
  if (!obj.contains(key)) throw ConfigError(where, "missing required key");
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where, "expected a number");
  return v.get<double>();
}

double read_number_or(const json& obj, const std::string& path, const char* key, double fallback) {
  return obj.contains(key) ? read_number(obj, path, key) : fallback;
}

// Maps the "<field>: reason" messages of the validators onto a key path.
template <class Fn>
void validate_section(const std::string& section, Fn&& fn) {
  try {
    fn();
  } catch (const SimError& e) {
    const std::string msg = e.what();
    const auto colon = msg.find(':');
    if (colon == std::string::npos) throw ConfigError(section, msg);
    throw ConfigError(section + "." + msg.substr(0, colon), msg.substr(colon + 2));
  }
}

InitialProfile read_profile(const json& doc, const std::string& path) {
  require_object(doc, path);
  if (!doc.contains("type") || !doc.at("type").is_string()) {
    throw ConfigError(join(path, "type"), "expected \"constant\" or \"polynomial\"");
  }
  const auto type = doc.at("type").get<std::string>();
  InitialProfile p;
  if (type == "constant") {
    reject_unknown(doc, path, {"type", "value"});
    p.kind = InitialProfile::Kind::Constant;
    p.coefficients = {read_number(doc, path, "value")};
  } else if (type == "polynomial") {
    reject_unknown(doc, path, {"type", "coefficients"});
    p.kind = InitialProfile::Kind::Polynomial;
    const std::string where = join(path, "coefficients");
    if (!doc.contains("coefficients")) throw ConfigError(where, "missing required key");
    const json& list = doc.at("coefficients");
    if (!list.is_array() || list.empty()) throw ConfigError(where, "expected a nonempty array");
    for (const auto& c : list) {
      if (!c.is_number()) throw ConfigError(where, "expected numbers");
      p.coefficients.push_back(c.get<double>());
    }
  } else {
    throw ConfigError(join(path, "type"), "unknown profile type \"" + type + "\"");
  }
  return p;
}

json profile_to_json(const InitialProfile& p) {
  if (p.kind == InitialProfile::Kind::Constant) {
    return {{"type", "constant"}, {"value", p.coefficients.at(0)}};
  }
  return {{"type", "polynomial"}, {"coefficients", p.coefficients}};
}

}  // namespace

double InitialProfile::operator()(double x) const {
  double acc = 0.0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * x + *it;
  return acc;
}

ScalarFunction InitialProfile::function() const {
  return [p = *this](double x) { return p(x); };
}

RunOptions RunConfig::run_options() const {
  RunOptions o;
  o.snapshots = output.snapshots;
  o.mode = mode;
  return o;
}

RunConfig parse_config(const json& doc) {
  require_object(doc, "");
  reject_unknown(doc, "", {"model", "scheme", "initial", "output", "mode", "reference"});
  RunConfig cfg;

  if (!doc.contains("model")) throw ConfigError("model", "missing required key");
  const json& model = require_object(doc.at("model"), "model");
  reject_unknown(model, "model", {"k", "mu", "lambda", "Q", "Q1hat", "s1", "s2", "s3", "s4", "alphaR"});
  cfg.model.k = read_number(model, "model", "k");
  cfg.model.mu = read_number(model, "model", "mu");
  cfg.model.lambda = read_number(model, "model", "lambda");
  cfg.model.Q = read_number(model, "model", "Q");
  cfg.model.Q1hat = read_number(model, "model", "Q1hat");
  cfg.model.s1 = read_number(model, "model", "s1");
  cfg.model.s2 = read_number(model, "model", "s2");
  cfg.model.s3 = read_number(model, "model", "s3");
  cfg.model.s4 = read_number(model, "model", "s4");
  cfg.model.alphaR = read_number(model, "model", "alphaR");
  validate_section("model", [&] { cfg.model.validate(); });

  if (!doc.contains("scheme")) throw ConfigError("scheme", "missing required key");
  const json& scheme = require_object(doc.at("scheme"), "scheme");
  reject_unknown(scheme, "scheme", {"h", "delta", "ell0", "ellm", "alpha_thr", "rho", "a_star_lo",
                                    "a_star_hi", "m01", "m02", "T_final"});
  auto& s = cfg.scheme;
  s.h = read_number(scheme, "scheme", "h");
  s.delta = read_number(scheme, "scheme", "delta");
  s.ell0 = read_number_or(scheme, "scheme", "ell0", 1.0);
  s.ellm = read_number(scheme, "scheme", "ellm");
  s.alpha_thr = read_number(scheme, "scheme", "alpha_thr");
  s.rho = read_number_or(scheme, "scheme", "rho", 0.1);
  s.a_star_lo = read_number(scheme, "scheme", "a_star_lo");
  s.a_star_hi = read_number(scheme, "scheme", "a_star_hi");
  s.m01 = read_number(scheme, "scheme", "m01");
  s.m02 = read_number(scheme, "scheme", "m02");
  s.T_final = read_number(scheme, "scheme", "T_final");
  validate_section("scheme", [&] { s.validate(); });
  try {
    grid_index(s.ellm, s.h, "ellm");
    grid_index(s.ell0, s.h, "ell0");
  } catch (const SimError& e) {
    throw ConfigError("scheme.h", e.what());
  }

  if (!doc.contains("initial")) throw ConfigError("initial", "missing required key");
  const json& initial = require_object(doc.at("initial"), "initial");
  reject_unknown(initial, "initial", {"alpha0", "c0"});
  if (!initial.contains("alpha0")) throw ConfigError("initial.alpha0", "missing required key");
  if (!initial.contains("c0")) throw ConfigError("initial.c0", "missing required key");
  cfg.alpha0 = read_profile(initial.at("alpha0"), "initial.alpha0");
  cfg.c0 = read_profile(initial.at("c0"), "initial.c0");

  if (doc.contains("output")) {
    const json& out = require_object(doc.at("output"), "output");
    reject_unknown(out, "output", {"directory", "snapshots", "plots"});
    if (out.contains("directory")) {
      if (!out.at("directory").is_string()) throw ConfigError("output.directory", "expected a string");
      cfg.output.directory = out.at("directory").get<std::string>();
    }
    if (out.contains("snapshots")) {
      const json& n = out.at("snapshots");
      if (!n.is_number_integer() || n.get<long long>() < 1) {
        throw ConfigError("output.snapshots", "expected a positive integer");
      }
      cfg.output.snapshots = n.get<std::size_t>();
    }
    if (out.contains("plots")) {
      if (!out.at("plots").is_boolean()) throw ConfigError("output.plots", "expected a boolean");
      cfg.output.plots = out.at("plots").get<bool>();
    }
  }

  if (doc.contains("mode")) {
    const json& mode = doc.at("mode");
    if (mode == "strict") cfg.mode = RunMode::Strict;
    else if (mode == "forced") cfg.mode = RunMode::Forced;
    else throw ConfigError("mode", "expected \"strict\" or \"forced\"");
  }

  if (doc.contains("reference")) {
    const json& ref = require_object(doc.at("reference"), "reference");
    reject_unknown(ref, "reference", {"C_CFL"});
    if (ref.contains("C_CFL")) cfg.reference_C_CFL = read_number(ref, "reference", "C_CFL");
  }
  return cfg;
}

RunConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(doc);
}

RunConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

json config_to_json(const RunConfig& c) {
  json doc;
  doc["model"] = {{"k", c.model.k},         {"mu", c.model.mu}, {"lambda", c.model.lambda},
                  {"Q", c.model.Q},         {"Q1hat", c.model.Q1hat}, {"s1", c.model.s1},
                  {"s2", c.model.s2},       {"s3", c.model.s3}, {"s4", c.model.s4},
                  {"alphaR", c.model.alphaR}};
  doc["scheme"] = {{"h", c.scheme.h},
                   {"delta", c.scheme.delta},
                   {"ell0", c.scheme.ell0},
                   {"ellm", c.scheme.ellm},
                   {"alpha_thr", c.scheme.alpha_thr},
                   {"rho", c.scheme.rho},
                   {"a_star_lo", c.scheme.a_star_lo},
                   {"a_star_hi", c.scheme.a_star_hi},
                   {"m01", c.scheme.m01},
                   {"m02", c.scheme.m02},
                   {"T_final", c.scheme.T_final}};
  doc["initial"] = {{"alpha0", profile_to_json(c.alpha0)}, {"c0", profile_to_json(c.c0)}};
  doc["output"] = {{"directory", c.output.directory},
                   {"snapshots", c.output.snapshots},
                   {"plots", c.output.plots}};
  doc["mode"] = to_string(c.mode);
  if (c.reference_C_CFL) doc["reference"] = {{"C_CFL", *c.reference_C_CFL}};
  return doc;
}

}  // namespace tumorsim
