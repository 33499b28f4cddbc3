// Copyright 2026 The spinchain Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "spinchain/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

#include "spinchain/errors.hpp"
#include "spinchain/observables.hpp"

namespace spinchain {

using json = nlohmann::json;

namespace {

using K = ConfigError::Kind;

[[noreturn]] void fail(K kind, const std::string& field, const std::string& message) {
  throw ConfigError(kind, field, field.empty() ? message : field + ": " + message);
}

std::string join(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) fail(K::constraint, path, "expected an object");
  for (const auto& item : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      fail(K::unknown_key, join(path, item.key()), "unknown key '" + item.key() + "'");
    }
  }
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(K::constraint, path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(K::constraint, path, "must be finite");
  return v;
}

std::int64_t get_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(K::constraint, path, "expected an integer");
  return j.get<std::int64_t>();
}

int get_int(const json& j, const std::string& path) {
  const std::int64_t v = get_integer(j, path);
  if (v < -1'000'000 || v > 1'000'000) fail(K::constraint, path, "integer out of range");
  return static_cast<int>(v);
}

bool get_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(K::constraint, path, "expected true or false");
  return j.get<bool>();
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(K::constraint, path, "expected a string");
  return j.get<std::string>();
}

Triple get_triple(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) fail(K::constraint, path, "expected an array of 3 numbers");
  Triple t{};
  for (std::size_t k = 0; k < 3; ++k) t[k] = get_number(j[k], path + "[" + std::to_string(k) + "]");
  return t;
}

Axis parse_axis(const json& j, const std::string& path) {
  const std::string s = get_string(j, path);
  if (s == "x") return Axis::x;
  if (s == "y") return Axis::y;
  if (s == "z") return Axis::z;
  fail(K::constraint, path, "axis must be \"x\", \"y\" or \"z\", got \"" + s + "\"");
}

RateTable parse_rates(const json& j, const std::string& path) {
  check_keys(j, path, {"x+", "x-", "y+", "y-", "z+", "z-"});
  RateTable t;
  for (Axis a : kAxes) {
    for (Sign s : kSigns) {
      const std::string key = std::string(to_string(a)) + std::string(to_string(s));
      if (j.contains(key)) t(a, s) = get_number(j[key], join(path, key));
    }
  }
  return t;
}

json rates_to_json(const RateTable& t) {
  json j = json::object();
  for (Axis a : kAxes) {
    for (Sign s : kSigns) j[std::string(to_string(a)) + std::string(to_string(s))] = t(a, s);
  }
  return j;
}

ThermalRates parse_thermal(const json& j, const std::string& path) {
  check_keys(j, path, {"gamma_total", "n_b", "g_ratio", "all_axes"});
  ThermalRates t;
  if (j.contains("gamma_total")) t.gamma_total = get_number(j["gamma_total"], join(path, "gamma_total"));
  if (j.contains("n_b")) t.n_b = get_number(j["n_b"], join(path, "n_b"));
  if (j.contains("g_ratio")) t.g_ratio = get_number(j["g_ratio"], join(path, "g_ratio"));
  if (j.contains("all_axes")) t.all_axes = get_bool(j["all_axes"], join(path, "all_axes"));
  return t;
}

ModelSection parse_model(const json& j, const std::string& path) {
  check_keys(j, path,
             {"n_sites", "b_field", "couplings", "thermal", "on_site_rates", "neighbour_rates"});
  ModelSection m;
  if (j.contains("n_sites")) m.n_sites = get_int(j["n_sites"], join(path, "n_sites"));
  if (j.contains("b_field")) m.b_field = get_triple(j["b_field"], join(path, "b_field"));
  if (j.contains("couplings")) m.couplings = get_triple(j["couplings"], join(path, "couplings"));
  if (j.contains("thermal")) m.thermal = parse_thermal(j["thermal"], join(path, "thermal"));
  if (j.contains("on_site_rates")) {
    m.on_site_rates = parse_rates(j["on_site_rates"], join(path, "on_site_rates"));
  }
  if (j.contains("neighbour_rates")) {
    m.neighbour_rates = parse_rates(j["neighbour_rates"], join(path, "neighbour_rates"));
  }
  return m;
}

MeanFieldSection parse_meanfield(const json& j, const std::string& path) {
  check_keys(j, path, {"damping", "alpha", "d_vector", "mode"});
  MeanFieldSection m;
  if (j.contains("damping")) {
    const std::string s = get_string(j["damping"], join(path, "damping"));
    if (s == "fixed_d") {
      m.damping = DampingMode::fixed_d;
    } else if (s == "ll_alpha") {
      m.damping = DampingMode::ll_alpha;
    } else {
      fail(K::constraint, join(path, "damping"), "must be \"fixed_d\" or \"ll_alpha\"");
    }
  }
  if (j.contains("alpha")) m.alpha = get_number(j["alpha"], join(path, "alpha"));
  if (j.contains("d_vector")) m.d_vector = get_triple(j["d_vector"], join(path, "d_vector"));
  if (j.contains("mode")) {
    const std::string s = get_string(j["mode"], join(path, "mode"));
    if (s == "collective") {
      m.mode = MeanFieldMode::collective;
    } else if (s == "per_site") {
      m.mode = MeanFieldMode::per_site;
    } else {
      fail(K::constraint, join(path, "mode"), "must be \"collective\" or \"per_site\"");
    }
  }
  return m;
}

InitialState parse_initial(const json& j, const std::string& path) {
  InitialState s;
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    if (name == "all_up_x") {
      s.kind = InitialState::Kind::all_up_x;
    } else if (name == "all_up_z") {
      s.kind = InitialState::Kind::all_up_z;
    } else {
      fail(K::constraint, path, "must be \"all_up_x\", \"all_up_z\" or {\"tilted\": {...}}");
    }
    return s;
  }
  check_keys(j, path, {"tilted"});
  if (!j.contains("tilted")) fail(K::constraint, path, "expected {\"tilted\": {...}}");
  const std::string tp = join(path, "tilted");
  check_keys(j["tilted"], tp, {"theta", "phi"});
  s.kind = InitialState::Kind::tilted;
  if (j["tilted"].contains("theta")) s.theta = get_number(j["tilted"]["theta"], join(tp, "theta"));
  if (j["tilted"].contains("phi")) s.phi = get_number(j["tilted"]["phi"], join(tp, "phi"));
  return s;
}

std::vector<double> parse_grid(const json& j, const std::string& path) {
  std::vector<double> grid;
  if (j.is_array()) {
    for (std::size_t k = 0; k < j.size(); ++k) {
      grid.push_back(get_number(j[k], path + "[" + std::to_string(k) + "]"));
    }
    return grid;
  }
  check_keys(j, path, {"start", "stop", "points"});
  for (const char* key : {"start", "stop", "points"}) {
    if (!j.contains(key)) fail(K::constraint, join(path, key), "missing");
  }
  const double start = get_number(j["start"], join(path, "start"));
  const double stop = get_number(j["stop"], join(path, "stop"));
  const int points = get_int(j["points"], join(path, "points"));
  if (points < 2) fail(K::constraint, join(path, "points"), "must be >= 2");
  for (int k = 0; k < points; ++k) {
    grid.push_back(k == points - 1 ? stop : start + (stop - start) * k / (points - 1));
  }
  return grid;
}

Variant parse_variant(const json& j, const std::string& path) {
  check_keys(j, path, {"label", "n_sites", "b_field", "couplings", "gamma_total", "all_axes"});
  Variant v;
  if (!j.contains("label")) fail(K::constraint, join(path, "label"), "missing");
  v.label = get_string(j["label"], join(path, "label"));
  if (j.contains("n_sites")) v.n_sites = get_int(j["n_sites"], join(path, "n_sites"));
  if (j.contains("b_field")) v.b_field = get_triple(j["b_field"], join(path, "b_field"));
  if (j.contains("couplings")) v.couplings = get_triple(j["couplings"], join(path, "couplings"));
  if (j.contains("gamma_total")) {
    v.gamma_total = get_number(j["gamma_total"], join(path, "gamma_total"));
  }
  if (j.contains("all_axes")) v.all_axes = get_bool(j["all_axes"], join(path, "all_axes"));
  return v;
}

bool safe_name(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  });
}

void check_sites(int i, int j, int n_sites, const std::string& path) {
  if (i < 1 || i > n_sites || j < 1 || j > n_sites) {
    fail(K::constraint, path,
         "sites (" + std::to_string(i) + "," + std::to_string(j) + ") outside [1, " +
             std::to_string(n_sites) + "]");
  }
  if (i == j) fail(K::constraint, path, "sites must differ");
}

void validate_config(const ExperimentConfig& c) {
  if (!safe_name(c.name)) fail(K::constraint, "name", "must be nonempty [A-Za-z0-9_.-]");
  if (!(c.t_end > 0.0)) fail(K::constraint, "t_end", "must be > 0");
  if (!(c.dt > 0.0)) fail(K::constraint, "dt", "must be > 0");
  if (!(c.sample_every >= c.dt)) fail(K::constraint, "sample_every", "must be >= dt");
  const double ratio = c.sample_every / c.dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
    fail(K::constraint, "sample_every", "must be an integer multiple of dt");
  }
  if (c.max_sites < 1 || c.max_sites > 7) fail(K::constraint, "max_sites", "must be in [1, 7]");
  if (!(c.deviation_window.first < c.deviation_window.second)) {
    fail(K::constraint, "deviation_window", "must satisfy start < end");
  }
  if (c.meanfield.alpha < 0.0) fail(K::constraint, "meanfield.alpha", "must be >= 0");
  if (c.kind == ExperimentKind::hysteresis && c.bz_grid.size() < 2) {
    fail(K::constraint, "bz_grid", "hysteresis needs at least 2 fields");
  }
  if (c.kind == ExperimentKind::correlations && c.correlations.empty() &&
      c.concurrence_pairs.empty()) {
    fail(K::constraint, "correlations", "nothing to compute");
  }

  std::set<std::string> labels;
  for (std::size_t k = 0; k < c.variants.size(); ++k) {
    const std::string path = "variants[" + std::to_string(k) + "]";
    if (!safe_name(c.variants[k].label)) {
      fail(K::constraint, path + ".label", "must be nonempty [A-Za-z0-9_.-]");
    }
    if (!labels.insert(c.variants[k].label).second) {
      fail(K::constraint, path + ".label", "duplicate label '" + c.variants[k].label + "'");
    }
  }
  std::vector<const Variant*> runs;
  if (c.variants.empty()) runs.push_back(nullptr);
  for (const Variant& v : c.variants) runs.push_back(&v);
  for (const Variant* v : runs) {
    const ChainModel m = c.chain_model(v);
    for (std::size_t k = 0; k < c.correlations.size(); ++k) {
      check_sites(c.correlations[k].i, c.correlations[k].j, m.n_sites,
                  "correlations[" + std::to_string(k) + "]");
    }
    for (std::size_t k = 0; k < c.concurrence_pairs.size(); ++k) {
      check_sites(c.concurrence_pairs[k].first, c.concurrence_pairs[k].second, m.n_sites,
                  "concurrence_pairs[" + std::to_string(k) + "]");
    }
  }
}

int line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(byte), '\n'));
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::dynamics: return "dynamics";
    case ExperimentKind::hysteresis: return "hysteresis";
    case ExperimentKind::compare: return "compare";
    case ExperimentKind::correlations: return "correlations";
    case ExperimentKind::spectrum: return "spectrum";
  }
  return "?";
}

std::string_view to_string(SolverChoice solver) {
  switch (solver) {
    case SolverChoice::rk4: return "rk4";
    case SolverChoice::spectral: return "spectral";
    case SolverChoice::auto_select: return "auto";
  }
  return "?";
}

SolverChoice parse_solver(std::string_view name) {
  if (name == "rk4") return SolverChoice::rk4;
  if (name == "spectral") return SolverChoice::spectral;
  if (name == "auto") return SolverChoice::auto_select;
  fail(K::constraint, "solver", "must be \"rk4\", \"spectral\" or \"auto\"");
}

Vec3 InitialState::direction() const {
  switch (kind) {
    case Kind::all_up_x: return Vec3::UnitX();
    case Kind::all_up_z: return Vec3::UnitZ();
    case Kind::tilted: return tilted_direction(theta, phi);
  }
  return Vec3::UnitX();
}

std::string CorrelationSpec::column() const {
  return "C" + std::string(to_string(a)) + std::string(to_string(b)) + std::to_string(i) +
         std::to_string(j);
}

ChainModel ExperimentConfig::chain_model(const Variant* variant) const {
  ChainModel m;
  ThermalRates thermal = model.thermal;
  m.n_sites = model.n_sites;
  Triple b = model.b_field;
  Triple v = model.couplings;
  if (variant != nullptr) {
    if (variant->n_sites) m.n_sites = *variant->n_sites;
    if (variant->b_field) b = *variant->b_field;
    if (variant->couplings) v = *variant->couplings;
    if (variant->gamma_total) thermal.gamma_total = *variant->gamma_total;
    if (variant->all_axes) thermal.all_axes = *variant->all_axes;
  }
  m.b_field = Vec3(b[0], b[1], b[2]);
  m.couplings = Vec3(v[0], v[1], v[2]);
  if (model.on_site_rates || model.neighbour_rates) {
    if (!std::isfinite(thermal.n_b) || thermal.n_b < 0.0) {
      throw ConfigError(K::constraint, "model.thermal.n_b", "n_b must be finite and >= 0");
    }
    m.on_site_rates = model.on_site_rates.value_or(RateTable{});
    m.neighbour_rates = model.neighbour_rates.value_or(RateTable{});
    m.n_b = thermal.n_b;
  } else {
    apply_thermal_rates(m, thermal);
  }
  m.validate();
  return m;
}

MeanFieldConfig ExperimentConfig::meanfield_config(const Variant* variant) const {
  MeanFieldConfig c;
  c.model = chain_model(variant);
  c.damping = meanfield.damping;
  c.alpha = meanfield.alpha;
  if (meanfield.d_vector) {
    const Triple& d = *meanfield.d_vector;
    c.d_vector = Vec3(d[0], d[1], d[2]);
  }
  c.mode = meanfield.mode;
  return c;
}

int ExperimentConfig::sample_stride() const {
  return static_cast<int>(std::max<long long>(1, std::llround(sample_every / dt)));
}

ExperimentConfig parse_config_json(const json& j) {
  if (!j.is_object()) fail(K::constraint, "", "config must be a JSON object");
  if (j.contains("preset")) {
    const std::string id = get_string(j["preset"], "preset");
    json merged = to_json(expand_preset(id));
    json rest = j;
    rest.erase("preset");
    merged.merge_patch(rest);
    return parse_config_json(merged);
  }
  check_keys(j, "",
             {"kind", "name", "model", "meanfield", "solver", "t_end", "dt", "sample_every",
              "bz_grid", "initial_state", "output_path", "seed", "correlations",
              "concurrence_pairs", "deviation_window", "variants", "max_sites"});
  ExperimentConfig c;
  if (j.contains("kind")) {
    const std::string s = get_string(j["kind"], "kind");
    bool found = false;
    for (ExperimentKind k : {ExperimentKind::dynamics, ExperimentKind::hysteresis,
                             ExperimentKind::compare, ExperimentKind::correlations,
                             ExperimentKind::spectrum}) {
      if (s == to_string(k)) {
        c.kind = k;
        found = true;
      }
    }
    if (!found) fail(K::constraint, "kind", "unknown experiment kind \"" + s + "\"");
  }
  if (j.contains("name")) c.name = get_string(j["name"], "name");
  if (j.contains("model")) c.model = parse_model(j["model"], "model");
  if (j.contains("meanfield")) c.meanfield = parse_meanfield(j["meanfield"], "meanfield");
  if (j.contains("solver")) c.solver = parse_solver(get_string(j["solver"], "solver"));
  if (j.contains("t_end")) c.t_end = get_number(j["t_end"], "t_end");
  if (j.contains("dt")) c.dt = get_number(j["dt"], "dt");
  if (j.contains("sample_every")) c.sample_every = get_number(j["sample_every"], "sample_every");
  if (j.contains("bz_grid")) c.bz_grid = parse_grid(j["bz_grid"], "bz_grid");
  if (j.contains("initial_state")) {
    c.initial_state = parse_initial(j["initial_state"], "initial_state");
  }
  if (j.contains("output_path")) c.output_path = get_string(j["output_path"], "output_path");
  if (j.contains("seed")) c.seed = get_integer(j["seed"], "seed");
  if (j.contains("correlations")) {
    const json& arr = j["correlations"];
    if (!arr.is_array()) fail(K::constraint, "correlations", "expected an array");
    for (std::size_t k = 0; k < arr.size(); ++k) {
      const std::string path = "correlations[" + std::to_string(k) + "]";
      check_keys(arr[k], path, {"i", "j", "a", "b"});
      CorrelationSpec s;
      if (arr[k].contains("i")) s.i = get_int(arr[k]["i"], join(path, "i"));
      if (arr[k].contains("j")) s.j = get_int(arr[k]["j"], join(path, "j"));
      if (arr[k].contains("a")) s.a = parse_axis(arr[k]["a"], join(path, "a"));
      if (arr[k].contains("b")) s.b = parse_axis(arr[k]["b"], join(path, "b"));
      c.correlations.push_back(s);
    }
  }
  if (j.contains("concurrence_pairs")) {
    const json& arr = j["concurrence_pairs"];
    if (!arr.is_array()) fail(K::constraint, "concurrence_pairs", "expected an array");
    for (std::size_t k = 0; k < arr.size(); ++k) {
      const std::string path = "concurrence_pairs[" + std::to_string(k) + "]";
      if (!arr[k].is_array() || arr[k].size() != 2) fail(K::constraint, path, "expected [i, j]");
      c.concurrence_pairs.emplace_back(get_int(arr[k][0], path), get_int(arr[k][1], path));
    }
  }
  if (j.contains("deviation_window")) {
    const json& w = j["deviation_window"];
    if (!w.is_array() || w.size() != 2) {
      fail(K::constraint, "deviation_window", "expected [start, end]");
    }
    c.deviation_window = {get_number(w[0], "deviation_window[0]"),
                          get_number(w[1], "deviation_window[1]")};
  }
  if (j.contains("variants")) {
    const json& arr = j["variants"];
    if (!arr.is_array()) fail(K::constraint, "variants", "expected an array");
    for (std::size_t k = 0; k < arr.size(); ++k) {
      c.variants.push_back(parse_variant(arr[k], "variants[" + std::to_string(k) + "]"));
    }
  }
  if (j.contains("max_sites")) c.max_sites = get_int(j["max_sites"], "max_sites");
  validate_config(c);
  return c;
}

ExperimentConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const int line = line_of(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ConfigError(K::syntax, "line " + std::to_string(line),
                      "syntax error at line " + std::to_string(line) + ": " + e.what());
  }
  return parse_config_json(j);
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["kind"] = std::string(to_string(c.kind));
  j["name"] = c.name;

  json model;
  model["n_sites"] = c.model.n_sites;
  model["b_field"] = c.model.b_field;
  model["couplings"] = c.model.couplings;
  model["thermal"] = {{"gamma_total", c.model.thermal.gamma_total},
                      {"n_b", c.model.thermal.n_b},
                      {"g_ratio", c.model.thermal.g_ratio},
                      {"all_axes", c.model.thermal.all_axes}};
  if (c.model.on_site_rates) model["on_site_rates"] = rates_to_json(*c.model.on_site_rates);
  if (c.model.neighbour_rates) model["neighbour_rates"] = rates_to_json(*c.model.neighbour_rates);
  j["model"] = model;

  json mf;
  mf["damping"] = c.meanfield.damping == DampingMode::fixed_d ? "fixed_d" : "ll_alpha";
  mf["alpha"] = c.meanfield.alpha;
  if (c.meanfield.d_vector) mf["d_vector"] = *c.meanfield.d_vector;
  mf["mode"] = c.meanfield.mode == MeanFieldMode::collective ? "collective" : "per_site";
  j["meanfield"] = mf;

  j["solver"] = std::string(to_string(c.solver));
  j["t_end"] = c.t_end;
  j["dt"] = c.dt;
  j["sample_every"] = c.sample_every;
  j["bz_grid"] = c.bz_grid;
  switch (c.initial_state.kind) {
    case InitialState::Kind::all_up_x: j["initial_state"] = "all_up_x"; break;
    case InitialState::Kind::all_up_z: j["initial_state"] = "all_up_z"; break;
    case InitialState::Kind::tilted:
      j["initial_state"] = {
          {"tilted", {{"theta", c.initial_state.theta}, {"phi", c.initial_state.phi}}}};
      break;
  }
  j["output_path"] = c.output_path;
  j["seed"] = c.seed;
  j["correlations"] = json::array();
  for (const CorrelationSpec& s : c.correlations) {
    j["correlations"].push_back(
        {{"i", s.i}, {"j", s.j}, {"a", std::string(to_string(s.a))}, {"b", std::string(to_string(s.b))}});
  }
  j["concurrence_pairs"] = json::array();
  for (const auto& [a, b] : c.concurrence_pairs) j["concurrence_pairs"].push_back({a, b});
  j["deviation_window"] = {c.deviation_window.first, c.deviation_window.second};
  j["variants"] = json::array();
  for (const Variant& v : c.variants) {
    json jv;
    jv["label"] = v.label;
    if (v.n_sites) jv["n_sites"] = *v.n_sites;
    if (v.b_field) jv["b_field"] = *v.b_field;
    if (v.couplings) jv["couplings"] = *v.couplings;
    if (v.gamma_total) jv["gamma_total"] = *v.gamma_total;
    if (v.all_axes) jv["all_axes"] = *v.all_axes;
    j["variants"].push_back(jv);
  }
  j["max_sites"] = c.max_sites;
  return j;
}

std::string dump_config(const ExperimentConfig& config) { return to_json(config).dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Presets

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out;
  for (int k = 0; k < n; ++k) out.push_back(k == n - 1 ? b : a + (b - a) * k / (n - 1));
  return out;
}

Variant variant_couplings(std::string label, Triple v) {
  Variant out;
  out.label = std::move(label);
  out.couplings = v;
  return out;
}

ExperimentConfig fig2_dynamics(std::string name, double vz, Triple b, double phi) {
  ExperimentConfig c;
  c.kind = ExperimentKind::dynamics;
  c.name = std::move(name);
  c.model.n_sites = 500;
  c.model.b_field = b;
  c.model.couplings = {0.0, 0.0, vz};
  c.meanfield.damping = DampingMode::ll_alpha;
  c.meanfield.alpha = 0.5;
  c.meanfield.mode = MeanFieldMode::collective;
  c.initial_state = {InitialState::Kind::tilted, std::numbers::pi / 40.0, phi};
  c.t_end = 100.0;
  c.dt = 1e-3;
  c.sample_every = 0.1;
  return c;
}

ExperimentConfig fig2_hysteresis(std::string name, double bxy) {
  ExperimentConfig c = fig2_dynamics(std::move(name), 0.5, {bxy, bxy, 0.0}, 0.0);
  c.kind = ExperimentKind::hysteresis;
  c.bz_grid = linspace(-2.0, 2.0, 81);
  c.variants = {variant_couplings("Vz0.5", {0.0, 0.0, 0.5}),
                variant_couplings("Vz1", {0.0, 0.0, 1.0})};
  return c;
}

// Three spins along x, B = (0.25, 0.25, -0.5), per-site mean field with the
// neighbour-rate damping.
ExperimentConfig chain3(std::string name, ExperimentKind kind, Triple v, double gamma,
                        bool all_axes) {
  ExperimentConfig c;
  c.kind = kind;
  c.name = std::move(name);
  c.model.n_sites = 3;
  c.model.b_field = {0.25, 0.25, -0.5};
  c.model.couplings = v;
  c.model.thermal.gamma_total = gamma;
  c.model.thermal.all_axes = all_axes;
  c.meanfield.damping = DampingMode::fixed_d;
  c.meanfield.mode = MeanFieldMode::per_site;
  c.initial_state = {InitialState::Kind::all_up_x, 0.0, 0.0};
  c.t_end = 100.0;
  c.dt = 0.01;
  c.sample_every = 0.1;
  return c;
}

Variant gamma_variant(std::string label, double gamma) {
  Variant v;
  v.label = std::move(label);
  v.gamma_total = gamma;
  return v;
}

std::vector<PresetInfo> build_presets() {
  std::vector<PresetInfo> out;
  const double pi = std::numbers::pi;

  out.push_back({"fig2a_caption",
                 "mean-field dynamics, N=500 collective, B=(0,0,-2), V=(0,0,1), alpha=0.5, "
                 "Gamma=0, theta0=pi/40, phi0=pi/4",
                 fig2_dynamics("fig2a_caption", 1.0, {0.0, 0.0, -2.0}, pi / 4.0)});
  out.push_back({"fig2a_text",
                 "mean-field dynamics, N=500 collective, B=(0,0,-2), V=(0,0,0.5), alpha=0.5, "
                 "Gamma=0, theta0=pi/40, phi0=pi/4",
                 fig2_dynamics("fig2a_text", 0.5, {0.0, 0.0, -2.0}, pi / 4.0)});
  out.push_back({"fig2b",
                 "mean-field hysteresis, B_xy=0, V=(0,0,Vz) with Vz in {0.5,1}, alpha=0.5, "
                 "Gamma=0, B_z in [-2,2] (81 points)",
                 fig2_hysteresis("fig2b", 0.0)});
  out.push_back({"fig2c",
                 "mean-field dynamics, B=(1,1,-2), V=(0,0,0.5), alpha=0.5, Gamma=0, "
                 "theta0=pi/40, phi0=0",
                 fig2_dynamics("fig2c", 0.5, {1.0, 1.0, -2.0}, 0.0)});
  out.push_back({"fig2d",
                 "mean-field hysteresis, B_xy=1, V=(0,0,Vz) with Vz in {0.5,1}, alpha=0.5, "
                 "Gamma=0, B_z in [-2,2] (81 points)",
                 fig2_hysteresis("fig2d", 1.0)});

  out.push_back({"fig3ab",
                 "mean-field vs exact dynamics, N=3, B=(0.25,0.25,-0.5), V=(0.5,0.1,0.1), "
                 "Gamma=0.1, g_z=gamma_z/10, spins along x",
                 chain3("fig3ab", ExperimentKind::compare, {0.5, 0.1, 0.1}, 0.1, false)});
  {
    ExperimentConfig c = chain3("fig3cd", ExperimentKind::compare, {1.0, 2.0, 1.0}, 0.1, false);
    c.model.b_field = {1.0, 1.0, 0.0};
    c.bz_grid = linspace(-4.0, 4.0, 81);
    Variant n3, n4;
    n3.label = "N3";
    n3.n_sites = 3;
    n4.label = "N4";
    n4.n_sites = 4;
    c.variants = {n3, n4};
    out.push_back({"fig3cd",
                   "mean-field vs exact steady state over B_z in [-4,4] (81 points), "
                   "B_xy=1, V=(1,2,1), Gamma=0.1, N in {3,4}",
                   c});
  }
  {
    ExperimentConfig c = chain3("fig4", ExperimentKind::compare, {0.1, 0.1, 0.1}, 0.0, false);
    c.t_end = 1000.0;
    c.sample_every = 0.1;
    c.variants = {variant_couplings("D0", {0.1, 0.1, 0.1}),
                  variant_couplings("D0.1", {0.2, 0.1, 0.1}),
                  variant_couplings("D0.2", {0.3, 0.1, 0.1}),
                  variant_couplings("D0.4", {0.5, 0.1, 0.1})};
    out.push_back({"fig4",
                   "time-averaged mean-field deviation, N=3, V=0.1, V_x=V+Delta with Delta in "
                   "{0,0.1,0.2,0.4}, B=(0.25,0.25,-0.5), no damping, window (0,1000)",
                   c});
  }

  const std::vector<Variant> gamma_sweep = {gamma_variant("G0.05", 0.05),
                                            gamma_variant("G0.1", 0.1),
                                            gamma_variant("G0.2", 0.2)};
  const std::vector<Variant> vx_sweep = {variant_couplings("Vx0.5", {0.5, 0.1, 0.1}),
                                         variant_couplings("Vx1", {1.0, 0.1, 0.1})};
  const CorrelationSpec cxx12{1, 2, Axis::x, Axis::x};
  {
    ExperimentConfig c = chain3("fig5a", ExperimentKind::compare, {0.5, 0.1, 0.1}, 0.1, true);
    c.variants = gamma_sweep;
    out.push_back({"fig5a",
                   "mean-field vs exact dynamics, N=3, V=(0.5,0.1,0.1), Gamma in "
                   "{0.05,0.1,0.2}, g_alpha=Gamma/10 on all axes",
                   c});
    c.name = "fig5b";
    c.kind = ExperimentKind::correlations;
    c.correlations = {cxx12};
    out.push_back({"fig5b",
                   "two-point correlation Cxx12, N=3, V=(0.5,0.1,0.1), Gamma in "
                   "{0.05,0.1,0.2}, g_alpha=Gamma/10 on all axes",
                   c});
  }
  {
    ExperimentConfig c = chain3("fig5c", ExperimentKind::compare, {0.5, 0.1, 0.1}, 0.1, true);
    c.variants = vx_sweep;
    out.push_back({"fig5c",
                   "mean-field vs exact dynamics, N=3, V_yz=0.1, V_x in {0.5,1}, Gamma=0.1, "
                   "g_alpha=Gamma/10 on all axes",
                   c});
    c.name = "fig5d";
    c.kind = ExperimentKind::correlations;
    c.correlations = {cxx12};
    out.push_back({"fig5d",
                   "two-point correlation Cxx12, N=3, V_yz=0.1, V_x in {0.5,1}, Gamma=0.1, "
                   "g_alpha=Gamma/10 on all axes",
                   c});
  }
  {
    ExperimentConfig c =
        chain3("fig6", ExperimentKind::correlations, {1.0, 0.1, 0.1}, 0.1, true);
    c.concurrence_pairs = {{1, 2}};
    c.variants = vx_sweep;
    out.push_back({"fig6",
                   "concurrence C12, N=3, V_yz=0.1, V_x in {0.5,1}, B=(0.25,0.25,-0.5), "
                   "Gamma=0.1, g_alpha=Gamma/10 on all axes",
                   c});
  }
  for (PresetInfo& p : out) validate_config(p.config);
  return out;
}

}  // namespace

const std::vector<PresetInfo>& list_presets() {
  static const std::vector<PresetInfo> presets = build_presets();
  return presets;
}

ExperimentConfig expand_preset(std::string_view id) {
  for (const PresetInfo& p : list_presets()) {
    if (p.id == id) return p.config;
  }
  fail(K::constraint, "preset", "unknown preset \"" + std::string(id) + "\"");
}

// ---------------------------------------------------------------------------
// Tables

std::size_t ResultTable::column(std::string_view name) const {
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (header[k] == name) return k;
  }
  throw std::out_of_range("no column named " + std::string(name));
}

std::vector<double> ResultTable::column_values(std::string_view name) const {
  std::size_t k = column(name);
  if (!row_labels.empty()) {
    if (k == 0) throw std::out_of_range("column " + std::string(name) + " holds text");
    --k;
  }
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[k]);
  return out;
}

namespace {

std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string ResultTable::to_csv() const {
  std::string out;
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (k > 0) out += ',';
    out += header[k];
  }
  out += '\n';
  for (std::size_t r = 0; r < rows.size(); ++r) {
    bool first = true;
    if (!row_labels.empty()) {
      out += row_labels[r];
      first = false;
    }
    for (double v : rows[r]) {
      if (!first) out += ',';
      out += format_number(v);
      first = false;
    }
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Orchestration

namespace {

json vec_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

MagnetizationState initial_mf(const ExperimentConfig& c, const MeanFieldConfig& mf) {
  const Vec3 dir = c.initial_state.direction();
  return mf.mode == MeanFieldMode::collective ? MagnetizationState::collective(dir)
                                              : MagnetizationState::uniform(dir, mf.model.n_sites);
}

ComplexMatrix initial_rho(const ExperimentConfig& c, int n_sites) {
  const std::vector<Vec3> f(static_cast<std::size_t>(n_sites), c.initial_state.direction());
  return product_state(f);
}

std::vector<double> sample_times(double t_end, double dt, int stride) {
  const auto steps = static_cast<long long>(std::ceil(t_end / dt - 1e-9));
  std::vector<double> out{0.0};
  for (long long k = 1; k <= steps; ++k) {
    if (k % stride == 0 || k == steps) out.push_back(k == steps ? t_end : static_cast<double>(k) * dt);
  }
  return out;
}

struct ExactRun {
  DensityTrajectory traj;
  std::string solver_path;
  std::optional<double> condition_number;
};

ExactRun evolve_exact(const ExperimentConfig& c, const Liouvillian& l, const ComplexMatrix& rho0) {
  ExactRun run;
  if (c.solver != SolverChoice::rk4) {
    try {
      const LiouvillianSpectrum spec = spectral_decompose(l);
      const std::vector<double> times = sample_times(c.t_end, c.dt, c.sample_stride());
      run.traj = evolve_spectral(spec, rho0, times);
      run.solver_path = "spectral";
      run.condition_number = spec.condition_number;
      return run;
    } catch (const SpectralUnreliableError& e) {
      if (c.solver == SolverChoice::spectral) throw;
      run.condition_number = e.condition_number();
      run.solver_path = "rk4 (spectral refused)";
    }
  } else {
    run.solver_path = "rk4";
  }
  run.traj = evolve_rk4(l, rho0, c.t_end, c.dt, c.sample_stride());
  return run;
}

ComplexMatrix exact_steady_state(const ExperimentConfig& c, const Liouvillian& l,
                                 std::string& path) {
  if (c.solver != SolverChoice::rk4) {
    try {
      const LiouvillianSpectrum spec = spectral_decompose(l);
      path = "spectral";
      return steady_state_exact(spec);
    } catch (const SpectralUnreliableError&) {
      if (c.solver == SolverChoice::spectral) throw;
    }
  }
  path = "linear";
  return steady_state_linear(l);
}

json exact_diagnostics(const ExactRun& run) {
  json j;
  j["solver_path"] = run.solver_path;
  j["condition_number"] = run.condition_number ? json(*run.condition_number) : json(nullptr);
  j["max_trace_deviation"] = run.traj.max_trace_deviation;
  j["max_hermiticity_error"] = run.traj.max_hermiticity_error;
  j["min_eigenvalue"] = run.traj.min_eigenvalue;
  j["flagged"] = run.traj.flagged;
  return j;
}

double rhs_residual(const MagnetizationState& s, const MeanFieldConfig& mf) {
  return mf_rhs(s, mf).max_abs_component();
}

Liouvillian checked_liouvillian(const ExperimentConfig& c, const ChainModel& m) {
  return build_liouvillian(m, c.max_sites);
}

void run_dynamics(const ExperimentConfig& c, const Variant* v, ResultTable& t, json& s) {
  const MeanFieldConfig mf = c.meanfield_config(v);
  const auto traj = integrate(mf, initial_mf(c, mf), c.t_end, c.dt, c.sample_stride());
  t.header = {"t", "Mx", "My", "Mz", "Mnorm"};
  double norm0 = traj.states.front().mean().norm();
  double drift = 0.0;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const Vec3 m = traj.states[k].mean();
    t.rows.push_back({traj.times[k], m[0], m[1], m[2], m.norm()});
    drift = std::max(drift, std::abs(m.norm() - norm0));
  }
  s["solver_path"] = "meanfield_rk4";
  s["terminal"] = vec_json(traj.states.back().mean());
  s["steady_state_residual"] = rhs_residual(traj.states.back(), mf);
  s["max_norm_drift"] = drift;
}

void run_hysteresis(const ExperimentConfig& c, const Variant* v, ResultTable& t, json& s) {
  const MeanFieldConfig mf = c.meanfield_config(v);
  HysteresisOptions opts;
  if (c.initial_state.kind == InitialState::Kind::tilted) {
    opts.theta0 = c.initial_state.theta;
    opts.phi0 = c.initial_state.phi;
  }
  const HysteresisCurve curve = hysteresis_sweep(mf, c.bz_grid, opts);
  t.header = {"branch", "Bz", "Mx", "My", "Mz"};
  for (const auto& [branch, samples] :
       {std::pair{"up", &curve.branch_up}, std::pair{"down", &curve.branch_down}}) {
    for (const HysteresisSample& p : *samples) {
      t.row_labels.emplace_back(branch);
      t.rows.push_back({p.bz, p.m[0], p.m[1], p.m[2]});
    }
  }
  auto opt = [](const std::optional<double>& x) { return x ? json(*x) : json(nullptr); };
  s["solver_path"] = "meanfield_steady_state";
  s["switching_up"] = opt(curve.switching_up);
  s["switching_down"] = opt(curve.switching_down);
  s["coercive_field"] = curve.coercive_field;
  s["grid_spacing"] = std::abs(c.bz_grid[1] - c.bz_grid[0]);
}

void run_compare_dynamics(const ExperimentConfig& c, const Variant* v, ResultTable& t, json& s) {
  const MeanFieldConfig mf = c.meanfield_config(v);
  const ChainModel& model = mf.model;
  const Liouvillian l = checked_liouvillian(c, model);
  const auto mf_traj = integrate(mf, initial_mf(c, mf), c.t_end, c.dt, c.sample_stride());
  const ExactRun exact = evolve_exact(c, l, initial_rho(c, model.n_sites));
  if (exact.traj.times.size() != mf_traj.times.size()) {
    throw std::logic_error("compare: sample grids differ");
  }
  std::vector<Vec3> m_mf, m_ex;
  for (std::size_t k = 0; k < mf_traj.times.size(); ++k) {
    m_mf.push_back(mf_traj.states[k].mean());
    m_ex.push_back(magnetization(exact.traj.states[k], model.n_sites));
  }
  const DeviationSeries dev = deviation_series(mf_traj.times, m_mf, m_ex, c.deviation_window);
  t.header = {"t", "Mx_mf", "My_mf", "Mz_mf", "Mx_exact", "My_exact", "Mz_exact", "deviation"};
  for (std::size_t k = 0; k < m_mf.size(); ++k) {
    t.rows.push_back({mf_traj.times[k], m_mf[k][0], m_mf[k][1], m_mf[k][2], m_ex[k][0],
                      m_ex[k][1], m_ex[k][2], dev.values[k]});
  }
  s.update(exact_diagnostics(exact));
  s["deviation_time_average"] = dev.time_average;
  s["deviation_max"] = *std::max_element(dev.values.begin(), dev.values.end());
  s["terminal_mf"] = vec_json(m_mf.back());
  s["terminal_exact"] = vec_json(m_ex.back());
  s["steady_state_residual"] = rhs_residual(mf_traj.states.back(), mf);
  s["complete_positivity_warnings"] = complete_positivity_warnings(model);
}

void run_compare_sweep(const ExperimentConfig& c, const Variant* v, ResultTable& t, json& s) {
  t.header = {"Bz", "Mx_mf", "Mz_mf", "Mx_exact", "Mz_exact"};
  double worst_residual = 0.0;
  int kicks = 0;
  std::string path;
  for (double bz : c.bz_grid) {
    MeanFieldConfig mf = c.meanfield_config(v);
    mf.model.b_field[2] = bz;
    const SteadyStateResult ss = steady_state(mf, initial_mf(c, mf));
    worst_residual = std::max(worst_residual, ss.residual);
    kicks += ss.kicks;
    const Liouvillian l = checked_liouvillian(c, mf.model);
    const ComplexMatrix rho = exact_steady_state(c, l, path);
    const Vec3 m_mf = ss.state.mean();
    const Vec3 m_ex = magnetization(rho, mf.model.n_sites);
    t.rows.push_back({bz, m_mf[0], m_mf[2], m_ex[0], m_ex[2]});
  }
  s["solver_path"] = path;
  s["steady_state_residual"] = worst_residual;
  s["stability_kicks"] = kicks;
}

void run_correlations(const ExperimentConfig& c, const Variant* v, ResultTable& t, json& s) {
  const ChainModel model = c.chain_model(v);
  const int n = model.n_sites;
  const Liouvillian l = checked_liouvillian(c, model);
  const ExactRun exact = evolve_exact(c, l, initial_rho(c, n));
  const ComplexMatrix rho_ss = steady_state_linear(l);

  t.header = {"t"};
  for (const CorrelationSpec& cs : c.correlations) t.header.push_back(cs.column());
  for (const auto& [i, j] : c.concurrence_pairs) {
    t.header.push_back("C" + std::to_string(i) + std::to_string(j));
  }
  auto evaluate = [&](const ComplexMatrix& rho) {
    std::vector<double> row;
    for (const CorrelationSpec& cs : c.correlations) {
      row.push_back(two_point_correlation(rho, n, cs.i, cs.j, cs.a, cs.b));
    }
    for (const auto& [i, j] : c.concurrence_pairs) row.push_back(concurrence(rho, n, i, j));
    return row;
  };
  for (std::size_t k = 0; k < exact.traj.times.size(); ++k) {
    std::vector<double> row{exact.traj.times[k]};
    const std::vector<double> vals = evaluate(exact.traj.states[k]);
    row.insert(row.end(), vals.begin(), vals.end());
    t.rows.push_back(std::move(row));
  }
  const std::vector<double> steady = evaluate(rho_ss);
  json cols = json::object();
  for (std::size_t col = 1; col < t.header.size(); ++col) {
    std::size_t arg = 0;
    for (std::size_t k = 0; k < t.rows.size(); ++k) {
      if (t.rows[k][col] > t.rows[arg][col]) arg = k;
    }
    cols[t.header[col]] = {{"initial", t.rows.front()[col]},
                           {"max", t.rows[arg][col]},
                           {"t_at_max", t.rows[arg][0]},
                           {"terminal", t.rows.back()[col]},
                           {"steady_state", steady[col - 1]}};
  }
  s.update(exact_diagnostics(exact));
  s["columns"] = cols;
  s["complete_positivity_warnings"] = complete_positivity_warnings(model);
}

void run_spectrum(const ExperimentConfig& c, const Variant* v, ResultTable& t, json& s) {
  const ChainModel model = c.chain_model(v);
  const Liouvillian l = checked_liouvillian(c, model);
  const LiouvillianSpectrum spec = spectral_decompose(l);
  t.header = {"k", "re", "im"};
  double max_re = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < spec.eigenvalues.size(); ++k) {
    const Complex lam = spec.eigenvalues[k];
    t.rows.push_back({static_cast<double>(k), lam.real(), lam.imag()});
    if (k > 0) max_re = std::max(max_re, lam.real());
  }
  s["solver_path"] = "spectral";
  s["condition_number"] = spec.condition_number;
  s["zero_modes"] = spec.zero_mode_count();
  s["biorthonormality_residual"] = spec.biorthonormality_residual();
  s["max_real_part_nonstationary"] = spec.eigenvalues.size() > 1 ? json(max_re) : json(nullptr);
  s["complete_positivity_warnings"] = complete_positivity_warnings(model);
}

std::pair<ResultTable, json> run_variant(const ExperimentConfig& c, const Variant* v) {
  ResultTable t;
  json s = json::object();
  t.label = v != nullptr ? v->label : "";
  s["label"] = t.label;
  switch (c.kind) {
    case ExperimentKind::dynamics: run_dynamics(c, v, t, s); break;
    case ExperimentKind::hysteresis: run_hysteresis(c, v, t, s); break;
    case ExperimentKind::compare:
      if (c.bz_grid.empty()) {
        run_compare_dynamics(c, v, t, s);
      } else {
        run_compare_sweep(c, v, t, s);
      }
      break;
    case ExperimentKind::correlations: run_correlations(c, v, t, s); break;
    case ExperimentKind::spectrum: run_spectrum(c, v, t, s); break;
  }
  s["rows"] = t.rows.size();
  return {std::move(t), std::move(s)};
}

}  // namespace

ExperimentResult compute_experiment(const ExperimentConfig& config) {
  validate_config(config);
  std::vector<const Variant*> runs;
  if (config.variants.empty()) runs.push_back(nullptr);
  for (const Variant& v : config.variants) runs.push_back(&v);

  std::vector<std::future<std::pair<ResultTable, json>>> futures;
  const auto policy = runs.size() > 1 ? std::launch::async : std::launch::deferred;
  for (const Variant* v : runs) {
    futures.push_back(std::async(policy, [&config, v] { return run_variant(config, v); }));
  }
  ExperimentResult result;
  result.summary["name"] = config.name;
  result.summary["kind"] = std::string(to_string(config.kind));
  result.summary["variants"] = json::array();
  // Every future is drained before the first error is rethrown.
  std::exception_ptr first_error;
  for (auto& f : futures) {
    try {
      auto [table, summary] = f.get();
      result.tables.push_back(std::move(table));
      result.summary["variants"].push_back(std::move(summary));
    } catch (...) {
      if (!first_error) first_error = std::current_exception();
    }
  }
  if (first_error) std::rethrow_exception(first_error);
  return result;
}

std::vector<std::filesystem::path> output_paths(const ExperimentConfig& config,
                                                const std::filesystem::path& out_dir) {
  const std::filesystem::path base =
      out_dir / (config.output_path.empty() ? config.name + ".csv" : config.output_path);
  if (config.variants.empty()) return {base};
  std::vector<std::filesystem::path> out;
  for (const Variant& v : config.variants) {
    std::filesystem::path p = base;
    p.replace_filename(base.stem().string() + "_" + v.label + base.extension().string());
    out.push_back(p);
  }
  return out;
}

std::filesystem::path summary_path(const ExperimentConfig& config,
                                   const std::filesystem::path& out_dir) {
  const std::filesystem::path base =
      out_dir / (config.output_path.empty() ? config.name + ".csv" : config.output_path);
  std::filesystem::path p = base;
  p.replace_filename(base.stem().string() + ".summary.json");
  return p;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << content;
  out.close();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

json run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentResult result = compute_experiment(config);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const auto csv_paths = output_paths(config, out_dir);
  const auto json_path = summary_path(config, out_dir);
  json files = json::array();
  for (const auto& p : csv_paths) files.push_back(p.filename().string());
  result.summary["files"] = files;
  result.summary["wall_time_s"] = wall;
  result.summary["config"] = to_json(config);

  std::vector<std::filesystem::path> written;
  try {
    if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
    for (std::size_t k = 0; k < csv_paths.size(); ++k) {
      if (csv_paths[k].has_parent_path()) std::filesystem::create_directories(csv_paths[k].parent_path());
      written.push_back(csv_paths[k]);
      write_file(csv_paths[k], result.tables[k].to_csv());
    }
    written.push_back(json_path);
    write_file(json_path, result.summary.dump(2) + "\n");
  } catch (...) {
    std::error_code ec;
    for (const auto& p : written) std::filesystem::remove(p, ec);
    throw;
  }
  return result.summary;
}

}  // namespace spinchain
