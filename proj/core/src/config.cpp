#include "nnls/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "nnls/error.hpp"
#include "nnls/grid.hpp"

namespace nnls {

using nlohmann::json;

const char* to_string(PotentialKind k) {
  switch (k) {
    case PotentialKind::Paper:
      return "paper";
    case PotentialKind::MultiWell:
      return "multiwell";
    case PotentialKind::Constant:
      return "constant";
  }
  return "?";
}

const char* to_string(RegionShape s) { return s == RegionShape::Ball ? "ball" : "box"; }

namespace {

void reject_unknown(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [k, v] : j.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* key) { return k == key; }))
      throw ConfigError("unknown key '" + k + "' in " + where);
  }
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

PotentialKind parse_kind(const std::string& s) {
  if (s == "paper") return PotentialKind::Paper;
  if (s == "multiwell") return PotentialKind::MultiWell;
  if (s == "constant") return PotentialKind::Constant;
  throw ConfigError("unknown potential kind '" + s + "'");
}

RegionShape parse_shape(const std::string& s) {
  if (s == "ball") return RegionShape::Ball;
  if (s == "box") return RegionShape::Box;
  throw ConfigError("unknown region shape '" + s + "'");
}

WellGeometry parse_well(const json& j, int index) {
  const std::string where = "potential.wells[" + std::to_string(index) + "]";
  reject_unknown(j, where, {"center", "shape", "inner", "middle", "outer"});
  WellGeometry w;
  std::vector<double> c;
  read(j, "center", c, where);
  if (c.size() > 3) throw ConfigError(where + ".center has more than 3 coordinates");
  for (std::size_t a = 0; a < c.size(); ++a) w.center[a] = c[a];
  std::string shape = "ball";
  read(j, "shape", shape, where);
  w.shape = parse_shape(shape);
  read(j, "inner", w.inner, where);
  read(j, "middle", w.middle, where);
  read(j, "outer", w.outer, where);
  return w;
}

}  // namespace

RunConfig parse_config(const json& j) {
  reject_unknown(j, "config", {"grid", "potential", "nonlinearity", "epsilon", "lambdas", "groundstate", "solver",
                               "hypotheses", "output", "seed", "workers"});
  RunConfig c;
  if (j.contains("grid")) {
    const json& g = j["grid"];
    reject_unknown(g, "grid", {"dim", "half_extent", "n"});
    read(g, "dim", c.grid.dim, "grid");
    read(g, "half_extent", c.grid.half_extent, "grid");
    read(g, "n", c.grid.n, "grid");
  }
  if (j.contains("potential")) {
    const json& p = j["potential"];
    reject_unknown(p, "potential", {"kind", "lambda", "wells"});
    std::string kind = "paper";
    read(p, "kind", kind, "potential");
    c.potential.kind = parse_kind(kind);
    read(p, "lambda", c.potential.lambda, "potential");
    if (p.contains("wells")) {
      if (!p["wells"].is_array()) throw ConfigError("potential.wells must be an array");
      c.potential.wells.clear();
      int i = 0;
      for (const auto& w : p["wells"]) c.potential.wells.push_back(parse_well(w, i++));
    }
  }
  if (j.contains("nonlinearity")) {
    const json& n = j["nonlinearity"];
    reject_unknown(n, "nonlinearity",
                   {"p", "q", "a", "sigma", "c_u", "c_v", "c_cross", "c_bilinear", "mollify"});
    auto& nl = c.nonlinearity;
    read(n, "p", nl.p, "nonlinearity");
    read(n, "q", nl.q, "nonlinearity");
    read(n, "a", nl.a, "nonlinearity");
    read(n, "sigma", nl.sigma, "nonlinearity");
    read(n, "c_u", nl.c_u, "nonlinearity");
    read(n, "c_v", nl.c_v, "nonlinearity");
    read(n, "c_cross", nl.c_cross, "nonlinearity");
    read(n, "c_bilinear", nl.c_bilinear, "nonlinearity");
    read(n, "mollify", nl.mollify, "nonlinearity");
  }
  read(j, "epsilon", c.epsilon, "config");
  read(j, "lambdas", c.lambdas, "config");
  if (j.contains("groundstate")) {
    const json& g = j["groundstate"];
    reject_unknown(g, "groundstate", {"half_extent", "n", "starts"});
    read(g, "half_extent", c.groundstate.half_extent, "groundstate");
    read(g, "n", c.groundstate.n, "groundstate");
    read(g, "starts", c.groundstate.starts, "groundstate");
  }
  if (j.contains("solver")) {
    const json& s = j["solver"];
    reject_unknown(s, "solver", {"tol", "max_iters", "reduction_tol", "scale_tol", "max_scale_evaluations"});
    read(s, "tol", c.solver.tol, "solver");
    read(s, "max_iters", c.solver.max_iters, "solver");
    read(s, "reduction_tol", c.solver.reduction_tol, "solver");
    read(s, "scale_tol", c.solver.scale_tol, "solver");
    read(s, "max_scale_evaluations", c.solver.max_scale_evaluations, "solver");
  }
  if (j.contains("hypotheses")) {
    const json& h = j["hypotheses"];
    reject_unknown(h, "hypotheses", {"samples", "s_min", "s_max"});
    read(h, "samples", c.hypotheses.samples, "hypotheses");
    read(h, "s_min", c.hypotheses.s_min, "hypotheses");
    read(h, "s_max", c.hypotheses.s_max, "hypotheses");
  }
  read(j, "output", c.output, "config");
  read(j, "seed", c.seed, "config");
  read(j, "workers", c.workers, "config");
  return c;
}

RunConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON config: ") + e.what());
  }
  return parse_config(j);
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config_text(ss.str());
}

json config_to_json(const RunConfig& c) {
  json wells = json::array();
  for (const auto& w : c.potential.wells) {
    std::vector<double> center(w.center.begin(), w.center.begin() + std::clamp(c.grid.dim, 1, 3));
    wells.push_back({{"center", center},
                     {"shape", to_string(w.shape)},
                     {"inner", w.inner},
                     {"middle", w.middle},
                     {"outer", w.outer}});
  }
  const auto& nl = c.nonlinearity;
  return {
      {"grid", {{"dim", c.grid.dim}, {"half_extent", c.grid.half_extent}, {"n", c.grid.n}}},
      {"potential", {{"kind", to_string(c.potential.kind)}, {"lambda", c.potential.lambda}, {"wells", wells}}},
      {"nonlinearity",
       {{"p", nl.p},
        {"q", nl.q},
        {"a", nl.a},
        {"sigma", nl.sigma},
        {"c_u", nl.c_u},
        {"c_v", nl.c_v},
        {"c_cross", nl.c_cross},
        {"c_bilinear", nl.c_bilinear},
        {"mollify", nl.mollify}}},
      {"epsilon", c.epsilon},
      {"lambdas", c.lambdas},
      {"groundstate",
       {{"half_extent", c.groundstate.half_extent}, {"n", c.groundstate.n}, {"starts", c.groundstate.starts}}},
      {"solver",
       {{"tol", c.solver.tol},
        {"max_iters", c.solver.max_iters},
        {"reduction_tol", c.solver.reduction_tol},
        {"scale_tol", c.solver.scale_tol},
        {"max_scale_evaluations", c.solver.max_scale_evaluations}}},
      {"hypotheses",
       {{"samples", c.hypotheses.samples}, {"s_min", c.hypotheses.s_min}, {"s_max", c.hypotheses.s_max}}},
      {"output", c.output},
      {"seed", c.seed},
      {"workers", c.workers},
  };
}

void validate_config(const RunConfig& c, ConfigUse use) {
  c.nonlinearity.validate();
  build_grid(c.grid.dim, c.grid.half_extent, c.grid.n);
  if (c.workers < 1) throw ConfigError("workers must be at least 1");
  if (!(c.solver.tol > 0.0 && c.solver.reduction_tol > 0.0 && c.solver.scale_tol > 0.0))
    throw ConfigError("solver tolerances must be positive");
  if (c.solver.max_iters < 1 || c.solver.max_scale_evaluations < 1)
    throw ConfigError("solver iteration caps must be positive");
  if (c.hypotheses.samples < 100) throw ConfigError("hypotheses.samples must be at least 100");
  if (c.potential.kind != PotentialKind::Constant && c.potential.wells.empty())
    throw ConfigError("potential needs at least one well");

  if (use == ConfigUse::GroundState || use == ConfigUse::Solve || use == ConfigUse::Sweep) {
    build_grid(c.grid.dim, c.groundstate.half_extent, c.groundstate.n);
    if (c.groundstate.starts < 1) throw ConfigError("groundstate.starts must be at least 1");
  }
  if (use == ConfigUse::GroundState) {
    if (c.lambdas.empty()) throw ConfigError("lambda list is empty");
    std::set<double> seen;
    for (double l : c.lambdas) {
      if (!(l > 0.0)) throw ConfigError("lambda values must be positive");
      if (!seen.insert(l).second) throw ConfigError("repeated lambda " + std::to_string(l));
    }
  }
  if (use == ConfigUse::Solve || use == ConfigUse::Sweep) {
    if (c.potential.kind == PotentialKind::Constant)
      throw ConfigError("solve and sweep need a potential with wells (kind paper or multiwell)");
    if (c.epsilon.empty()) throw ConfigError("epsilon list is empty");
    for (double e : c.epsilon)
      if (!(e > 0.0)) throw ConfigError("epsilon values must be positive");
    if (use == ConfigUse::Sweep)
      for (std::size_t i = 1; i < c.epsilon.size(); ++i)
        if (!(c.epsilon[i] < c.epsilon[i - 1])) throw ConfigError("epsilon list must be strictly decreasing");
  }
}

}  // namespace nnls
