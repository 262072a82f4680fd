#include "nnls/report.hpp"

namespace nnls {

using nlohmann::json;

json to_json(const Point& x, int dim) { return std::vector<double>(x.begin(), x.begin() + dim); }

json to_json(const HypothesisReport& r) {
  json records = json::array();
  for (const auto& h : r.records)
    records.push_back({{"name", h.name},
                       {"passed", h.passed},
                       {"margin", h.margin},
                       {"value", h.value},
                       {"witness", {h.witness_s, h.witness_t}},
                       {"detail", h.detail}});
  return {{"all_passed", r.all_passed()}, {"records", records}};
}

json to_json(const EnergyBreakdown& e) {
  return {{"total", e.total},       {"quadratic", e.quadratic}, {"nonlinear", e.nonlinear},
          {"per_well", e.per_well}, {"exterior", e.exterior},   {"remainder", e.remainder}};
}

json to_json(const NehariState& s) {
  return {{"t", s.t},
          {"scale_residuals", s.scale_residuals},
          {"hminus_residual", s.hminus_residual},
          {"mass_margins", s.mass_margins}};
}

json to_json(const ConcentrationReport& r, int dim) {
  json wells = json::array();
  for (const auto& w : r.wells)
    wells.push_back({{"x_u", to_json(w.x_u, dim)},
                     {"x_v", to_json(w.x_v, dim)},
                     {"max_u", w.max_u},
                     {"max_v", w.max_v},
                     {"xi", w.xi},
                     {"V_u", w.V_u},
                     {"V_v", w.V_v},
                     {"min_V", w.min_V},
                     {"interior", w.interior}});
  json spurious = json::array();
  for (const auto& s : r.spurious) spurious.push_back({{"x", to_json(s.x, dim)}, {"amplitude", s.amplitude}});
  return {{"wells", wells}, {"spurious", spurious}, {"all_interior", r.all_interior}};
}

json to_json(const DecayFit& f, int dim) {
  return {{"ok", f.ok},
          {"failure", f.failure},
          {"center", to_json(f.center, dim)},
          {"slope", f.slope},
          {"intercept", f.intercept},
          {"r_squared", f.r_squared},
          {"window", {f.window.r_min, f.window.r_max}},
          {"points", f.r.size()}};
}

json to_json(const ModificationReport& r, int dim) {
  return {{"passed", r.passed},
          {"sup_outside", r.sup_outside},
          {"a", r.a},
          {"witness", to_json(r.witness_x, dim)},
          {"modified_residual", r.modified_residual},
          {"unmodified_residual", r.unmodified_residual},
          {"residual_difference", r.residual_difference}};
}

json to_json(const LocalizationReport& r) {
  return {{"per_well_gap", r.per_well_gap},
          {"per_well_scaled", r.per_well_scaled},
          {"total_gap", r.total_gap},
          {"total_scaled", r.total_scaled},
          {"exterior_fraction", r.exterior_fraction}};
}

json to_json(const AprioriQuantities& q) {
  return {{"eps", q.eps},
          {"norm2", q.norm2},
          {"well_mass", q.well_mass},
          {"well_gradient", q.well_gradient},
          {"energy", q.energy}};
}

json to_json(const AprioriReport& r) {
  json samples = json::array();
  for (const auto& q : r.samples) samples.push_back(to_json(q));
  json out = {{"samples", samples},
              {"exponents_defined", r.exponents_defined},
              {"energy_positive", r.energy_positive},
              {"note", r.note}};
  if (r.exponents_defined)
    out["exponents"] = {{"norm2", r.norm2_exponent},
                        {"well_mass", r.mass_exponent},
                        {"well_gradient", r.gradient_exponent},
                        {"energy", r.energy_exponent}};
  return out;
}

json to_json(const GroundState& g) {
  json out = {{"lambda", g.lambda},
              {"level", g.level},
              {"residual", g.residual_norm},
              {"method", g.method},
              {"converged_starts", g.converged_starts},
              {"start_levels", g.start_levels}};
  if (g.has_oracle) out["oracle"] = {{"level", g.oracle_level}, {"linf", g.oracle_linf}};
  return out;
}

json to_json(const MonotonicityReport& r) {
  json out = {{"increasing", r.increasing}, {"lambdas", r.lambdas}, {"levels", r.levels}, {"margins", r.margins}};
  if (!r.increasing) out["witness"] = {r.witness_lo, r.witness_hi};
  return out;
}

}  // namespace nnls
