#include "nnls/run.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <thread>

#include "nnls/error.hpp"
#include "nnls/field_io.hpp"
#include "nnls/hypotheses.hpp"
#include "nnls/log.hpp"
#include "nnls/report.hpp"

namespace nnls {

using nlohmann::json;
namespace fs = std::filesystem;

bool SweepResult::all_converged() const {
  return std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.converged; });
}

Potential build_config_potential(const RunConfig& c) {
  const GridSpec g = build_grid(c.grid.dim, c.grid.half_extent, c.grid.n);
  return build_potential(c.potential, g);
}

MinimizeOptions minimize_options(const RunConfig& c) {
  MinimizeOptions m;
  m.tol = c.solver.tol;
  m.max_iters = c.solver.max_iters;
  m.nehari.tol = c.solver.scale_tol;
  m.nehari.reduction.tol = c.solver.reduction_tol;
  m.nehari.max_evaluations = c.solver.max_scale_evaluations;
  return m;
}

std::vector<GroundState> well_ground_states(const RunConfig& c, const Potential& potential,
                                            std::vector<double>* c_targets,
                                            std::vector<std::size_t>* well_to_state) {
  const GridSpec g = build_grid(c.grid.dim, c.groundstate.half_extent, c.groundstate.n);
  GroundStateOptions opts;
  opts.minimize = minimize_options(c);
  opts.starts = c.groundstate.starts;
  opts.seed = c.seed;

  std::vector<GroundState> states;
  std::map<double, std::size_t> by_level;
  std::vector<std::size_t> mapping;
  for (const auto& w : potential.wells) {
    const double lambda = potential.values[w.minimizer_index];
    auto it = by_level.find(lambda);
    if (it == by_level.end()) {
      log(LogLevel::Info, "computing ground state at lambda ", lambda);
      states.push_back(compute_ground_state(lambda, c.nonlinearity, g, opts));
      it = by_level.emplace(lambda, states.size() - 1).first;
    }
    mapping.push_back(it->second);
  }
  if (c_targets) {
    c_targets->clear();
    for (auto k : mapping) c_targets->push_back(states[k].level);
  }
  if (well_to_state) *well_to_state = mapping;
  return states;
}

namespace {

void analyse_row(SweepRow& row, const Functional& J, const std::vector<double>& c_targets) {
  const Potential& pot = *J.potential;
  const int dim = pot.grid().dim;
  row.maxima = find_maxima(row.solution.pair, pot, row.eps);
  for (std::size_t i = 0; i < pot.well_count(); ++i) {
    const DecayWindow w = default_decay_window(pot, i, row.eps);
    row.decay_u.push_back(decay_fit(row.solution.pair.u, row.maxima.wells[i].x_u, row.eps, w));
    row.decay_v.push_back(decay_fit(row.solution.pair.v, row.maxima.wells[i].x_v, row.eps, w));
  }
  row.modification = modification_check(row.solution.pair, J);
  row.localization = energy_localization(row.solution.energy, row.eps, dim, c_targets);
  row.apriori = apriori_quantities(row.solution.pair, J);
}

SweepRow solve_row(const RunConfig& c, const std::shared_ptr<const Potential>& pot, double eps,
                   const std::vector<PairField>& profiles, const std::vector<double>& c_targets,
                   const PairField* warm, double warm_eps) {
  SweepRow row;
  row.eps = eps;
  const Functional J = make_functional(pot, eps, c.nonlinearity);
  const MinimizeOptions mopts = minimize_options(c);
  try {
    NehariState start;
    bool have_start = false;
    if (warm) {
      try {
        start = project_to_nehari(rescale_pair(*warm, *pot, warm_eps, eps), J, mopts.nehari);
        have_start = true;
        row.warm_started = true;
      } catch (const SolverError& e) {
        log(LogLevel::Warn, "eps ", eps, ": warm start rejected (", e.what(), "), using the ansatz");
      }
    }
    if (!have_start) start = project_family(ansatz_family(ansatz_components(profiles, *pot, eps)), J, mopts.nehari);
    row.solution = minimize_on_nehari(start, J, mopts);
    row.converged = true;
    analyse_row(row, J, c_targets);
    log(LogLevel::Info, "eps ", eps, ": J = ", row.solution.energy.total, " after ", row.solution.iterations,
        " steps, residual ", row.solution.residual_norm);
  } catch (const SolverError& e) {
    row.converged = false;
    row.error = e.what();
    log(LogLevel::Warn, "eps ", eps, " failed: ", e.what());
  }
  return row;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream os(path);
  if (!os) throw Error("cannot write " + path.string());
  os << std::setw(2) << j << '\n';
}

void write_row_outputs(const fs::path& dir, std::size_t k, const SweepRow& row, int dim) {
  if (!row.converged) return;
  const fs::path fields = dir / "fields";
  fs::create_directories(fields);
  const std::string stem = "row" + std::to_string(k);
  write_field(fields / (stem + "_u.nnls"), row.solution.pair.u);
  write_field(fields / (stem + "_v.nnls"), row.solution.pair.v);
  if (dim == 1) {
    write_field_csv(fields / (stem + "_u.csv"), row.solution.pair.u);
    write_field_csv(fields / (stem + "_v.csv"), row.solution.pair.v);
  }
  std::ofstream os(dir / ("decay_" + stem + ".csv"));
  os << std::setprecision(17) << "well,component,r,log_max\n";
  for (std::size_t i = 0; i < row.decay_u.size(); ++i) {
    for (std::size_t p = 0; p < row.decay_u[i].r.size(); ++p)
      os << i << ",u," << row.decay_u[i].r[p] << ',' << row.decay_u[i].log_max[p] << '\n';
    for (std::size_t p = 0; p < row.decay_v[i].r.size(); ++p)
      os << i << ",v," << row.decay_v[i].r[p] << ',' << row.decay_v[i].log_max[p] << '\n';
  }
}

}  // namespace

SweepResult run_sweep(const RunConfig& c, bool warm_start, int workers,
                      const std::vector<GroundState>* ground_states) {
  SweepResult res;
  res.potential = std::make_shared<const Potential>(build_config_potential(c));
  std::vector<std::size_t> mapping;
  if (ground_states) {
    res.ground_states = *ground_states;
    for (const auto& w : res.potential->wells) {
      const double lambda = res.potential->values[w.minimizer_index];
      std::size_t best = 0;
      for (std::size_t k = 0; k < res.ground_states.size(); ++k)
        if (std::abs(res.ground_states[k].lambda - lambda) < std::abs(res.ground_states[best].lambda - lambda))
          best = k;
      if (std::abs(res.ground_states[best].lambda - lambda) > 1e-12 * lambda)
        throw ConfigError("supplied ground states do not cover every well level");
      mapping.push_back(best);
      res.c_targets.push_back(res.ground_states[best].level);
    }
  } else {
    res.ground_states = well_ground_states(c, *res.potential, &res.c_targets, &mapping);
  }
  std::vector<PairField> profiles;
  for (auto k : mapping) profiles.push_back(res.ground_states[k].pair);

  const std::size_t n = c.epsilon.size();
  res.rows.resize(n);
  if (warm_start || workers <= 1) {
    const PairField* prev = nullptr;
    double prev_eps = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      res.rows[k] = solve_row(c, res.potential, c.epsilon[k], profiles, res.c_targets,
                              warm_start ? prev : nullptr, prev_eps);
      if (res.rows[k].converged) {
        prev = &res.rows[k].solution.pair;
        prev_eps = c.epsilon[k];
      } else {
        prev = nullptr;
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const int count = std::min<int>(workers, static_cast<int>(n));
    for (int w = 0; w < count; ++w) {
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < n; k = next++)
          res.rows[k] = solve_row(c, res.potential, c.epsilon[k], profiles, res.c_targets, nullptr, 0.0);
      });
    }
    for (auto& t : pool) t.join();
  }

  std::vector<AprioriQuantities> q;
  for (const auto& r : res.rows)
    if (r.converged) q.push_back(r.apriori);
  res.apriori = verify_apriori_bounds(q);
  return res;
}

json to_json(const SweepResult& r, int dim) {
  json gs = json::array();
  for (const auto& g : r.ground_states) gs.push_back(to_json(g));
  json rows = json::array();
  for (const auto& row : r.rows) {
    json j = {{"eps", row.eps}, {"converged", row.converged}, {"warm_started", row.warm_started}};
    if (!row.converged) {
      j["error"] = row.error;
      rows.push_back(j);
      continue;
    }
    json du = json::array(), dv = json::array();
    for (const auto& f : row.decay_u) du.push_back(to_json(f, dim));
    for (const auto& f : row.decay_v) dv.push_back(to_json(f, dim));
    j["energy"] = to_json(row.solution.energy);
    j["residual_norm"] = row.solution.residual_norm;
    j["iterations"] = row.solution.iterations;
    j["nehari"] = to_json(row.solution.nehari);
    j["maxima"] = to_json(row.maxima, dim);
    j["decay"] = {{"u", du}, {"v", dv}};
    j["modification"] = to_json(row.modification, dim);
    j["localization"] = to_json(row.localization);
    j["apriori"] = to_json(row.apriori);
    rows.push_back(j);
  }
  return {{"ground_states", gs}, {"c_targets", r.c_targets}, {"rows", rows}, {"apriori", to_json(r.apriori)}};
}

CommandResult cmd_check(const RunConfig& c, const std::optional<fs::path>& out) {
  validate_config(c, ConfigUse::Check);
  CommandResult res;
  const HypothesisReport hyp = check_hypotheses(c.nonlinearity, {c.hypotheses.s_min, c.hypotheses.s_max},
                                                c.hypotheses.samples, c.seed);
  json pot = {{"rh_infinity", "not verifiable on a finite grid; only alpha > 0 is checked"}};
  bool pot_ok = true;
  try {
    const Potential p = build_config_potential(c);
    pot["alpha"] = p.alpha;
    pot["V1"] = p.alpha > 0.0;
    pot["V2"] = true;
    pot["wells"] = p.well_count();
  } catch (const ConfigError& e) {
    pot_ok = false;
    pot["error"] = e.what();
    const std::string msg = e.what();
    pot["V2"] = msg.find("strict local minimum") == std::string::npos;
  }
  for (const auto& r : hyp.records)
    if (!r.passed) log(LogLevel::Warn, "hypothesis ", r.name, " fails at (", r.witness_s, ", ", r.witness_t, ")");
  res.report = {{"config", config_to_json(c)},
                {"hypotheses", to_json(hyp)},
                {"potential", pot},
                {"notes", {"the proofs cite a property h7 that is never stated; h1-h6 and hm are checked"}}};
  res.exit_code = hyp.all_passed() && pot_ok ? kExitSuccess : kExitFailure;
  if (out) {
    fs::create_directories(*out);
    write_json(*out / "check.json", res.report);
  }
  return res;
}

CommandResult cmd_groundstate(const RunConfig& c, const std::optional<fs::path>& out) {
  validate_config(c, ConfigUse::GroundState);
  const GridSpec g = build_grid(c.grid.dim, c.groundstate.half_extent, c.groundstate.n);
  GroundStateOptions opts;
  opts.minimize = minimize_options(c);
  opts.starts = c.groundstate.starts;
  opts.seed = c.seed;

  CommandResult res;
  json rows = json::array();
  std::vector<std::pair<double, double>> levels;
  std::ostringstream csv;
  csv << std::setprecision(17) << "lambda,level,residual,method\n";
  bool all_ok = true;
  for (double lambda : c.lambdas) {
    try {
      const GroundState gs = compute_ground_state(lambda, c.nonlinearity, g, opts);
      levels.emplace_back(lambda, gs.level);
      rows.push_back(to_json(gs));
      csv << lambda << ',' << gs.level << ',' << gs.residual_norm << ',' << gs.method << '\n';
    } catch (const SolverError& e) {
      all_ok = false;
      rows.push_back({{"lambda", lambda}, {"error", e.what()}});
      csv << lambda << ",,," << "failed" << '\n';
    }
  }
  res.report = {{"config", config_to_json(c)}, {"levels", rows}};
  if (levels.size() >= 3) {
    const MonotonicityReport mono = check_c_monotonicity(levels);
    const LineFit fit = fit_scaling(levels);
    res.report["monotonicity"] = to_json(mono);
    res.report["scaling"] = {{"fitted_exponent", fit.slope},
                             {"expected_exponent", scaling_exponent(c.nonlinearity, c.grid.dim)},
                             {"r_squared", fit.r_squared}};
    all_ok = all_ok && mono.increasing;
  }
  res.exit_code = all_ok ? kExitSuccess : kExitFailure;
  if (out) {
    fs::create_directories(*out);
    std::ofstream(*out / "groundstate.csv") << csv.str();
    write_json(*out / "groundstate.json", res.report);
  }
  return res;
}

namespace {

CommandResult solve_command(const RunConfig& c, const std::optional<fs::path>& out, bool warm, int workers,
                            ConfigUse use) {
  validate_config(c, use);
  const SweepResult sweep = run_sweep(c, warm, workers);
  CommandResult res;
  res.report = to_json(sweep, c.grid.dim);
  res.report["config"] = config_to_json(c);
  res.report["hypotheses"] = to_json(check_hypotheses(c.nonlinearity, {c.hypotheses.s_min, c.hypotheses.s_max},
                                                      c.hypotheses.samples, c.seed));
  res.exit_code = sweep.all_converged() ? kExitSuccess : kExitFailure;
  if (out) {
    fs::create_directories(*out);
    for (std::size_t k = 0; k < sweep.rows.size(); ++k) write_row_outputs(*out, k, sweep.rows[k], c.grid.dim);
    write_json(*out / "report.json", res.report);
  }
  return res;
}

}  // namespace

CommandResult cmd_solve(const RunConfig& c, const std::optional<fs::path>& out) {
  return solve_command(c, out, false, 1, ConfigUse::Solve);
}

CommandResult cmd_sweep(const RunConfig& c, const std::optional<fs::path>& out, int workers) {
  return solve_command(c, out, workers <= 1, workers, ConfigUse::Sweep);
}

}  // namespace nnls
