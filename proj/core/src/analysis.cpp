#include "nnls/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nnls/discretization.hpp"
#include "nnls/error.hpp"

namespace nnls {

namespace {

bool is_local_max(const Field& f, std::size_t j) {
  const GridSpec& g = f.grid();
  const MultiIndex idx = g.index(j);
  bool strict = false;
  for (int a = 0; a < g.dim; ++a) {
    const std::size_t s = g.stride(a);
    for (int dir : {-1, 1}) {
      const int n = idx[a] + dir;
      if (n < 0 || n >= g.n) continue;
      const double other = f[dir < 0 ? j - s : j + s];
      if (other > f[j]) return false;
      if (other < f[j]) strict = true;
    }
  }
  return strict;
}

bool touches_outside(const GridSpec& g, const std::vector<std::uint8_t>& mask, std::size_t j) {
  const MultiIndex idx = g.index(j);
  for (int a = 0; a < g.dim; ++a) {
    const std::size_t s = g.stride(a);
    if (idx[a] == 0 || idx[a] == g.n - 1) return true;
    if (!mask[j - s] || !mask[j + s]) return true;
  }
  return false;
}

}  // namespace

ConcentrationReport find_maxima(const PairField& pair, const Potential& potential, double eps, double floor) {
  const GridSpec& g = pair.grid();
  ConcentrationReport rep;
  rep.all_interior = true;
  for (const auto& w : potential.wells) {
    WellMaxima m;
    m.max_u = -std::numeric_limits<double>::infinity();
    m.max_v = m.max_u;
    m.min_V = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (!w.inner_mask[j]) continue;
      if (pair.u[j] > m.max_u) {
        m.max_u = pair.u[j];
        m.index_u = j;
      }
      if (pair.v[j] > m.max_v) {
        m.max_v = pair.v[j];
        m.index_v = j;
      }
      m.min_V = std::min(m.min_V, potential.values[j]);
    }
    m.x_u = g.point(m.index_u);
    m.x_v = g.point(m.index_v);
    m.xi = distance(m.x_u, m.x_v, g.dim) / eps;
    m.V_u = potential.values[m.index_u];
    m.V_v = potential.values[m.index_v];
    m.interior = m.max_u > 0.0 && m.max_v > 0.0 && !touches_outside(g, w.inner_mask, m.index_u) &&
                 !touches_outside(g, w.inner_mask, m.index_v);
    rep.all_interior = rep.all_interior && m.interior;
    rep.wells.push_back(m);
  }

  Field amp(g);
  for (std::size_t j = 0; j < g.size(); ++j) amp[j] = std::max(pair.u[j], pair.v[j]);
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (potential.inner_union[j] || g.on_boundary(j) || amp[j] <= floor) continue;
    if (is_local_max(amp, j)) rep.spurious.push_back({j, g.point(j), amp[j]});
  }
  return rep;
}

DecayWindow default_decay_window(const Potential& potential, std::size_t well, double eps) {
  const GridSpec& g = potential.grid();
  const Point& c = potential.wells.at(well).minimizer;
  double edge = std::numeric_limits<double>::infinity();
  for (int a = 0; a < g.dim; ++a) edge = std::min({edge, g.half_extent - c[a], g.half_extent + c[a]});
  double other = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < potential.well_count(); ++i)
    if (i != well) other = std::min(other, distance(c, potential.wells[i].minimizer, g.dim));
  return {3.0 * eps, std::min(edge, other) / 1.5};
}

DecayFit decay_fit(const Field& field, const Point& center, double eps, const DecayWindow& window) {
  DecayFit fit;
  fit.center = center;
  fit.window = window;
  const GridSpec& g = field.grid();
  if (!(eps > 0.0) || !(window.r_max > window.r_min) || window.r_min < 0.0) {
    fit.failure = "invalid decay window";
    return fit;
  }
  const double dr = g.spacing;
  const int shells = static_cast<int>(std::floor((window.r_max - window.r_min) / dr));
  std::vector<double> shell_max(std::max(shells, 0), 0.0);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double r = distance(g.point(j), center, g.dim);
    if (r < window.r_min) continue;
    const int k = static_cast<int>(std::floor((r - window.r_min) / dr));
    if (k < 0 || k >= shells) continue;
    shell_max[k] = std::max(shell_max[k], field[j]);
  }
  for (int k = 0; k < shells; ++k) {
    if (!(shell_max[k] >= 1e-14)) continue;
    fit.r.push_back(window.r_min + k * dr);
    fit.log_max.push_back(std::log(shell_max[k]));
  }
  if (fit.r.size() < 8) {
    fit.failure = "fewer than 8 usable shells in the decay window";
    return fit;
  }
  const LineFit lf = fit_line(fit.r, fit.log_max);
  fit.slope = -lf.slope;
  fit.intercept = lf.intercept;
  fit.r_squared = lf.r_squared;
  fit.ok = fit.slope > 0.0;
  if (!fit.ok) fit.failure = "tail is not decaying";
  return fit;
}

ModificationReport modification_check(const PairField& pair, const Functional& J) {
  const GridSpec& g = pair.grid();
  ModificationReport rep;
  rep.a = J.nl.params().a;
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (J.nl.inside()[j]) continue;
    const double rho = std::hypot(pair.u[j], pair.v[j]);
    if (rho > rep.sup_outside) {
      rep.sup_outside = rho;
      rep.witness = j;
    }
  }
  rep.witness_x = g.point(rep.witness);
  rep.passed = rep.sup_outside < rep.a;
  const PairField Rm = J_eps_grad(pair, J);
  rep.modified_residual = l2_norm(Rm);
  if (rep.passed) {
    const PairField Ru = J_eps_grad(pair, unmodified(J));
    rep.unmodified_residual = l2_norm(Ru);
    PairField d = Rm - Ru;
    rep.residual_difference = std::max(d.u.max_abs(), d.v.max_abs());
  }
  return rep;
}

LocalizationReport energy_localization(const EnergyBreakdown& energy, double eps, int dim,
                                       const std::vector<double>& c_targets) {
  if (c_targets.size() != energy.per_well.size())
    throw ConfigError("need one energy target per well");
  LocalizationReport rep;
  const double scale = std::pow(eps, dim);
  double sum_c = 0.0;
  for (std::size_t i = 0; i < c_targets.size(); ++i) {
    const double s = energy.per_well[i] / scale;
    rep.per_well_scaled.push_back(s);
    rep.per_well_gap.push_back(std::abs(s - c_targets[i]) / c_targets[i]);
    sum_c += c_targets[i];
  }
  rep.total_scaled = energy.total / scale;
  rep.total_gap = std::abs(rep.total_scaled - sum_c) / sum_c;
  rep.exterior_fraction = energy.total != 0.0 ? std::abs(energy.exterior) / std::abs(energy.total) : 0.0;
  return rep;
}

}  // namespace nnls
