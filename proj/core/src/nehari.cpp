#include "nnls/nehari.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "nnls/discretization.hpp"
#include "nnls/error.hpp"
#include "nnls/linear_solve.hpp"
#include "nnls/log.hpp"

namespace nnls {

PairField ScaleFamily::at(const std::vector<double>& t) const {
  if (t.size() != components.size()) throw Error("scale vector size does not match the family");
  PairField p = base;
  for (std::size_t i = 0; i < t.size(); ++i) p.axpy(t[i], components[i]);
  return p;
}

ScaleFamily ansatz_family(std::vector<PairField> components) {
  if (components.empty()) throw Error("ansatz family needs at least one component");
  ScaleFamily f;
  f.base = PairField(components.front().grid());
  f.components = std::move(components);
  return f;
}

ScaleFamily projection_family(const PairField& pair, const Potential& potential) {
  ScaleFamily f;
  f.base = pair;
  for (const auto& w : potential.wells) {
    PairField c(pointwise(pair.u, w.cutoff), pointwise(pair.v, w.cutoff));
    f.base -= c;
    f.components.push_back(std::move(c));
  }
  return f;
}

bool NehariState::is_member(double scale_tol, double hminus_tol) const {
  if (hminus_residual > hminus_tol) return false;
  for (double r : scale_residuals)
    if (std::abs(r) > scale_tol) return false;
  for (double m : mass_margins)
    if (!(m > 0.0)) return false;
  return true;
}

namespace {

double directional_scale(const PairField& R, const PairField& direction, const Functional& J) {
  const double den = std::sqrt(norm_eps(direction, J.V(), J.eps));
  if (!(den > 0.0)) return 0.0;
  return (l2_pairing(R.u, direction.u) + l2_pairing(R.v, direction.v)) / den;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Solves the small dense system A x = b by partial pivoting; false if singular.
bool solve_dense(std::vector<double> A, std::vector<double> b, std::vector<double>& x) {
  const std::size_t k = b.size();
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < k; ++r)
      if (std::abs(A[r * k + c]) > std::abs(A[piv * k + c])) piv = r;
    if (!(std::abs(A[piv * k + c]) > 0.0)) return false;
    if (piv != c) {
      for (std::size_t j = 0; j < k; ++j) std::swap(A[c * k + j], A[piv * k + j]);
      std::swap(b[c], b[piv]);
    }
    for (std::size_t r = c + 1; r < k; ++r) {
      const double f = A[r * k + c] / A[c * k + c];
      for (std::size_t j = c; j < k; ++j) A[r * k + j] -= f * A[c * k + j];
      b[r] -= f * b[c];
    }
  }
  x.assign(k, 0.0);
  for (std::size_t c = k; c-- > 0;) {
    double s = b[c];
    for (std::size_t j = c + 1; j < k; ++j) s -= A[c * k + j] * x[j];
    x[c] = s / A[c * k + c];
  }
  return true;
}

}  // namespace

std::vector<double> nehari_scale_conditions(const PairField& pair, const Functional& J) {
  const PairField R = J_eps_grad(pair, J);
  std::vector<double> out;
  for (const auto& w : J.potential->wells) {
    const PairField dir(pointwise(pair.u, w.cutoff), pointwise(pair.v, w.cutoff));
    out.push_back(directional_scale(R, dir, J));
  }
  return out;
}

std::vector<double> mass_margins(const PairField& pair, const Functional& J) {
  std::vector<double> out;
  const double floor = std::pow(J.eps, 4);
  for (const auto& w : J.potential->wells)
    out.push_back(masked_mass(pair.u, w.inner_mask) + masked_mass(pair.v, w.inner_mask) - floor);
  return out;
}

NehariState measure_state(const PairField& pair, const Functional& J) {
  NehariState s;
  s.pair = pair;
  s.t.assign(J.potential->well_count(), 1.0);
  s.psi = Field(pair.grid());
  s.scale_residuals = nehari_scale_conditions(pair, J);
  s.hminus_residual = hminus_residual(pair, J);
  s.mass_margins = mass_margins(pair, J);
  return s;
}

std::vector<double> scale_residual(const std::vector<double>& t, const ScaleFamily& family, const Functional& J,
                                   const ReductionOptions& opts, Field* psi) {
  const PairField P = family.at(t);
  std::vector<double> out(family.size(), 0.0);
  if (P.u.max_abs() == 0.0 && P.v.max_abs() == 0.0) {
    if (psi) *psi = Field(P.grid());
    return out;
  }
  const ReductionResult red = reduce(P, J, opts, psi && psi->size() == P.u.size() ? psi : nullptr);
  PairField corrected = P;
  corrected.add_antisymmetric(1.0, red.psi);
  const PairField R = J_eps_grad(corrected, J);
  for (std::size_t i = 0; i < family.size(); ++i) {
    const Field& phi = J.potential->wells[i].cutoff;
    const PairField dir(pointwise(P.u, phi), pointwise(P.v, phi));
    out[i] = directional_scale(R, dir, J);
  }
  if (psi) *psi = red.psi;
  return out;
}

ScaleSolution solve_scales(const ScaleFamily& family, const Functional& J, const NehariOptions& opts,
                           std::vector<double> t0) {
  const std::size_t k = family.size();
  if (k == 0) throw Error("scale solve needs at least one well");
  if (k != J.potential->well_count()) throw Error("scale family does not match the well count");

  ScaleSolution sol;
  sol.t = t0.empty() ? std::vector<double>(k, 1.0) : std::move(t0);
  sol.sign.assign(k, 0);
  Field psi(family.base.grid());

  auto eval = [&](const std::vector<double>& t) {
    if (++sol.evaluations > opts.max_evaluations) {
      std::ostringstream os;
      os << "scale solve exceeded " << opts.max_evaluations << " evaluations (max |theta| "
         << max_abs(sol.residuals) << ")";
      throw ManifoldError(os.str());
    }
    Field work = psi;
    auto r = scale_residual(t, family, J, opts.reduction, &work);
    return std::make_pair(r, work);
  };
  auto accept = [&](const std::vector<double>& t, std::pair<std::vector<double>, Field> e) {
    sol.t = t;
    sol.residuals = std::move(e.first);
    psi = std::move(e.second);
  };

  accept(sol.t, eval(sol.t));
  auto done = [&] {
    if (max_abs(sol.residuals) <= opts.tol) {
      sol.psi = psi;
      return true;
    }
    return false;
  };
  if (done()) return sol;

  // Local quasi-Newton: finite-difference Jacobian, then Broyden updates.
  const double t_cap = 2.0;
  const double t_floor = 0.5 * opts.bracket_lo;
  {
    std::vector<double> jac(k * k);
    const double h = 1e-4;
    bool ok = true;
    for (std::size_t j = 0; j < k && ok; ++j) {
      std::vector<double> tp = sol.t;
      tp[j] += h;
      const auto e = eval(tp);
      for (std::size_t i = 0; i < k; ++i) jac[i * k + j] = (e.first[i] - sol.residuals[i]) / h;
    }
    for (int step = 0; step < 25 && ok; ++step) {
      std::vector<double> delta;
      std::vector<double> rhs(k);
      for (std::size_t i = 0; i < k; ++i) rhs[i] = -sol.residuals[i];
      if (!solve_dense(jac, rhs, delta)) break;
      const double big = max_abs(delta);
      const double limit = 0.5;
      if (big > limit)
        for (double& d : delta) d *= limit / big;
      bool improved = false;
      for (int damp = 0; damp < 4; ++damp) {
        std::vector<double> tn = sol.t;
        bool inside = true;
        for (std::size_t i = 0; i < k; ++i) {
          tn[i] += delta[i];
          if (!(tn[i] >= t_floor && tn[i] <= t_cap)) inside = false;
        }
        if (inside) {
          auto e = eval(tn);
          if (max_abs(e.first) < max_abs(sol.residuals)) {
            // Broyden update with the step actually taken
            std::vector<double> dtheta(k);
            for (std::size_t i = 0; i < k; ++i) dtheta[i] = e.first[i] - sol.residuals[i];
            const double dd = std::inner_product(delta.begin(), delta.end(), delta.begin(), 0.0);
            for (std::size_t i = 0; i < k; ++i) {
              double jd = 0.0;
              for (std::size_t j = 0; j < k; ++j) jd += jac[i * k + j] * delta[j];
              for (std::size_t j = 0; j < k; ++j) jac[i * k + j] += (dtheta[i] - jd) * delta[j] / dd;
            }
            accept(tn, std::move(e));
            improved = true;
            break;
          }
        }
        for (double& d : delta) d *= 0.5;
      }
      if (done()) return sol;
      if (!improved) ok = false;
    }
  }

  // Bracketed fallback. The sign convention is measured, not assumed.
  std::vector<double> lo(k), hi(k);
  for (std::size_t i = 0; i < k; ++i) {
    bool found = false;
    const std::vector<double> his = {opts.bracket_hi, 2.0};
    for (double l : {opts.bracket_lo, 0.1, 0.05}) {
      std::vector<double> tl = sol.t;
      tl[i] = l;
      const double rl = eval(tl).first[i];
      for (double u : his) {
        std::vector<double> tu = sol.t;
        tu[i] = u;
        const double ru = eval(tu).first[i];
        if (rl != 0.0 && ru != 0.0 && std::signbit(rl) != std::signbit(ru)) {
          lo[i] = l;
          hi[i] = u;
          sol.sign[i] = rl > 0.0 ? 1 : -1;
          found = true;
          break;
        }
      }
      if (found) break;
    }
    if (!found) {
      std::ostringstream os;
      os << "no sign bracket for the scale condition of well " << i
         << "; try a smaller eps or a better ground-state input";
      throw ManifoldError(os.str());
    }
  }

  while (true) {
    for (std::size_t i = 0; i < k; ++i) {
      if (std::abs(sol.residuals[i]) <= opts.tol) continue;
      // Illinois iteration on coordinate i with the others frozen
      double a = sol.t[i], fa = sol.residuals[i];
      const bool root_above = sol.sign[i] * fa > 0.0;
      double b = root_above ? hi[i] : lo[i];
      std::vector<double> tb = sol.t;
      tb[i] = b;
      auto eb = eval(tb);
      double fb = eb.first[i];
      if (std::signbit(fa) == std::signbit(fb)) {
        lo[i] = std::max(0.0, lo[i] * 0.5);
        continue;
      }
      int side = 0;
      while (std::abs(b - a) > 1e-15 * std::max(1.0, std::abs(a))) {
        const double c = (a * fb - b * fa) / (fb - fa);
        std::vector<double> tc = sol.t;
        tc[i] = c;
        auto ec = eval(tc);
        const double fc = ec.first[i];
        accept(tc, std::move(ec));
        if (std::abs(fc) <= opts.tol) break;
        if (std::signbit(fc) == std::signbit(fb)) {
          b = c;
          fb = fc;
          if (side == -1) fa *= 0.5;
          side = -1;
        } else {
          a = c;
          fa = fc;
          if (side == 1) fb *= 0.5;
          side = 1;
        }
      }
    }
    if (done()) return sol;
  }
}

double nehari_fiber_scale(const PairField& pair, const Functional& J) {
  const double quad = inner_eps(pair.u, pair.v, J.V(), J.eps);
  if (!(quad > 0.0)) throw ManifoldError("fiber scale needs <u, v>_eps > 0");
  const GridSpec& g = pair.grid();
  // J'(sP)(sP) / s^2, decreasing in s for superquadratic h
  auto fiber = [&](double s) {
    double nl = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (g.on_boundary(j) || pair.u[j] <= 0.0 || pair.v[j] <= 0.0) continue;
      const HSample h = J.nl(j, s * pair.u[j], s * pair.v[j]);
      nl += g.cell_volume() * (h.hu * pair.u[j] + h.hv * pair.v[j]);
    }
    return 2.0 * quad - nl / s;
  };
  double lo = 1e-3, hi = 1e3;
  if (!(fiber(lo) > 0.0) || !(fiber(hi) < 0.0)) throw ManifoldError("no Nehari fiber root in [1e-3, 1e3]");
  for (int it = 0; it < 200 && hi / lo > 1.0 + 1e-14; ++it) {
    const double mid = std::sqrt(lo * hi);
    (fiber(mid) > 0.0 ? lo : hi) = mid;
  }
  return std::sqrt(lo * hi);
}

NehariState project_family(const ScaleFamily& family, const Functional& J, const NehariOptions& opts) {
  ScaleSolution sol = solve_scales(family, J, opts);
  PairField pair = family.at(sol.t);
  pair.add_antisymmetric(1.0, sol.psi);
  NehariState st;
  st.pair = std::move(pair);
  st.t = sol.t;
  st.psi = std::move(sol.psi);
  st.scale_residuals = sol.residuals;
  st.hminus_residual = hminus_residual(st.pair, J);
  st.mass_margins = mass_margins(st.pair, J);
  for (std::size_t i = 0; i < st.mass_margins.size(); ++i) {
    if (!(st.mass_margins[i] > 0.0)) {
      std::ostringstream os;
      os << "mass condition fails in well " << i << " (margin " << st.mass_margins[i] << ")";
      throw ManifoldError(os.str());
    }
  }
  return st;
}

NehariState project_to_nehari(const PairField& pair, const Functional& J, const NehariOptions& opts) {
  const auto margins = mass_margins(pair, J);
  for (std::size_t i = 0; i < margins.size(); ++i) {
    if (!(margins[i] > 0.0)) {
      std::ostringstream os;
      os << "pair is not admissible: mass condition fails in well " << i << " (margin " << margins[i] << ")";
      throw ManifoldError(os.str());
    }
  }
  return project_family(projection_family(pair, *J.potential), J, opts);
}

Solution minimize_on_nehari(const NehariState& start, const Functional& J, const MinimizeOptions& opts) {
  Solution sol;
  NehariState state = start;
  double energy = J_eps_value(state.pair, J);
  PairField R = J_eps_grad(state.pair, J);
  double res = l2_norm(R);
  sol.energy_history.push_back(energy);

  const ShiftedOperator A{&J.V(), J.eps, 1.0, nullptr};
  int stagnant = 0;
  double res_at_window_start = res;
  int it = 0;
  for (; it < opts.max_iters && res > opts.tol; ++it) {
    const PairField g(solve_shifted(A, R.u, 1e-12), solve_shifted(A, R.v, 1e-12));
    const double slope = l2_pairing(R.u, g.u) + l2_pairing(R.v, g.v);
    double tau = 1.0;
    bool accepted = false;
    std::string last_failure;
    for (int shrink = 0; shrink <= opts.max_shrinks; ++shrink, tau *= 0.5) {
      PairField trial = state.pair;
      trial.axpy(-tau, g);
      NehariState next;
      try {
        next = project_to_nehari(trial, J, opts.nehari);
      } catch (const SolverError& e) {
        last_failure = e.what();
        continue;
      }
      const double e_next = J_eps_value(next.pair, J);
      PairField R_next = J_eps_grad(next.pair, J);
      const double res_next = l2_norm(R_next);
      const double scale = std::abs(inner_eps(next.pair.u, next.pair.v, J.V(), J.eps)) + std::abs(e_next);
      const bool armijo = e_next <= energy - opts.armijo * tau * slope;
      const bool roundoff = std::abs(e_next - energy) <= 1e-13 * scale && res_next < res;
      if (armijo || roundoff) {
        const double decrease = energy - e_next;
        stagnant = decrease < opts.stagnation_decrease ? stagnant + 1 : 0;
        if (stagnant == 1) res_at_window_start = res;
        state = std::move(next);
        energy = e_next;
        R = std::move(R_next);
        res = res_next;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      std::ostringstream os;
      os << "minimize: no acceptable step after " << opts.max_shrinks << " shrinks at iteration " << it
         << " (residual " << res << ")";
      if (!last_failure.empty()) os << "; last projection failure: " << last_failure;
      throw SolverError(os.str());
    }
    sol.energy_history.push_back(energy);
    if (stagnant >= opts.stagnation_window && res > opts.tol && res > 0.5 * res_at_window_start) {
      std::ostringstream os;
      os << "minimize stagnated at iteration " << it << ": energy " << energy << ", residual " << res;
      throw SolverError(os.str());
    }
    if (stagnant >= opts.stagnation_window) stagnant = 0;
    if (it % 200 == 0) log(LogLevel::Debug, "minimize it ", it, " J ", energy, " residual ", res, " tau ", tau);
  }
  if (res > opts.tol) {
    std::ostringstream os;
    os << "minimize did not converge in " << opts.max_iters << " iterations (residual " << res << ")";
    throw SolverError(os.str());
  }

  sol.iterations = it;
  sol.pair = state.pair;
  sol.energy = J_eps(sol.pair, J);
  sol.residual_norm = l2_norm(J_eps_grad(sol.pair, J));
  sol.nehari = measure_state(sol.pair, J);
  sol.nehari.t = state.t;
  sol.nehari.psi = state.psi;
  return sol;
}

std::vector<PairField> ansatz_components(const std::vector<PairField>& profiles, const Potential& potential,
                                         double eps, double* edge_amplitude) {
  const std::size_t k = potential.well_count();
  if (profiles.size() != k && profiles.size() != 1)
    throw ConfigError("need one ground-state profile per well (or a single shared one)");
  if (!(eps > 0.0)) throw ConfigError("eps must be positive");
  const GridSpec& g = potential.grid();
  double edge = 0.0;
  std::vector<PairField> out;
  for (std::size_t i = 0; i < k; ++i) {
    const PairField& prof = profiles.size() == 1 ? profiles.front() : profiles[i];
    if (prof.grid().dim != g.dim) throw ConfigError("profile dimension does not match the grid");
    const WellSpec& w = potential.wells[i];
    PairField c(g);
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (g.on_boundary(j)) continue;
      const Point x = g.point(j);
      Point y{0.0, 0.0, 0.0};
      for (int a = 0; a < g.dim; ++a) y[a] = (x[a] - w.minimizer[a]) / eps;
      const double pu = sample_linear(prof.u, y);
      const double pv = sample_linear(prof.v, y);
      if (!w.middle_mask[j]) edge = std::max({edge, std::abs(pu), std::abs(pv)});
      c.u[j] = w.cutoff[j] * pu;
      c.v[j] = w.cutoff[j] * pv;
    }
    out.push_back(std::move(c));
  }
  if (edge > 1e-8) log(LogLevel::Warn, "ansatz profile not decayed at the cutoff edge: amplitude ", edge, " at eps ", eps);
  if (edge_amplitude) *edge_amplitude = edge;
  return out;
}

PairField build_ansatz(const std::vector<PairField>& profiles, const Potential& potential, double eps) {
  return ansatz_family(ansatz_components(profiles, potential, eps)).at(std::vector<double>(potential.well_count(), 1.0));
}

PairField rescale_pair(const PairField& pair, const Potential& potential, double eps_from, double eps_to) {
  if (!(eps_from > 0.0 && eps_to > 0.0)) throw ConfigError("eps must be positive");
  const GridSpec& g = pair.grid();
  const double stretch = eps_from / eps_to;
  PairField out(g);
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (g.on_boundary(j)) continue;
    const Point x = g.point(j);
    int label = potential.outer_label.empty() ? -1 : potential.outer_label[j];
    if (label < 0) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < potential.well_count(); ++i) {
        const double d = distance(x, potential.wells[i].minimizer, g.dim);
        if (d < best) {
          best = d;
          label = static_cast<int>(i);
        }
      }
    }
    const Point& c = potential.wells[label].minimizer;
    Point y{0.0, 0.0, 0.0};
    for (int a = 0; a < g.dim; ++a) y[a] = c[a] + (x[a] - c[a]) * stretch;
    out.u[j] = sample_linear(pair.u, y);
    out.v[j] = sample_linear(pair.v, y);
  }
  return out;
}

AprioriQuantities apriori_quantities(const PairField& pair, const Functional& J) {
  AprioriQuantities q;
  q.eps = J.eps;
  q.norm2 = norm_eps(pair, J.V(), J.eps);
  for (const auto& w : J.potential->wells) {
    q.well_mass += masked_mass(pair.u, w.inner_mask) + masked_mass(pair.v, w.inner_mask);
    q.well_gradient +=
        masked_gradient_energy(pair.u, w.inner_mask, J.eps) + masked_gradient_energy(pair.v, w.inner_mask, J.eps);
  }
  q.energy = J_eps_value(pair, J);
  return q;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error("line fit needs at least two points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw Error("line fit needs distinct abscissae");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

AprioriReport verify_apriori_bounds(std::vector<AprioriQuantities> samples) {
  AprioriReport rep;
  std::sort(samples.begin(), samples.end(), [](const auto& a, const auto& b) { return a.eps < b.eps; });
  rep.samples = samples;
  rep.energy_positive = !samples.empty();
  for (const auto& s : samples) rep.energy_positive = rep.energy_positive && s.energy > 0.0;

  bool usable = samples.size() >= 2;
  for (std::size_t i = 0; usable && i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (!(s.norm2 > 0.0 && s.well_mass > 0.0 && s.well_gradient > 0.0 && s.energy > 0.0)) usable = false;
    if (i > 0 && !(s.eps > samples[i - 1].eps)) usable = false;
  }
  if (!usable) {
    rep.note = "exponents undefined: need two or more distinct eps with positive quantities";
    return rep;
  }
  std::vector<double> le;
  for (const auto& s : samples) le.push_back(std::log(s.eps));
  auto slope = [&](auto get) {
    std::vector<double> y;
    for (const auto& s : samples) y.push_back(std::log(get(s)));
    return fit_line(le, y).slope;
  };
  rep.norm2_exponent = slope([](const auto& s) { return s.norm2; });
  rep.mass_exponent = slope([](const auto& s) { return s.well_mass; });
  rep.gradient_exponent = slope([](const auto& s) { return s.well_gradient; });
  rep.energy_exponent = slope([](const auto& s) { return s.energy; });
  rep.exponents_defined = true;
  return rep;
}

}  // namespace nnls
