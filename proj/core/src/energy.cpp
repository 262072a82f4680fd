#include "nnls/energy.hpp"

#include <cmath>

#include "nnls/discretization.hpp"
#include "nnls/error.hpp"

namespace nnls {

Functional make_functional(std::shared_ptr<const Potential> potential, double eps, const NonlinParams& params,
                           bool modified) {
  if (!potential) throw Error("functional needs a potential");
  if (!(eps > 0.0)) throw ConfigError("eps must be positive");
  params.validate();
  Functional J;
  J.eps = eps;
  const std::size_t n = potential->grid().size();
  std::vector<std::uint8_t> inside = modified ? potential->inner_union : std::vector<std::uint8_t>(n, 1);
  J.nl = SpatialNonlinearity(params, std::move(inside));
  J.potential = std::move(potential);
  return J;
}

Functional unmodified(const Functional& J) {
  Functional out = J;
  out.nl = J.nl.unmodified();
  return out;
}

std::vector<HSample> sample_h(const PairField& pair, const SpatialNonlinearity& nl) {
  std::vector<HSample> out(pair.u.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = nl(j, pair.u[j], pair.v[j]);
  return out;
}

EnergyBreakdown J_eps(const PairField& pair, const Functional& J) {
  require_same_grid(pair.u, J.V());
  const GridSpec& g = J.grid();
  const auto& pot = *J.potential;
  const std::size_t k = pot.well_count();
  const double eps2 = J.eps * J.eps;
  const double inv_h2 = 1.0 / (g.spacing * g.spacing);

  EnergyBreakdown e;
  e.per_well.assign(k, 0.0);
  auto bucket = [&](int label) -> double& { return label >= 0 ? e.per_well[label] : e.exterior; };

  for (std::size_t j = 0; j < g.size(); ++j) {
    const double w = g.trapezoid_weight(j);
    const double pot_term = w * J.V()[j] * pair.u[j] * pair.v[j];
    const double h = w * J.nl(j, pair.u[j], pair.v[j]).h;
    e.quadratic += pot_term;
    e.nonlinear += h;
    bucket(pot.outer_label[j]) += pot_term - h;
  }

  // Gradient cross term, one edge at a time with its transverse trapezoid
  // factor. Edges touching an outer region belong to that well.
  for (std::size_t j = 0; j < g.size(); ++j) {
    const MultiIndex idx = g.index(j);
    double tw_all = 1.0;
    for (int a = 0; a < g.dim; ++a)
      if (idx[a] == 0 || idx[a] == g.n - 1) tw_all *= 0.5;
    for (int a = 0; a < g.dim; ++a) {
      if (idx[a] == g.n - 1) continue;
      const double tw = idx[a] == 0 ? 2.0 * tw_all : tw_all;
      const std::size_t b = j + g.stride(a);
      const double term =
          eps2 * inv_h2 * g.cell_volume() * tw * (pair.u[b] - pair.u[j]) * (pair.v[b] - pair.v[j]);
      if (term == 0.0) continue;
      e.quadratic += term;
      const int label = pot.outer_label[j] >= 0 ? pot.outer_label[j] : pot.outer_label[b];
      bucket(label) += term;
    }
  }

  e.total = e.quadratic - e.nonlinear;
  double sum = e.exterior;
  for (double x : e.per_well) sum += x;
  e.remainder = e.total - sum;
  return e;
}

double J_eps_value(const PairField& pair, const Functional& J) {
  require_same_grid(pair.u, J.V());
  const GridSpec& g = J.grid();
  double nonlinear = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (pair.u[j] <= 0.0 || pair.v[j] <= 0.0) continue;
    nonlinear += g.trapezoid_weight(j) * J.nl(j, pair.u[j], pair.v[j]).h;
  }
  return inner_eps(pair.u, pair.v, J.V(), J.eps) - nonlinear;
}

PairField J_eps_grad(const PairField& pair, const Functional& J) {
  PairField R(apply_schrodinger(pair.v, J.V(), J.eps), apply_schrodinger(pair.u, J.V(), J.eps));
  const GridSpec& g = J.grid();
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (g.on_boundary(j) || pair.u[j] <= 0.0 || pair.v[j] <= 0.0) continue;
    const HSample h = J.nl(j, pair.u[j], pair.v[j]);
    R.u[j] -= h.hu;
    R.v[j] -= h.hv;
  }
  return R;
}

PairField J_eps_hvp(const PairField& pair, const PairField& direction, const Functional& J) {
  require_same_grid(pair.u, direction.u);
  const Field& zeta = direction.u;
  const Field& xi = direction.v;
  PairField out(apply_schrodinger(xi, J.V(), J.eps), apply_schrodinger(zeta, J.V(), J.eps));
  const GridSpec& g = J.grid();
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (g.on_boundary(j) || pair.u[j] <= 0.0 || pair.v[j] <= 0.0) continue;
    const HSample h = J.nl(j, pair.u[j], pair.v[j]);
    out.u[j] -= h.huu * zeta[j] + h.huv * xi[j];
    out.v[j] -= h.huv * zeta[j] + h.hvv * xi[j];
  }
  return out;
}

double I_lambda(const PairField& pair, double lambda, const NonlinParams& params) {
  if (!(lambda > 0.0)) throw ConfigError("lambda must be positive");
  const GridSpec& g = pair.grid();
  const Field V(g, lambda);
  double nonlinear = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) nonlinear += g.trapezoid_weight(j) * h_eval(pair.u[j], pair.v[j], params).h;
  return inner_eps(pair.u, pair.v, V, 1.0) - nonlinear;
}

double residual_norm(const PairField& pair, const Functional& J) { return l2_norm(J_eps_grad(pair, J)); }

}  // namespace nnls
