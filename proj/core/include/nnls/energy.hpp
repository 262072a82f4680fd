#pragma once

#include <memory>
#include <vector>

#include "nnls/grid.hpp"
#include "nnls/nonlinearity.hpp"
#include "nnls/potential.hpp"

namespace nnls {

/// J_eps(u, v) = <u, v>_eps - int h(x, (u, v)) on a fixed potential.
struct Functional {
  std::shared_ptr<const Potential> potential;
  double eps = 1.0;
  SpatialNonlinearity nl;

  const Field& V() const { return potential->values; }
  const GridSpec& grid() const { return potential->grid(); }
};

/// modified = true switches to h~ outside the inner well regions.
Functional make_functional(std::shared_ptr<const Potential> potential, double eps, const NonlinParams& params,
                           bool modified = true);

/// The same functional with h used everywhere.
Functional unmodified(const Functional& J);

struct EnergyBreakdown {
  double total = 0.0;
  double quadratic = 0.0;  // <u, v>_eps
  double nonlinear = 0.0;  // int h(x, (u, v))
  std::vector<double> per_well;
  double exterior = 0.0;
  double remainder = 0.0;
};

EnergyBreakdown J_eps(const PairField& pair, const Functional& J);
double J_eps_value(const PairField& pair, const Functional& J);

/// Strong-form residual (A v - h_u, A u - h_v), A = -eps^2 Lap + V, zero on
/// the box surface. Its l2_pairing with (zeta, xi) is the directional
/// derivative of J_eps.
PairField J_eps_grad(const PairField& pair, const Functional& J);

/// Second derivative of J_eps at pair applied to direction.
PairField J_eps_hvp(const PairField& pair, const PairField& direction, const Functional& J);

/// h samples at every node.
std::vector<HSample> sample_h(const PairField& pair, const SpatialNonlinearity& nl);

/// int grad u . grad v + lambda u v - int h(u, v) with h unmodified.
double I_lambda(const PairField& pair, double lambda, const NonlinParams& params);

/// l2 norm of the strong residual.
double residual_norm(const PairField& pair, const Functional& J);

}  // namespace nnls
