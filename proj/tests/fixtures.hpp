#pragma once

#include <cmath>
#include <memory>
#include <random>

#include "nnls/energy.hpp"
#include "nnls/grid.hpp"
#include "nnls/potential.hpp"

namespace nnls::testing {

// Sum of a few Gaussian bumps, zero on the box surface.
inline Field smooth_field(const GridSpec& g, std::mt19937_64& rng, double amp_lo, double amp_hi, double spread) {
  std::uniform_real_distribution<double> amp(amp_lo, amp_hi);
  std::uniform_real_distribution<double> pos(-spread, spread);
  std::uniform_real_distribution<double> width(0.3, 0.8);
  Field f(g);
  for (int b = 0; b < 3; ++b) {
    Point c{0.0, 0.0, 0.0};
    for (int a = 0; a < g.dim; ++a) c[a] = pos(rng);
    const double A = amp(rng);
    const double w = width(rng);
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double r = distance(g.point(j), c, g.dim);
      f[j] += A * std::exp(-r * r / (w * w));
    }
  }
  f.zero_boundary();
  return f;
}

// Positive pair with v / u in [0.7, 1.3], away from the coordinate axes.
inline PairField smooth_pair(const GridSpec& g, std::mt19937_64& rng, double amp_lo = 0.1, double amp_hi = 0.6,
                             double spread = 0.8) {
  Field u = smooth_field(g, rng, amp_lo, amp_hi, spread);
  Field w = smooth_field(g, rng, -1.0, 1.0, spread);
  w *= 1.0 / w.max_abs();
  Field v = u;
  for (std::size_t j = 0; j < g.size(); ++j) v[j] *= 1.0 + 0.3 * w[j];
  return PairField(std::move(u), std::move(v));
}

// Independent signed components.
inline PairField smooth_direction(const GridSpec& g, std::mt19937_64& rng, double amp = 0.5, double spread = 1.5) {
  Field u = smooth_field(g, rng, -amp, amp, spread);
  Field v = smooth_field(g, rng, -amp, amp, spread);
  return PairField(std::move(u), std::move(v));
}

inline std::shared_ptr<const Potential> paper_potential(int dim, double L, int n) {
  PotentialSpec spec;
  spec.kind = PotentialKind::Paper;
  spec.wells.push_back(WellGeometry{});
  return std::make_shared<const Potential>(build_potential(spec, build_grid(dim, L, n)));
}

inline std::shared_ptr<const Potential> two_well_potential(double L, int n) {
  PotentialSpec spec;
  spec.kind = PotentialKind::MultiWell;
  WellGeometry a, b;
  a.center = {-3.0, 0.0, 0.0};
  b.center = {3.0, 0.0, 0.0};
  spec.wells = {a, b};
  return std::make_shared<const Potential>(build_potential(spec, build_grid(1, L, n)));
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace nnls::testing
