#include "nnls/discretization.hpp"

#include <cmath>

namespace nnls {

std::vector<std::size_t> interior_indices(const GridSpec& grid) {
  std::vector<std::size_t> out;
  const int m = grid.n - 2;
  std::size_t count = 1;
  for (int a = 0; a < grid.dim; ++a) count *= static_cast<std::size_t>(m);
  out.reserve(count);
  MultiIndex idx{1, 1, 1};
  for (int a = grid.dim; a < 3; ++a) idx[a] = 0;
  for (std::size_t c = 0; c < count; ++c) {
    out.push_back(grid.flat(idx));
    for (int a = grid.dim - 1; a >= 0; --a) {
      if (++idx[a] <= grid.n - 2) break;
      idx[a] = 1;
    }
  }
  return out;
}

Field laplacian_apply(const Field& f) {
  const GridSpec& g = f.grid();
  Field out(g);
  const double inv_h2 = 1.0 / (g.spacing * g.spacing);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const MultiIndex idx = g.index(j);
    double acc = 0.0;
    for (int a = 0; a < g.dim; ++a) {
      const std::size_t s = g.stride(a);
      const double left = idx[a] > 0 ? f[j - s] : 0.0;
      const double right = idx[a] < g.n - 1 ? f[j + s] : 0.0;
      acc += left + right - 2.0 * f[j];
    }
    out[j] = acc * inv_h2;
  }
  return out;
}

Field apply_schrodinger(const Field& f, const Field& V, double eps) {
  require_same_grid(f, V);
  const GridSpec& g = f.grid();
  Field out(g);
  const double c = eps * eps / (g.spacing * g.spacing);
  std::size_t strides[3];
  for (int a = 0; a < g.dim; ++a) strides[a] = g.stride(a);
  for (std::size_t j : interior_indices(g)) {
    double acc = 0.0;
    for (int a = 0; a < g.dim; ++a) acc += 2.0 * f[j] - f[j - strides[a]] - f[j + strides[a]];
    out[j] = c * acc + V[j] * f[j];
  }
  return out;
}

namespace {

// Visits every axis edge (j, j + stride) with its transverse trapezoid factor.
template <typename Fn>
void for_each_edge(const GridSpec& g, Fn&& fn) {
  for (std::size_t j = 0; j < g.size(); ++j) {
    const MultiIndex idx = g.index(j);
    double boundary_factor_all = 1.0;
    for (int a = 0; a < g.dim; ++a)
      if (idx[a] == 0 || idx[a] == g.n - 1) boundary_factor_all *= 0.5;
    for (int a = 0; a < g.dim; ++a) {
      if (idx[a] == g.n - 1) continue;
      // transverse weight excludes axis a itself
      double w = boundary_factor_all;
      if (idx[a] == 0) w *= 2.0;
      fn(j, j + g.stride(a), w);
    }
  }
}

}  // namespace

double inner_eps(const Field& f, const Field& w, const Field& V, double eps) {
  require_same_grid(f, w);
  require_same_grid(f, V);
  const GridSpec& g = f.grid();
  double potential = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) potential += g.trapezoid_weight(j) * V[j] * f[j] * w[j];
  double kinetic = 0.0;
  for_each_edge(g, [&](std::size_t a, std::size_t b, double tw) {
    kinetic += tw * (f[b] - f[a]) * (w[b] - w[a]);
  });
  kinetic *= g.cell_volume() / (g.spacing * g.spacing);
  return eps * eps * kinetic + potential;
}

double norm_eps(const PairField& pair, const Field& V, double eps) {
  return inner_eps(pair.u, pair.u, V, eps) + inner_eps(pair.v, pair.v, V, eps);
}

double integrate(const Field& f) {
  const GridSpec& g = f.grid();
  double s = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) s += g.trapezoid_weight(j) * f[j];
  return s;
}

double l2_pairing(const Field& a, const Field& b) {
  require_same_grid(a, b);
  const GridSpec& g = a.grid();
  double s = 0.0;
  for (std::size_t j : interior_indices(g)) s += a[j] * b[j];
  return s * g.cell_volume();
}

double l2_norm(const Field& a) { return std::sqrt(l2_pairing(a, a)); }

double l2_norm(const PairField& a) {
  return std::sqrt(l2_pairing(a.u, a.u) + l2_pairing(a.v, a.v));
}

double masked_mass(const Field& f, const std::vector<std::uint8_t>& mask) {
  const GridSpec& g = f.grid();
  double s = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j)
    if (mask[j]) s += g.trapezoid_weight(j) * f[j] * f[j];
  return s;
}

double masked_gradient_energy(const Field& f, const std::vector<std::uint8_t>& mask, double eps) {
  const GridSpec& g = f.grid();
  double s = 0.0;
  for_each_edge(g, [&](std::size_t a, std::size_t b, double tw) {
    if (mask[a] && mask[b]) s += tw * (f[b] - f[a]) * (f[b] - f[a]);
  });
  return eps * eps * s * g.cell_volume() / (g.spacing * g.spacing);
}

}  // namespace nnls

namespace nnls {

double sample_linear(const Field& f, const Point& x) {
  const GridSpec& g = f.grid();
  int base[3] = {0, 0, 0};
  double frac[3] = {0.0, 0.0, 0.0};
  for (int a = 0; a < g.dim; ++a) {
    const double r = (x[a] + g.half_extent) / g.spacing;
    if (r < 0.0 || r > g.n - 1) return 0.0;
    int i = static_cast<int>(std::floor(r));
    if (i >= g.n - 1) i = g.n - 2;
    base[a] = i;
    frac[a] = r - i;
  }
  double acc = 0.0;
  const int corners = 1 << g.dim;
  for (int c = 0; c < corners; ++c) {
    double w = 1.0;
    MultiIndex idx{0, 0, 0};
    for (int a = 0; a < g.dim; ++a) {
      const int bit = (c >> a) & 1;
      idx[a] = base[a] + bit;
      w *= bit ? frac[a] : 1.0 - frac[a];
    }
    if (w != 0.0) acc += w * f[g.flat(idx)];
  }
  return acc;
}

}  // namespace nnls
