#include "nnls/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nnls/discretization.hpp"
#include "nnls/error.hpp"

namespace nnls {

double smoothstep(double z) {
  if (z <= 0.0) return 0.0;
  if (z >= 1.0) return 1.0;
  return z * z * z * (10.0 + z * (-15.0 + 6.0 * z));
}

double smoothstep_derivative(double z, int order) {
  if (order == 0) return smoothstep(z);
  if (z <= 0.0 || z >= 1.0) return 0.0;
  switch (order) {
    case 1: return 30.0 * z * z * (1.0 - z) * (1.0 - z);
    case 2: return 60.0 * z - 180.0 * z * z + 120.0 * z * z * z;
    case 3: return 60.0 - 360.0 * z + 360.0 * z * z;
    case 4: return -360.0 + 720.0 * z;
    default: return 0.0;
  }
}

double region_distance(const WellGeometry& well, const Point& x, int dim) {
  if (well.shape == RegionShape::Ball) return distance(x, well.center, dim);
  double m = 0.0;
  for (int a = 0; a < dim; ++a) m = std::max(m, std::abs(x[a] - well.center[a]));
  return m;
}

double evaluate_potential(const PotentialSpec& spec, const Point& x, int dim) {
  switch (spec.kind) {
    case PotentialKind::Paper: {
      const double r = distance(x, Point{0.0, 0.0, 0.0}, dim);
      return (1.0 + r) * (1.0 + r);
    }
    case PotentialKind::MultiWell: {
      double r = std::numeric_limits<double>::infinity();
      for (const auto& w : spec.wells) r = std::min(r, distance(x, w.center, dim));
      if (spec.wells.empty()) r = distance(x, Point{0.0, 0.0, 0.0}, dim);
      return (1.0 + r) * (1.0 + r);
    }
    case PotentialKind::Constant:
      return spec.lambda;
  }
  return 0.0;
}

namespace {

// Nodes inside a region of the given radius (closed, up to round-off).
bool inside(const WellGeometry& w, const Point& x, int dim, double radius) {
  return region_distance(w, x, dim) <= radius * (1.0 + 1e-12) + 1e-14;
}

std::string well_name(std::size_t i) {
  std::ostringstream os;
  os << "well " << i;
  return os.str();
}

}  // namespace

Field build_cutoff(const WellGeometry& well, const GridSpec& grid) {
  const double width = well.middle - well.inner;
  if (!(width >= 3.0 * grid.spacing * (1.0 - 1e-12)))
    throw ConfigError("cutoff transition is thinner than 3 grid cells");
  Field phi(grid);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double d = region_distance(well, grid.point(j), grid.dim);
    phi[j] = 1.0 - smoothstep((d - well.inner) / width);
  }
  return phi;
}

Potential build_potential(const PotentialSpec& spec, const GridSpec& grid) {
  Potential pot;
  pot.values = Field(grid);
  for (std::size_t j = 0; j < grid.size(); ++j)
    pot.values[j] = evaluate_potential(spec, grid.point(j), grid.dim);
  pot.alpha = std::numeric_limits<double>::infinity();
  for (double v : pot.values.values()) {
    if (!std::isfinite(v)) throw ConfigError("potential is not finite on the grid");
    pot.alpha = std::min(pot.alpha, v);
  }
  if (!(pot.alpha > 0.0)) {
    std::ostringstream os;
    os << "potential infimum alpha = " << pot.alpha << " must be positive";
    throw ConfigError(os.str());
  }

  pot.outer_label.assign(grid.size(), -1);
  pot.inner_union.assign(grid.size(), 0);
  const double L = grid.half_extent;
  for (std::size_t i = 0; i < spec.wells.size(); ++i) {
    const WellGeometry& geo = spec.wells[i];
    if (!(geo.inner > 0.0 && geo.inner < geo.middle && geo.middle < geo.outer))
      throw ConfigError(well_name(i) + ": radii must satisfy 0 < inner < middle < outer");
    if (geo.outer - geo.middle < 2.0 * grid.spacing * (1.0 - 1e-12))
      throw ConfigError(well_name(i) + ": outer region must exceed the middle region by 2 cells");
    for (int a = 0; a < grid.dim; ++a) {
      if (std::abs(geo.center[a]) + geo.outer > L - grid.spacing * (1.0 - 1e-12))
        throw ConfigError(well_name(i) + ": outer region does not fit inside the box");
    }

    WellSpec w;
    w.geometry = geo;
    w.cutoff = build_cutoff(geo, grid);
    w.inner_mask.assign(grid.size(), 0);
    w.middle_mask.assign(grid.size(), 0);
    w.outer_mask.assign(grid.size(), 0);
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const Point x = grid.point(j);
      w.inner_mask[j] = inside(geo, x, grid.dim, geo.inner);
      w.middle_mask[j] = inside(geo, x, grid.dim, geo.middle);
      w.outer_mask[j] = inside(geo, x, grid.dim, geo.outer);
      if (w.outer_mask[j]) {
        if (pot.outer_label[j] >= 0)
          throw ConfigError(well_name(i) + ": outer region overlaps " +
                            well_name(static_cast<std::size_t>(pot.outer_label[j])));
        pot.outer_label[j] = static_cast<int>(i);
      }
      if (w.inner_mask[j]) pot.inner_union[j] = 1;
    }

    // strict minimum: compare with the nodes adjacent to the inner region
    double inner_min = std::numeric_limits<double>::infinity();
    double boundary_min = std::numeric_limits<double>::infinity();
    bool any_inner = false;
    for (std::size_t j = 0; j < grid.size(); ++j) {
      if (!w.inner_mask[j]) continue;
      any_inner = true;
      if (pot.values[j] < inner_min) {
        inner_min = pot.values[j];
        w.minimizer_index = j;
      }
      const MultiIndex idx = grid.index(j);
      for (int a = 0; a < grid.dim; ++a) {
        const std::size_t s = grid.stride(a);
        if (idx[a] > 0 && !w.inner_mask[j - s]) boundary_min = std::min(boundary_min, pot.values[j - s]);
        if (idx[a] < grid.n - 1 && !w.inner_mask[j + s])
          boundary_min = std::min(boundary_min, pot.values[j + s]);
      }
    }
    if (!any_inner) throw ConfigError(well_name(i) + ": inner region contains no grid node");
    if (!(inner_min < boundary_min)) {
      std::ostringstream os;
      os << well_name(i) << " violates the strict local minimum condition: min over well = "
         << inner_min << ", min over its discrete boundary = " << boundary_min;
      throw ConfigError(os.str());
    }
    w.minimizer = grid.point(w.minimizer_index);
    pot.wells.push_back(std::move(w));
  }

  // no stencil edge may join two different outer regions
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (pot.outer_label[j] < 0) continue;
    const MultiIndex idx = grid.index(j);
    for (int a = 0; a < grid.dim; ++a) {
      if (idx[a] == grid.n - 1) continue;
      const int other = pot.outer_label[j + grid.stride(a)];
      if (other >= 0 && other != pot.outer_label[j])
        throw ConfigError("outer regions of " + well_name(static_cast<std::size_t>(pot.outer_label[j])) +
                          " and " + well_name(static_cast<std::size_t>(other)) + " touch");
    }
  }
  return pot;
}

Potential constant_domain_potential(const GridSpec& grid, double lambda) {
  if (!(lambda > 0.0)) throw ConfigError("constant potential level must be positive");
  Potential pot;
  pot.values = Field(grid, lambda);
  pot.alpha = lambda;
  WellSpec w;
  w.whole_domain = true;
  w.geometry.shape = RegionShape::Box;
  w.geometry.inner = grid.half_extent;
  w.geometry.middle = grid.half_extent;
  w.geometry.outer = grid.half_extent;
  w.cutoff = Field(grid, 1.0);
  w.inner_mask.assign(grid.size(), 1);
  w.middle_mask.assign(grid.size(), 1);
  w.outer_mask.assign(grid.size(), 1);
  w.minimizer_index = grid.size() / 2;
  w.minimizer = grid.point(w.minimizer_index);
  pot.wells.push_back(std::move(w));
  pot.outer_label.assign(grid.size(), 0);
  pot.inner_union.assign(grid.size(), 1);
  return pot;
}

}  // namespace nnls
