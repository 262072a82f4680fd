#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "nnls/grid.hpp"

namespace nnls {

enum class RegionShape { Ball, Box };

/// Nested regions around one potential well: inner (where the cutoff is 1),
/// middle (cutoff support) and outer (localization region for per-well
/// energies). Radii are in the shape's norm: Euclidean for Ball, max-norm
/// for Box.
struct WellGeometry {
  Point center{0.0, 0.0, 0.0};
  RegionShape shape = RegionShape::Ball;
  double inner = 1.0;
  double middle = 1.5;
  double outer = 2.0;
};

struct WellSpec {
  WellGeometry geometry;
  Field cutoff;
  std::vector<std::uint8_t> inner_mask;
  std::vector<std::uint8_t> middle_mask;
  std::vector<std::uint8_t> outer_mask;
  std::size_t minimizer_index = 0;
  Point minimizer{0.0, 0.0, 0.0};
  bool whole_domain = false;
};

enum class PotentialKind {
  Paper,      // (1 + |x|)^2
  MultiWell,  // (1 + min_i |x - c_i|)^2 over the declared well centers
  Constant,   // lambda
};

struct PotentialSpec {
  PotentialKind kind = PotentialKind::Paper;
  double lambda = 1.0;
  std::vector<WellGeometry> wells;
};

struct Potential {
  Field values;
  double alpha = 0.0;
  std::vector<WellSpec> wells;
  // Index of the outer region containing each node, or -1.
  std::vector<int> outer_label;
  // 1 on the union of inner regions (the set where h is left unmodified).
  std::vector<std::uint8_t> inner_union;

  const GridSpec& grid() const { return values.grid(); }
  std::size_t well_count() const { return wells.size(); }
};

double evaluate_potential(const PotentialSpec& spec, const Point& x, int dim);

/// Samples V, computes alpha, builds masks and cutoffs, and validates alpha > 0,
/// nesting/disjointness of the well regions and the strict-minimum condition
/// min_{inner} V < min_{discrete boundary of inner} V. Throws ConfigError
/// naming the failing well.
Potential build_potential(const PotentialSpec& spec, const GridSpec& grid);

/// Constant potential with one synthetic well covering the whole box; the
/// setting of the constant-coefficient ground-state problem.
Potential constant_domain_potential(const GridSpec& grid, double lambda);

/// Quintic C^2 ramp: 1 on the inner region, 0 outside the middle region.
Field build_cutoff(const WellGeometry& well, const GridSpec& grid);

/// 6z^5 - 15z^4 + 10z^3 on [0, 1], clamped outside; derivatives to order 4.
double smoothstep(double z);
double smoothstep_derivative(double z, int order);

double region_distance(const WellGeometry& well, const Point& x, int dim);

}  // namespace nnls
