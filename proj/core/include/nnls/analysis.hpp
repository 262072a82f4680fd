#pragma once

#include <string>
#include <vector>

#include "nnls/energy.hpp"
#include "nnls/nehari.hpp"

namespace nnls {

struct WellMaxima {
  std::size_t index_u = 0;
  std::size_t index_v = 0;
  Point x_u{};
  Point x_v{};
  double max_u = 0.0;
  double max_v = 0.0;
  double xi = 0.0;  // |x_u - x_v| / eps
  double V_u = 0.0;
  double V_v = 0.0;
  double min_V = 0.0;  // min of V over the inner region
  bool interior = false;
};

struct SpuriousMaximum {
  std::size_t index = 0;
  Point x{};
  double amplitude = 0.0;
};

struct ConcentrationReport {
  std::vector<WellMaxima> wells;
  std::vector<SpuriousMaximum> spurious;
  bool all_interior = false;
};

/// Per-well argmax of u and v over the inner region, plus local maxima of
/// max(u, v) outside every inner region above floor.
ConcentrationReport find_maxima(const PairField& pair, const Potential& potential, double eps,
                                double floor = 1e-3);

struct DecayWindow {
  double r_min = 0.0;
  double r_max = 0.0;
};

struct DecayFit {
  bool ok = false;
  std::string failure;
  Point center{};
  double slope = 0.0;      // decay rate, 1/length
  double intercept = 0.0;  // log of the prefactor
  double r_squared = 0.0;
  DecayWindow window;
  std::vector<double> r;
  std::vector<double> log_max;
};

/// [3 eps, min(distance to the box edge, distance to the nearest other well) / 1.5]
DecayWindow default_decay_window(const Potential& potential, std::size_t well, double eps);

/// Linear fit of log max_{|x - c| in [r, r + dx)} field against r.
DecayFit decay_fit(const Field& field, const Point& center, double eps, const DecayWindow& window);

struct ModificationReport {
  bool passed = false;
  double sup_outside = 0.0;
  std::size_t witness = 0;
  Point witness_x{};
  double a = 0.0;
  double modified_residual = 0.0;
  double unmodified_residual = 0.0;
  // max-norm of the difference between the two strong residuals
  double residual_difference = 0.0;
};

ModificationReport modification_check(const PairField& pair, const Functional& J);

struct LocalizationReport {
  std::vector<double> per_well_gap;
  double total_gap = 0.0;
  double exterior_fraction = 0.0;
  std::vector<double> per_well_scaled;  // J^i / eps^d
  double total_scaled = 0.0;
};

LocalizationReport energy_localization(const EnergyBreakdown& energy, double eps, int dim,
                                       const std::vector<double>& c_targets);

}  // namespace nnls
