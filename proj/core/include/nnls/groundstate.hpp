#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nnls/nehari.hpp"

namespace nnls {

/// Positive even solution of -w'' + lambda w = 3p w^(2p-1) on the line,
/// w = (lambda (s+1) / (2K))^(1/(s-1)) sech^(2/(s-1))(sqrt(lambda) (s-1) x / 2)
/// with s = 2p - 1, K = 3p. Throws ConfigError unless d = 1.
Field explicit_scalar_solution(double lambda, double p, const GridSpec& grid);

struct GroundStateOptions {
  MinimizeOptions minimize;
  int starts = 3;
  std::uint64_t seed = 1;
};

struct GroundState {
  double lambda = 0.0;
  PairField pair;
  double level = 0.0;
  double residual_norm = 0.0;
  std::string method;  // "nehari-diagonal" or "explicit-oracle"
  int converged_starts = 0;
  std::vector<double> start_levels;
  // d = 1, p = q only: energy of the explicit diagonal pair and the sup
  // distance from it.
  bool has_oracle = false;
  double oracle_level = 0.0;
  double oracle_linf = 0.0;
};

/// Minimizes I_lambda over its Nehari manifold (eps = 1, V = lambda, one well
/// spanning the box, h unmodified) from several starts and keeps the lowest
/// level.
GroundState compute_ground_state(double lambda, const NonlinParams& params, const GridSpec& grid,
                                 const GroundStateOptions& opts = {});

struct MonotonicityReport {
  bool increasing = false;
  std::vector<double> lambdas;
  std::vector<double> levels;
  std::vector<double> margins;  // c(lambda_{k+1}) - c(lambda_k)
  // first violating pair when not increasing
  double witness_lo = 0.0;
  double witness_hi = 0.0;
};

/// Throws ConfigError for fewer than three levels or repeated lambda.
MonotonicityReport check_c_monotonicity(std::vector<std::pair<double, double>> levels);

/// 2/(p+q-2) + 1 - d/2, the exponent of lambda in c(lambda).
double scaling_exponent(const NonlinParams& params, int dim);

/// Log-log slope of c against lambda.
LineFit fit_scaling(const std::vector<std::pair<double, double>>& levels);

}  // namespace nnls
