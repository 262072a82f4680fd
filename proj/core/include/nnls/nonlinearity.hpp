#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace nnls {

/// h(s, t) = m(s) m(t) [c_u s^(p+q) + c_v t^(p+q) + c_cross s^p t^q + c_bilinear s t]
/// for s, t > 0 and 0 otherwise. m is a C^2 ramp that vanishes below sigma and
/// equals 1 above 2 sigma, so h is C^2 across the coordinate axes.
struct NonlinParams {
  double p = 2.5;
  double q = 2.5;
  double a = 0.1;  // radius of the quadratic prolongation
  double sigma = 1e-3;
  double c_u = 1.0;
  double c_v = 1.0;
  double c_cross = 1.0;
  double c_bilinear = 0.0;
  bool mollify = true;

  /// Throws ConfigError unless 2 < p, q < 3, a > 0 and sigma > 0.
  void validate() const;
};

struct HSample {
  double h = 0.0;
  double hu = 0.0;
  double hv = 0.0;
  double huu = 0.0;
  double huv = 0.0;
  double hvv = 0.0;
};

/// partial[i][j] = d^i/ds^i d^j/dt^j h(s, t), valid for i + j <= max_order <= 4.
using HPartials = std::array<std::array<double, 5>, 5>;
HPartials h_partials(double s, double t, const NonlinParams& params, int max_order);

HSample h_eval(double s, double t, const NonlinParams& params);

/// Equal to h for rho = |(s, t)| <= a; beyond a, the second-order Taylor
/// polynomial of rho -> h(rho, theta) at rho = a with theta frozen.
HSample h_tilde_eval(double s, double t, const NonlinParams& params);

/// h(x, (s, t)): h on the union of inner well regions, h~ elsewhere.
class SpatialNonlinearity {
 public:
  SpatialNonlinearity() = default;
  SpatialNonlinearity(NonlinParams params, std::vector<std::uint8_t> inside);

  const NonlinParams& params() const { return params_; }
  const std::vector<std::uint8_t>& inside() const { return inside_; }

  HSample operator()(std::size_t node, double s, double t) const {
    return inside_[node] ? h_eval(s, t, params_) : h_tilde_eval(s, t, params_);
  }

  /// Same params with the modification switched off everywhere.
  SpatialNonlinearity unmodified() const;

 private:
  NonlinParams params_;
  std::vector<std::uint8_t> inside_;
};

HSample h_spatial(std::size_t node, double s, double t, const SpatialNonlinearity& nl);

}  // namespace nnls
