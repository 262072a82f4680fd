#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nnls/nonlinearity.hpp"

namespace nnls {

struct HypothesisRecord {
  std::string name;
  bool passed = false;
  // Positive iff the hypothesis holds on the samples. For existence-type
  // constants (h4, h6, hm) it is the reciprocal of the fitted constant.
  double margin = 0.0;
  // The fitted quantity itself (delta', delta'', growth constant, ...).
  double value = 0.0;
  double witness_s = 0.0;
  double witness_t = 0.0;
  std::string detail;
};

struct HypothesisReport {
  std::vector<HypothesisRecord> records;
  bool all_passed() const;
  const HypothesisRecord& at(const std::string& name) const;
};

struct SampleBox {
  double s_min = 0.01;
  double s_max = 2.0;
};

/// Samples (s, t) uniformly in (s_min, s_max]^2 and reports the worst margin of
/// each hypothesis: h1 sign conditions (including the zero set), h2 growth
/// from below, h3 matrix inequality (best feasible delta'), h4 growth bound,
/// h5 (best feasible delta''), h6 for mu in {0.01, 0.1, 1}, and hm for h~.
HypothesisReport check_hypotheses(const NonlinParams& params, const SampleBox& box, int n_samples,
                                  std::uint64_t seed = 1);

/// Best delta with |grad h~(s, t)| <= delta * rho over the samples.
double hm_constant(const NonlinParams& params, const SampleBox& box, int n_samples, std::uint64_t seed = 1);

}  // namespace nnls
