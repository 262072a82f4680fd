#pragma once

#include "nnls/energy.hpp"

namespace nnls {

struct ReductionOptions {
  double tol = 1e-9;
  int max_iters = 50;
};

struct ReductionResult {
  Field psi;
  int iterations = 0;
  double residual_norm = 0.0;
  // Smallest sampled curvature of F = -J along H^-, measured in the norm of
  // (phi, -phi) in H x H. Positive on success.
  double concavity_certificate = 0.0;
};

/// Dual norm of phi -> J'(pair)(phi, -phi) with respect to ||(phi, -phi)||_eps.
double hminus_residual(const PairField& pair, const Functional& J);

/// Finds psi maximizing J((u + psi, v - psi)) by damped Newton. Throws
/// SolverError on non-convergence or loss of definiteness.
ReductionResult reduce(const PairField& pair, const Functional& J, const ReductionOptions& opts = {},
                       const Field* psi0 = nullptr);

/// J at the corrected pair.
double reduced_energy(const PairField& pair, const Functional& J, const ReductionOptions& opts = {});

}  // namespace nnls
