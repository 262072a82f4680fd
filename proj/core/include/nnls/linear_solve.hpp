#pragma once

#include "nnls/grid.hpp"

namespace nnls {

/// The operator x -> scale * (-eps^2 Lap + V) x + shift * x restricted to the
/// interior nodes (Dirichlet data on the box surface). shift may be null.
struct ShiftedOperator {
  const Field* V = nullptr;
  double eps = 1.0;
  double scale = 1.0;
  const Field* shift = nullptr;

  Field apply(const Field& x) const;
  Field diagonal() const;
};

struct LinearSolveStats {
  int iterations = 0;
  double relative_residual = 0.0;
  // Smallest curvature x^T M x / x^T x seen by the solver (pivots for the
  // direct path, search directions for CG).
  double min_curvature = 0.0;
};

/// Solves M x = rhs on the interior. d = 1 uses an LDL^T tridiagonal
/// factorization; d >= 2 uses Jacobi-preconditioned CG to the relative
/// tolerance rtol. Throws SolverError when M is found not positive definite.
Field solve_shifted(const ShiftedOperator& op, const Field& rhs, double rtol, LinearSolveStats* stats = nullptr,
                    int max_iters = 0);

}  // namespace nnls
