#include "nnls/linear_solve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nnls/discretization.hpp"
#include "nnls/error.hpp"

namespace nnls {

Field ShiftedOperator::apply(const Field& x) const {
  Field y = apply_schrodinger(x, *V, eps);
  if (scale != 1.0) y *= scale;
  if (shift) {
    const auto& g = x.grid();
    for (std::size_t j = 0; j < x.size(); ++j)
      if (!g.on_boundary(j)) y[j] += (*shift)[j] * x[j];
  }
  return y;
}

Field ShiftedOperator::diagonal() const {
  const auto& g = V->grid();
  const double lap = 2.0 * g.dim * eps * eps / (g.spacing * g.spacing);
  Field d(g);
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (g.on_boundary(j)) continue;
    d[j] = scale * (lap + (*V)[j]) + (shift ? (*shift)[j] : 0.0);
  }
  return d;
}

namespace {

[[noreturn]] void not_definite(double curvature, const char* where) {
  std::ostringstream os;
  os << "operator is not positive definite (" << where << " curvature " << curvature << ")";
  throw SolverError(os.str());
}

Field solve_tridiagonal(const ShiftedOperator& op, const Field& rhs, LinearSolveStats* stats) {
  const auto& g = rhs.grid();
  const int n = g.n;
  const int m = n - 2;
  const Field diag = op.diagonal();
  const double off = -op.scale * op.eps * op.eps / (g.spacing * g.spacing);

  std::vector<double> piv(m), y(m);
  double min_piv = std::numeric_limits<double>::infinity();
  for (int i = 0; i < m; ++i) {
    piv[i] = diag[i + 1] - (i > 0 ? off * off / piv[i - 1] : 0.0);
    min_piv = std::min(min_piv, piv[i]);
    if (!(piv[i] > 0.0)) not_definite(piv[i], "pivot");
    y[i] = rhs[i + 1] - (i > 0 ? off * y[i - 1] / piv[i - 1] : 0.0);
  }
  Field x(g);
  for (int i = m - 1; i >= 0; --i) x[i + 1] = (y[i] - (i + 1 < m ? off * x[i + 2] : 0.0)) / piv[i];

  if (stats) {
    stats->iterations = 1;
    stats->min_curvature = min_piv;
    const Field r = rhs - op.apply(x);
    const double nb = l2_norm(rhs);
    stats->relative_residual = nb > 0.0 ? l2_norm(r) / nb : 0.0;
  }
  return x;
}

Field solve_pcg(const ShiftedOperator& op, const Field& rhs, double rtol, LinearSolveStats* stats, int max_iters) {
  const auto& g = rhs.grid();
  const auto interior = interior_indices(g);
  const Field diag = op.diagonal();
  if (max_iters <= 0) max_iters = static_cast<int>(std::min<std::size_t>(interior.size(), 20000));

  auto dot = [&](const Field& a, const Field& b) {
    double s = 0.0;
    for (auto j : interior) s += a[j] * b[j];
    return s;
  };

  Field x(g), r = rhs, z(g), p(g);
  r.zero_boundary();
  const double nb = std::sqrt(dot(r, r));
  double min_curv = std::numeric_limits<double>::infinity();
  int it = 0;
  double rel = 0.0;
  if (nb > 0.0) {
    for (auto j : interior) z[j] = r[j] / diag[j];
    p = z;
    double rz = dot(r, z);
    for (it = 1; it <= max_iters; ++it) {
      const Field Ap = op.apply(p);
      const double pAp = dot(p, Ap);
      const double pp = dot(p, p);
      if (!(pAp > 0.0)) not_definite(pAp / pp, "search direction");
      min_curv = std::min(min_curv, pAp / pp);
      const double alpha = rz / pAp;
      x.axpy(alpha, p);
      r.axpy(-alpha, Ap);
      rel = std::sqrt(dot(r, r)) / nb;
      if (rel <= rtol) break;
      for (auto j : interior) z[j] = r[j] / diag[j];
      const double rz_new = dot(r, z);
      const double beta = rz_new / rz;
      rz = rz_new;
      for (auto j : interior) p[j] = z[j] + beta * p[j];
    }
    if (rel > rtol) {
      std::ostringstream os;
      os << "CG did not converge in " << max_iters << " iterations (relative residual " << rel << ")";
      throw SolverError(os.str());
    }
  }
  if (stats) {
    stats->iterations = it;
    stats->relative_residual = rel;
    stats->min_curvature = std::isfinite(min_curv) ? min_curv : 0.0;
  }
  return x;
}

}  // namespace

Field solve_shifted(const ShiftedOperator& op, const Field& rhs, double rtol, LinearSolveStats* stats,
                    int max_iters) {
  if (!op.V) throw Error("ShiftedOperator without potential");
  require_same_grid(rhs, *op.V);
  if (op.shift) require_same_grid(rhs, *op.shift);
  if (rhs.grid().dim == 1) return solve_tridiagonal(op, rhs, stats);
  return solve_pcg(op, rhs, rtol, stats, max_iters);
}

}  // namespace nnls
