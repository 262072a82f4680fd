#include "nnls/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nnls/discretization.hpp"
#include "nnls/error.hpp"
#include "nnls/linear_solve.hpp"

namespace nnls {

namespace {

Field hminus_gradient(const PairField& pair, const Functional& J) {
  PairField R = J_eps_grad(pair, J);
  R.u -= R.v;
  return std::move(R.u);
}

double dual_norm(const Field& g, const Functional& J) {
  if (g.max_abs() == 0.0) return 0.0;
  ShiftedOperator A{&J.V(), J.eps, 1.0, nullptr};
  const Field y = solve_shifted(A, g, 1e-12);
  return std::sqrt(std::max(0.0, 0.5 * l2_pairing(g, y)));
}

// (h_uu - 2 h_uv + h_vv)(P) on interior nodes
Field antisymmetric_curvature(const PairField& P, const Functional& J) {
  const GridSpec& g = P.grid();
  Field D(g);
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (g.on_boundary(j)) continue;
    const HSample h = J.nl(j, P.u[j], P.v[j]);
    D[j] = h.huu - 2.0 * h.huv + h.hvv;
  }
  return D;
}

double hminus_curvature(const Field& d, const Field& D, const Functional& J) {
  ShiftedOperator M{&J.V(), J.eps, 2.0, &D};
  const double num = l2_pairing(d, M.apply(d));
  const double den = 2.0 * inner_eps(d, d, J.V(), J.eps);
  return den > 0.0 ? num / den : std::numeric_limits<double>::infinity();
}

}  // namespace

double hminus_residual(const PairField& pair, const Functional& J) {
  return dual_norm(hminus_gradient(pair, J), J);
}

ReductionResult reduce(const PairField& pair, const Functional& J, const ReductionOptions& opts,
                       const Field* psi0) {
  if (!(opts.tol > 0.0)) throw ConfigError("reduction tolerance must be positive");
  if (!pair.u.all_finite() || !pair.v.all_finite()) throw SolverError("reduce: pair has non-finite values");

  ReductionResult res;
  res.psi = psi0 ? *psi0 : Field(pair.grid());
  res.concavity_certificate = std::numeric_limits<double>::infinity();

  PairField P = pair;
  P.add_antisymmetric(1.0, res.psi);
  Field g = hminus_gradient(P, J);
  double r = dual_norm(g, J);
  double F = -J_eps_value(P, J);

  for (int it = 0; it < opts.max_iters && r > opts.tol; ++it) {
    const Field D = antisymmetric_curvature(P, J);
    ShiftedOperator M{&J.V(), J.eps, 2.0, &D};
    LinearSolveStats stats;
    Field step;
    try {
      step = solve_shifted(M, g, std::min(1e-2, 0.1 * opts.tol / std::max(r, opts.tol)), &stats);
    } catch (const SolverError& e) {
      throw SolverError(std::string("reduce: inner system lost positive definiteness: ") + e.what());
    }
    res.concavity_certificate = std::min(res.concavity_certificate, hminus_curvature(step, D, J));

    double tau = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 30; ++ls, tau *= 0.5) {
      PairField trial = P;
      trial.add_antisymmetric(tau, step);
      const double F_trial = -J_eps_value(trial, J);
      const Field g_trial = hminus_gradient(trial, J);
      const double r_trial = dual_norm(g_trial, J);
      if (F_trial <= F || r_trial < r) {
        res.psi.axpy(tau, step);
        P = std::move(trial);
        g = g_trial;
        r = r_trial;
        F = F_trial;
        accepted = true;
        break;
      }
    }
    res.iterations = it + 1;
    if (!accepted) break;
  }

  res.residual_norm = r;
  if (r > opts.tol) {
    std::ostringstream os;
    os << "reduce did not converge in " << res.iterations << " Newton steps (H- residual " << r << ", tol "
       << opts.tol << ")";
    throw SolverError(os.str());
  }

  // one more curvature sample along a fixed smooth probe and along psi
  const Field D = antisymmetric_curvature(P, J);
  const Field probe = res.psi.max_abs() > 0.0 ? res.psi : [&] {
    Field f(P.grid());
    for (std::size_t j = 0; j < f.size(); ++j)
      if (!f.grid().on_boundary(j)) f[j] = 1.0;
    return f;
  }();
  res.concavity_certificate = std::min(res.concavity_certificate, hminus_curvature(probe, D, J));
  if (!(res.concavity_certificate > 0.0)) {
    std::ostringstream os;
    os << "reduce: non-positive curvature " << res.concavity_certificate << " along H-";
    throw SolverError(os.str());
  }
  return res;
}

double reduced_energy(const PairField& pair, const Functional& J, const ReductionOptions& opts) {
  const ReductionResult r = reduce(pair, J, opts);
  PairField P = pair;
  P.add_antisymmetric(1.0, r.psi);
  return J_eps_value(P, J);
}

}  // namespace nnls
