#pragma once

#include <string>
#include <vector>

#include "nnls/energy.hpp"
#include "nnls/reduction.hpp"

namespace nnls {

/// P(t) = base + sum_i t_i components[i], one component per well.
struct ScaleFamily {
  PairField base;
  std::vector<PairField> components;

  std::size_t size() const { return components.size(); }
  PairField at(const std::vector<double>& t) const;
};

/// base = 0, components = the given per-well pairs.
ScaleFamily ansatz_family(std::vector<PairField> components);

/// components[i] = phi_i * pair, base = (1 - sum phi_i) * pair, so P(1) = pair.
ScaleFamily projection_family(const PairField& pair, const Potential& potential);

struct NehariOptions {
  double tol = 1e-10;  // on each normalized scale residual
  ReductionOptions reduction{1e-10, 50};
  int max_evaluations = 100;
  double bracket_lo = 0.2;
  double bracket_hi = 1.8;
};

struct NehariState {
  PairField pair;
  std::vector<double> t;
  Field psi;
  std::vector<double> scale_residuals;
  double hminus_residual = 0.0;
  std::vector<double> mass_margins;

  bool is_member(double scale_tol, double hminus_tol) const;
};

/// J'(pair)(phi_i u, phi_i v) / ||(phi_i u, phi_i v)||_eps for every well.
std::vector<double> nehari_scale_conditions(const PairField& pair, const Functional& J);

/// int_{inner_i} (u^2 + v^2) - eps^4 for every well.
std::vector<double> mass_margins(const PairField& pair, const Functional& J);

/// Measures every membership quantity directly on the pair.
NehariState measure_state(const PairField& pair, const Functional& J);

/// theta_i(t): reduce P(t), then the normalized derivative along
/// (phi_i u_t, phi_i v_t). psi, if given, is the warm start and receives the
/// corrector.
std::vector<double> scale_residual(const std::vector<double>& t, const ScaleFamily& family, const Functional& J,
                                   const ReductionOptions& opts, Field* psi = nullptr);

struct ScaleSolution {
  std::vector<double> t;
  Field psi;
  std::vector<double> residuals;
  int evaluations = 0;
  // +1 when theta_i > 0 below the root, -1 otherwise; 0 when no bracket was needed.
  std::vector<int> sign;
};

/// Root of theta on [0, 2]^k: quasi-Newton from t = 1, falling back to
/// bracketed per-coordinate Illinois iterations. Throws ManifoldError when no
/// sign bracket exists.
ScaleSolution solve_scales(const ScaleFamily& family, const Functional& J, const NehariOptions& opts,
                           std::vector<double> t0 = {});

/// Solves the scale conditions and the inner reduction jointly for
/// projection_family(pair). Throws ManifoldError when the mass condition fails.
NehariState project_to_nehari(const PairField& pair, const Functional& J, const NehariOptions& opts = {});

/// The s > 0 with J'(s P)(s P) = 0 (the classical Nehari fiber through P,
/// without the inner reduction). Throws ManifoldError when <u, v>_eps <= 0 or
/// no root lies in [1e-3, 1e3].
double nehari_fiber_scale(const PairField& pair, const Functional& J);

/// Projects the ansatz family itself (t starts at 1).
NehariState project_family(const ScaleFamily& family, const Functional& J, const NehariOptions& opts = {});

struct MinimizeOptions {
  double tol = 1e-7;  // l2 norm of the strong residual
  int max_iters = 20000;
  double armijo = 1e-4;
  int max_shrinks = 20;
  int stagnation_window = 10;
  double stagnation_decrease = 1e-14;
  NehariOptions nehari;
};

struct Solution {
  PairField pair;
  EnergyBreakdown energy;
  double residual_norm = 0.0;
  NehariState nehari;
  int iterations = 0;
  std::vector<double> energy_history;
};

/// Sobolev-gradient descent on N_eps: step along -A^{-1} R, re-project,
/// Armijo backtracking. Stops when the full residual is below opts.tol.
Solution minimize_on_nehari(const NehariState& start, const Functional& J, const MinimizeOptions& opts = {});

/// Sum over wells of phi_i(x) U_i((x - x_i) / eps), with U_i sampled from the
/// profile grid by linear interpolation. edge_amplitude (optional) receives
/// the largest profile value the cutoffs remove.
std::vector<PairField> ansatz_components(const std::vector<PairField>& profiles, const Potential& potential,
                                         double eps, double* edge_amplitude = nullptr);
PairField build_ansatz(const std::vector<PairField>& profiles, const Potential& potential, double eps);

/// Maps a solution at eps_from onto eps_to by stretching about each well
/// minimizer (nearest well for nodes outside every outer region).
PairField rescale_pair(const PairField& pair, const Potential& potential, double eps_from, double eps_to);

struct AprioriQuantities {
  double eps = 0.0;
  double norm2 = 0.0;        // ||(u, v)||_eps^2
  double well_mass = 0.0;    // sum_i int_{inner_i} u^2 + v^2
  double well_gradient = 0.0;  // sum_i eps^2 int_{inner_i} |grad u|^2 + |grad v|^2
  double energy = 0.0;
};

AprioriQuantities apriori_quantities(const PairField& pair, const Functional& J);

struct AprioriReport {
  std::vector<AprioriQuantities> samples;
  bool exponents_defined = false;
  double norm2_exponent = 0.0;
  double mass_exponent = 0.0;
  double gradient_exponent = 0.0;
  double energy_exponent = 0.0;
  bool energy_positive = false;
  std::string note;
};

/// Log-log slopes of the quantities against eps across a sweep.
AprioriReport verify_apriori_bounds(std::vector<AprioriQuantities> samples);

/// Least-squares slope and r^2 of y against x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace nnls
