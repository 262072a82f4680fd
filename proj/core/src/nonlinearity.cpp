#include "nnls/nonlinearity.hpp"

#include <cmath>

#include "jet.hpp"
#include "nnls/error.hpp"
#include "nnls/potential.hpp"

namespace nnls {

void NonlinParams::validate() const {
  if (!(p > 2.0 && p < 3.0) || !(q > 2.0 && q < 3.0))
    throw ConfigError("exponents p and q must lie in (2, 3)");
  if (!(a > 0.0)) throw ConfigError("modification radius a must be positive");
  if (mollify && !(sigma > 0.0)) throw ConfigError("axis mollifier width sigma must be positive");
}

namespace {

// derivatives of the axis ramp m at x, orders 0..4
std::array<double, 5> ramp_derivatives(double x, const NonlinParams& prm) {
  std::array<double, 5> d{};
  if (!prm.mollify) {
    d[0] = x > 0.0 ? 1.0 : 0.0;
    return d;
  }
  const double z = (x - prm.sigma) / prm.sigma;
  double scale = 1.0;
  for (int k = 0; k <= 4; ++k) {
    d[k] = smoothstep_derivative(z, k) * scale;
    scale /= prm.sigma;
  }
  return d;
}

// derivatives of x^e at x > 0, orders 0..4
std::array<double, 5> power_derivatives(double x, double e) {
  std::array<double, 5> d{};
  double coef = 1.0;
  for (int k = 0; k <= 4; ++k) {
    d[k] = coef == 0.0 ? 0.0 : coef * std::pow(x, e - k);
    coef *= (e - k);
  }
  return d;
}

// derivatives of m(x) x^e via Leibniz
std::array<double, 5> factor_derivatives(const std::array<double, 5>& m, const std::array<double, 5>& pw,
                                         int max_order) {
  static constexpr double binom[5][5] = {
      {1, 0, 0, 0, 0}, {1, 1, 0, 0, 0}, {1, 2, 1, 0, 0}, {1, 3, 3, 1, 0}, {1, 4, 6, 4, 1}};
  std::array<double, 5> d{};
  for (int i = 0; i <= max_order; ++i)
    for (int l = 0; l <= i; ++l) d[i] += binom[i][l] * m[l] * pw[i - l];
  return d;
}

}  // namespace

HPartials h_partials(double s, double t, const NonlinParams& prm, int max_order) {
  HPartials out{};
  if (s <= 0.0 || t <= 0.0) return out;
  const auto ms = ramp_derivatives(s, prm);
  const auto mt = ramp_derivatives(t, prm);
  if (ms[0] == 0.0 && ms[1] == 0.0 && ms[2] == 0.0 && ms[3] == 0.0 && ms[4] == 0.0) return out;
  if (mt[0] == 0.0 && mt[1] == 0.0 && mt[2] == 0.0 && mt[3] == 0.0 && mt[4] == 0.0) return out;

  const double total = prm.p + prm.q;
  struct Monomial {
    double coef, es, et;
  };
  const Monomial terms[] = {{prm.c_u, total, 0.0},
                            {prm.c_v, 0.0, total},
                            {prm.c_cross, prm.p, prm.q},
                            {prm.c_bilinear, 1.0, 1.0}};
  for (const auto& m : terms) {
    if (m.coef == 0.0) continue;
    const auto fs = factor_derivatives(ms, power_derivatives(s, m.es), max_order);
    const auto ft = factor_derivatives(mt, power_derivatives(t, m.et), max_order);
    for (int i = 0; i <= max_order; ++i)
      for (int j = 0; i + j <= max_order; ++j) out[i][j] += m.coef * fs[i] * ft[j];
  }
  return out;
}

HSample h_eval(double s, double t, const NonlinParams& prm) {
  if (s <= 0.0 || t <= 0.0) return {};
  const bool plain = !prm.mollify || (s >= 2.0 * prm.sigma && t >= 2.0 * prm.sigma);
  if (plain) {
    // fast path: no ramp factors
    const double P = prm.p + prm.q;
    const double sP2 = std::pow(s, P - 2.0), tP2 = std::pow(t, P - 2.0);
    const double sp2 = std::pow(s, prm.p - 2.0), tq2 = std::pow(t, prm.q - 2.0);
    const double sp = sp2 * s * s, tq = tq2 * t * t;
    HSample r;
    r.h = prm.c_u * sP2 * s * s + prm.c_v * tP2 * t * t + prm.c_cross * sp * tq + prm.c_bilinear * s * t;
    r.hu = prm.c_u * P * sP2 * s + prm.c_cross * prm.p * sp2 * s * tq + prm.c_bilinear * t;
    r.hv = prm.c_v * P * tP2 * t + prm.c_cross * prm.q * sp * tq2 * t + prm.c_bilinear * s;
    r.huu = prm.c_u * P * (P - 1.0) * sP2 + prm.c_cross * prm.p * (prm.p - 1.0) * sp2 * tq;
    r.hvv = prm.c_v * P * (P - 1.0) * tP2 + prm.c_cross * prm.q * (prm.q - 1.0) * sp * tq2;
    r.huv = prm.c_cross * prm.p * prm.q * sp2 * s * tq2 * t + prm.c_bilinear;
    return r;
  }
  const HPartials d = h_partials(s, t, prm, 2);
  return {d[0][0], d[1][0], d[0][1], d[2][0], d[1][1], d[0][2]};
}

namespace {

using detail::Jet2;

// h composed with the jets (S, T), using partials at their constant terms.
Jet2 compose_h(const Jet2& S, const Jet2& T, const NonlinParams& prm) {
  const HPartials d = h_partials(S.value(), T.value(), prm, 4);
  const Jet2 dS = S.increment();
  const Jet2 dT = T.increment();
  std::array<Jet2, 5> pow_s, pow_t;
  pow_s[0] = pow_t[0] = Jet2::constant(1.0);
  for (int k = 1; k <= 4; ++k) {
    pow_s[k] = pow_s[k - 1] * dS;
    pow_t[k] = pow_t[k - 1] * dT;
  }
  static constexpr double fact[5] = {1, 1, 2, 6, 24};
  Jet2 r;
  for (int i = 0; i <= 4; ++i)
    for (int j = 0; i + j <= 4; ++j) {
      if (d[i][j] == 0.0) continue;
      r = r + (pow_s[i] * pow_t[j]) * (d[i][j] / (fact[i] * fact[j]));
    }
  return r;
}

}  // namespace

HSample h_tilde_eval(double s, double t, const NonlinParams& prm) {
  if (s <= 0.0 || t <= 0.0) return {};
  const double rho = std::hypot(s, t);
  if (rho <= prm.a) return h_eval(s, t, prm);

  const double theta = std::atan2(t, s);
  const double c = std::cos(theta), sn = std::sin(theta);

  // F(rho, theta) = h(rho cos theta, rho sin theta) expanded at (a, theta)
  const Jet2 R = Jet2::variable_x(prm.a);
  const Jet2 Th = Jet2::variable_y(theta);
  const Jet2 C = Th.compose({c, -sn, -c, sn, c});
  const Jet2 Sn = Th.compose({sn, c, -sn, -c, sn});
  const Jet2 F = compose_h(R * C, R * Sn, prm);

  // A, B, C of the prolongation A + B r + C r^2 / 2 and their theta derivatives
  const double A0 = F.coeff(0, 0), A1 = F.coeff(0, 1), A2 = 2.0 * F.coeff(0, 2);
  const double B0 = F.coeff(1, 0), B1 = F.coeff(1, 1), B2 = 2.0 * F.coeff(1, 2);
  const double C0 = 2.0 * F.coeff(2, 0), C1 = 2.0 * F.coeff(2, 1), C2 = 4.0 * F.coeff(2, 2);

  const double r = rho - prm.a;
  const double H = A0 + B0 * r + 0.5 * C0 * r * r;
  const double Hr = B0 + C0 * r;
  const double Hrr = C0;
  const double Ht = A1 + B1 * r + 0.5 * C1 * r * r;
  const double Hrt = B1 + C1 * r;
  const double Htt = A2 + B2 * r + 0.5 * C2 * r * r;

  // polar -> Cartesian chain rule
  const double rs = c, rt = sn;
  const double ts = -sn / rho, tt = c / rho;
  const double rss = sn * sn / rho, rst = -c * sn / rho, rtt = c * c / rho;
  const double rho2 = rho * rho;
  const double tss = 2.0 * c * sn / rho2, tst = (sn * sn - c * c) / rho2, ttt = -2.0 * c * sn / rho2;

  HSample out;
  out.h = H;
  out.hu = Hr * rs + Ht * ts;
  out.hv = Hr * rt + Ht * tt;
  out.huu = Hrr * rs * rs + 2.0 * Hrt * rs * ts + Htt * ts * ts + Hr * rss + Ht * tss;
  out.huv = Hrr * rs * rt + Hrt * (rs * tt + rt * ts) + Htt * ts * tt + Hr * rst + Ht * tst;
  out.hvv = Hrr * rt * rt + 2.0 * Hrt * rt * tt + Htt * tt * tt + Hr * rtt + Ht * ttt;
  return out;
}

SpatialNonlinearity::SpatialNonlinearity(NonlinParams params, std::vector<std::uint8_t> inside)
    : params_(params), inside_(std::move(inside)) {}

SpatialNonlinearity SpatialNonlinearity::unmodified() const {
  return SpatialNonlinearity(params_, std::vector<std::uint8_t>(inside_.size(), 1));
}

HSample h_spatial(std::size_t node, double s, double t, const SpatialNonlinearity& nl) {
  return nl(node, s, t);
}

}  // namespace nnls
