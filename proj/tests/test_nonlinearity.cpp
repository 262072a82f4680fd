#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "nnls/error.hpp"
#include "nnls/hypotheses.hpp"
#include "nnls/nonlinearity.hpp"

using namespace nnls;

namespace {

double radial(double rho, double theta, const NonlinParams& p) {
  return h_tilde_eval(rho * std::cos(theta), rho * std::sin(theta), p).h;
}

}  // namespace

TEST(Nonlinearity, ZeroWhenEitherArgumentNonPositive) {
  const NonlinParams p;
  const HSample a = h_eval(-1.0, 2.0, p);
  EXPECT_EQ(a.h, 0.0);
  EXPECT_EQ(a.hu, 0.0);
  EXPECT_EQ(a.hvv, 0.0);
  const HSample b = h_tilde_eval(0.5, 0.0, p);
  EXPECT_EQ(b.h, 0.0);
  EXPECT_EQ(b.huv, 0.0);
}

TEST(Nonlinearity, UnitPointValue) {
  for (double q : {2.2, 2.5, 2.9}) {
    NonlinParams p;
    p.q = q;
    EXPECT_NEAR(h_eval(1.0, 1.0, p).h, 3.0, 1e-14);
  }
}

TEST(Nonlinearity, DerivativesMatchCentralDifferences) {
  NonlinParams p;
  p.q = 2.3;
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(0.1, 2.0);
  const double d = 1e-6;
  for (int k = 0; k < 50; ++k) {
    const double s = U(rng), t = U(rng);
    const HSample c = h_eval(s, t, p);
    const HSample su = h_eval(s + d, t, p), sd = h_eval(s - d, t, p);
    const HSample tu = h_eval(s, t + d, p), td = h_eval(s, t - d, p);
    EXPECT_NEAR(c.hu, (su.h - sd.h) / (2 * d), 1e-6 * std::abs(c.hu));
    EXPECT_NEAR(c.hv, (tu.h - td.h) / (2 * d), 1e-6 * std::abs(c.hv));
    EXPECT_NEAR(c.huu, (su.hu - sd.hu) / (2 * d), 1e-6 * std::abs(c.huu));
    EXPECT_NEAR(c.huv, (tu.hu - td.hu) / (2 * d), 1e-6 * std::abs(c.huv));
    EXPECT_NEAR(c.hvv, (tu.hv - td.hv) / (2 * d), 1e-6 * std::abs(c.hvv));
  }
}

TEST(Nonlinearity, ProlongationDerivativesMatchDifferences) {
  const NonlinParams p;
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> R(0.15, 1.5), A(0.1, 1.4);
  const double d = 1e-6;
  for (int k = 0; k < 30; ++k) {
    const double rho = R(rng), th = A(rng);
    const double s = rho * std::cos(th), t = rho * std::sin(th);
    const HSample c = h_tilde_eval(s, t, p);
    const HSample su = h_tilde_eval(s + d, t, p), sd = h_tilde_eval(s - d, t, p);
    const HSample tu = h_tilde_eval(s, t + d, p), td = h_tilde_eval(s, t - d, p);
    const double scale = std::abs(c.hu) + std::abs(c.hv) + 1e-12;
    EXPECT_NEAR(c.hu, (su.h - sd.h) / (2 * d), 1e-6 * scale);
    EXPECT_NEAR(c.hv, (tu.h - td.h) / (2 * d), 1e-6 * scale);
    const double hscale = std::abs(c.huu) + std::abs(c.huv) + std::abs(c.hvv) + 1e-12;
    EXPECT_NEAR(c.huu, (su.hu - sd.hu) / (2 * d), 1e-6 * hscale);
    EXPECT_NEAR(c.huv, (tu.hu - td.hu) / (2 * d), 1e-6 * hscale);
    EXPECT_NEAR(c.hvv, (tu.hv - td.hv) / (2 * d), 1e-6 * hscale);
  }
}

TEST(Nonlinearity, SymmetricWhenExponentsEqual) {
  const NonlinParams p;
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> U(0.0005, 2.0);
  for (int k = 0; k < 200; ++k) {
    const double s = U(rng), t = U(rng);
    const HSample a = h_eval(s, t, p), b = h_eval(t, s, p);
    EXPECT_NEAR(a.h, b.h, 1e-14 * std::abs(a.h));
    EXPECT_NEAR(a.hu, b.hv, 1e-14 * std::abs(a.hu));
    EXPECT_NEAR(a.huu, b.hvv, 1e-14 * std::abs(a.huu));
    const HSample c = h_tilde_eval(s, t, p), e = h_tilde_eval(t, s, p);
    EXPECT_NEAR(c.h, e.h, 1e-13 * std::abs(c.h));
    EXPECT_NEAR(c.hu, e.hv, 1e-13 * std::abs(c.hu) + 1e-300);
  }
}

TEST(Nonlinearity, MollifierVanishesNearAxes) {
  const NonlinParams p;
  for (double s : {0.0, 0.5e-3, 0.999e-3}) {
    const HSample a = h_eval(s, 1.0, p);
    EXPECT_EQ(a.h, 0.0);
    EXPECT_EQ(a.hv, 0.0);
  }
}

TEST(Prolongation, SecondOrderMatchingAtRadiusA) {
  const NonlinParams p;
  const double d = 1e-4;
  for (int k = 1; k <= 20; ++k) {
    const double th = 0.05 + (std::numbers::pi / 2 - 0.1) * k / 21.0;
    const double exact_h = h_eval(p.a * std::cos(th), p.a * std::sin(th), p).h;
    EXPECT_NEAR(radial(p.a, th, p), exact_h, 1e-15);
    // one-sided differences on each side of a
    auto F = [&](double r) { return radial(r, th, p); };
    auto G = [&](double r) { return h_eval(r * std::cos(th), r * std::sin(th), p).h; };
    const double d1_out = (-3 * F(p.a) + 4 * F(p.a + d) - F(p.a + 2 * d)) / (2 * d);
    const double d1_in = (3 * G(p.a) - 4 * G(p.a - d) + G(p.a - 2 * d)) / (2 * d);
    EXPECT_NEAR(d1_out, d1_in, 1e-3 * std::abs(d1_in) + 1e-12);
    const double d2_out = (F(p.a) - 2 * F(p.a + d) + F(p.a + 2 * d)) / (d * d);
    const double d2_in = (G(p.a) - 2 * G(p.a - d) + G(p.a - 2 * d)) / (d * d);
    EXPECT_NEAR(d2_out, d2_in, 1e-2 * std::abs(d2_in) + 1e-9);
  }
}

TEST(Prolongation, ZeroOnAxis) {
  const NonlinParams p;
  const HSample a = h_tilde_eval(2 * p.a, 0.0, p);
  EXPECT_EQ(a.h, 0.0);
  EXPECT_EQ(a.hu, 0.0);
  EXPECT_EQ(a.hv, 0.0);
  EXPECT_EQ(a.huu, 0.0);
}

TEST(Prolongation, QuadraticGrowthOnDiagonal) {
  // on the diagonal h(rho) = 3 (rho / sqrt 2)^5 for p = q = 2.5
  const NonlinParams p;
  const double a = p.a;
  const double c = 3.0 / std::pow(2.0, 2.5);
  const double F0 = c * std::pow(a, 5), F1 = 5 * c * std::pow(a, 4), F2 = 20 * c * std::pow(a, 3);
  auto T = [&](double r) { return F0 + F1 * (r - a) + 0.5 * F2 * (r - a) * (r - a); };
  const double th = std::numbers::pi / 4;
  const double ratio = radial(4 * a, th, p) / radial(2 * a, th, p);
  EXPECT_NEAR(ratio, T(4 * a) / T(2 * a), 1e-10);
}

TEST(Spatial, BranchSelection) {
  const NonlinParams p;
  const SpatialNonlinearity nl(p, {1, 0});
  const HSample in = nl(0, 0.2, 0.3);
  EXPECT_EQ(in.h, h_eval(0.2, 0.3, p).h);
  const HSample small = nl(1, 0.04, 0.05);
  EXPECT_EQ(small.h, h_eval(0.04, 0.05, p).h);
  const double r = 3 * p.a / std::sqrt(2.0);
  EXPECT_LT(nl(1, r, r).h, h_eval(r, r, p).h);
  EXPECT_EQ(nl.unmodified()(1, r, r).h, h_eval(r, r, p).h);
}

TEST(Params, RangeValidation) {
  NonlinParams p;
  p.p = 3.5;
  EXPECT_THROW(p.validate(), ConfigError);
  p.p = 2.0;
  EXPECT_THROW(p.validate(), ConfigError);
  p.p = 2.5;
  p.a = 0.0;
  EXPECT_THROW(p.validate(), ConfigError);
}

TEST(Hypotheses, PaperDefaultsPass) {
  const HypothesisReport r = check_hypotheses(NonlinParams{}, SampleBox{}, 10000);
  EXPECT_TRUE(r.all_passed());
  for (const char* name : {"h1", "h2", "h3", "h4", "h5", "h6", "hm"}) {
    EXPECT_TRUE(r.at(name).passed) << name;
    EXPECT_GT(r.at(name).margin, 0.0) << name;
  }
}

TEST(Hypotheses, SubtractedBilinearTermFailsH1) {
  NonlinParams p;
  p.c_bilinear = -0.5;
  const HypothesisReport r = check_hypotheses(p, SampleBox{}, 10000);
  const HypothesisRecord& h1 = r.at("h1");
  EXPECT_FALSE(h1.passed);
  EXPECT_LT(h1.margin, 0.0);
  EXPECT_GT(h1.witness_s, 0.0);
  EXPECT_GT(h1.witness_t, 0.0);
  const HSample w = h_eval(h1.witness_s, h1.witness_t, p);
  EXPECT_LT(std::min({w.h, w.hu, w.hv, w.huu, w.huv, w.hvv}), 0.0);
}

TEST(Hypotheses, ProlongationGradientConstantStaysBounded) {
  const NonlinParams p;
  const double near = hm_constant(p, SampleBox{0.01, 2.0}, 10000);
  const double far = hm_constant(p, SampleBox{0.01, 200.0}, 10000);
  EXPECT_TRUE(std::isfinite(near));
  EXPECT_TRUE(std::isfinite(far));
  EXPECT_LT(far, 2.0 * near);
  EXPECT_GT(far, 0.5 * near);
}

TEST(Hypotheses, Deterministic) {
  const auto a = check_hypotheses(NonlinParams{}, SampleBox{}, 2000, 5);
  const auto b = check_hypotheses(NonlinParams{}, SampleBox{}, 2000, 5);
  for (std::size_t k = 0; k < a.records.size(); ++k) EXPECT_EQ(a.records[k].margin, b.records[k].margin);
}
