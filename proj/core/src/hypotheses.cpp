#include "nnls/hypotheses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "nnls/error.hpp"

namespace nnls {

bool HypothesisReport::all_passed() const {
  return std::all_of(records.begin(), records.end(), [](const auto& r) { return r.passed; });
}

const HypothesisRecord& HypothesisReport::at(const std::string& name) const {
  for (const auto& r : records)
    if (r.name == name) return r;
  throw Error("no hypothesis record named " + name);
}

namespace {

struct Worst {
  double value = std::numeric_limits<double>::infinity();
  double s = 0.0, t = 0.0;
  void min_with(double v, double s_, double t_) {
    if (v < value) {
      value = v;
      s = s_;
      t = t_;
    }
  }
};

struct Best {
  double value = 0.0;
  double s = 0.0, t = 0.0;
  void max_with(double v, double s_, double t_) {
    if (v > value) {
      value = v;
      s = s_;
      t = t_;
    }
  }
};

// smallest eigenvalue of the symmetric 2x2 matrix [[a, b], [b, c]]
double min_eig(double a, double b, double c) {
  const double m = 0.5 * (a + c);
  const double d = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
  return m - d;
}

HypothesisRecord make_record(std::string name, double margin, double value, double s, double t,
                             std::string detail) {
  HypothesisRecord r;
  r.name = std::move(name);
  r.margin = margin;
  r.value = value;
  r.passed = margin > 0.0 && std::isfinite(margin);
  r.witness_s = s;
  r.witness_t = t;
  r.detail = std::move(detail);
  return r;
}

}  // namespace

double hm_constant(const NonlinParams& params, const SampleBox& box, int n_samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> U(box.s_min, box.s_max);
  double delta = 0.0;
  for (int k = 0; k < n_samples; ++k) {
    const double s = U(rng), t = U(rng);
    const HSample h = h_tilde_eval(s, t, params);
    delta = std::max(delta, std::hypot(h.hu, h.hv) / std::hypot(s, t));
  }
  return delta;
}

HypothesisReport check_hypotheses(const NonlinParams& params, const SampleBox& box, int n_samples,
                                  std::uint64_t seed) {
  if (!(box.s_min > 0.0 && box.s_max > box.s_min)) throw ConfigError("sample box must satisfy 0 < s_min < s_max");
  if (n_samples < 100) throw ConfigError("hypothesis check needs at least 100 samples");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(box.s_min, box.s_max);
  const double P = params.p + params.q;

  Worst h1, h3, h5;
  Best h4, h6a, h6b;
  double zero_set_violation = 0.0;
  const double mus[] = {0.01, 0.1, 1.0};
  std::vector<Best> c_mu_first(3), c_mu_second(3);

  for (int k = 0; k < n_samples; ++k) {
    const double s = U(rng), t = U(rng);
    const HSample h = h_eval(s, t, params);

    h1.min_with(std::min({h.h, h.hu, h.hv, h.huu, h.huv, h.hvv}), s, t);

    // zero set: reflect the sample onto the closed negative half-planes
    for (const auto& [ss, tt] : {std::pair{-s, t}, std::pair{s, -t}, std::pair{-s, -t}, std::pair{0.0, t}}) {
      const HSample z = h_eval(ss, tt, params);
      zero_set_violation = std::max({zero_set_violation, std::abs(z.h), std::abs(z.hu), std::abs(z.hv),
                                     std::abs(z.huu), std::abs(z.huv), std::abs(z.hvv)});
    }

    // h3: H >= (1 + delta') D with D = diag(h_u / s, h_v / t) > 0
    const double du = h.hu / s, dv = h.hv / t;
    if (du > 0.0 && dv > 0.0) {
      const double a = h.huu / du, b = h.huv / std::sqrt(du * dv), c = h.hvv / dv;
      h3.min_with(min_eig(a, b, c) - 1.0, s, t);
    } else {
      h3.min_with(-1.0, s, t);
    }

    // h4: growth bounds for the Hessian and the gradient
    const double base = s * s + t * t + std::pow(s, P - 2.0) + std::pow(t, P - 2.0);
    const double ratio = std::max({(std::abs(h.huu) + std::abs(h.hvv) + std::abs(h.huv)) / base,
                                   std::abs(h.hu) / (s * base), std::abs(h.hv) / (t * base)});
    h4.max_with(ratio, s, t);

    // h5: Euler-type superquadraticity
    const double euler = h.hu * s + h.hv * t;
    h5.min_with(euler > 0.0 ? 1.0 - 2.0 * h.h / euler : -1.0, s, t);

    // h6: smallest admissible C_mu for each inequality
    const double lhs = std::abs(h.hu * t) + std::abs(h.hv * s);
    for (int m = 0; m < 3; ++m) {
      const double excess = lhs - mus[m] * (s * s + t * t);
      if (excess > 0.0) {
        c_mu_first[m].max_with(excess / (std::pow(s, 6.0) + std::pow(t, 6.0)), s, t);
        c_mu_second[m].max_with(euler > 0.0 ? excess / euler : std::numeric_limits<double>::infinity(), s, t);
      }
    }
  }

  // h2: growth from below along s -> infinity (resp. t), t >= s_min
  Worst h2;
  {
    std::uniform_real_distribution<double> logU(std::log(10.0 * box.s_max), std::log(1e4 * box.s_max));
    for (int k = 0; k < n_samples / 10 + 10; ++k) {
      const double big = std::exp(logU(rng));
      const double other = box.s_min + (big - box.s_min) * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      const HSample a = h_eval(big, other, params);
      h2.min_with(a.hu / std::pow(big, P - 1.0), big, other);
      const HSample b = h_eval(other, big, params);
      h2.min_with(b.hv / std::pow(big, P - 1.0), other, big);
      const HSample c = h_eval(big, box.s_min, params);
      h2.min_with(c.hu / std::pow(big, P - 1.0), big, box.s_min);
    }
  }

  HypothesisReport rep;
  {
    std::ostringstream os;
    os << "min of h and its derivatives on samples; zero-set violation " << zero_set_violation;
    double margin = h1.value;
    if (zero_set_violation > 0.0) margin = -zero_set_violation;
    rep.records.push_back(make_record("h1", margin, h1.value, h1.s, h1.t, os.str()));
  }
  rep.records.push_back(make_record("h2", h2.value, h2.value, h2.s, h2.t,
                                    "inf of h_u / s^(p+q-1) for large s (and symmetrically in t)"));
  rep.records.push_back(make_record("h3", h3.value, h3.value, h3.s, h3.t,
                                    "best feasible delta' in H_h >= (1 + delta') diag(h_u/s, h_v/t)"));
  rep.records.push_back(make_record("h4", h4.value > 0.0 ? 1.0 / h4.value : 0.0, h4.value, h4.s, h4.t,
                                    "fitted growth constant C; margin is 1/C"));
  rep.records.push_back(make_record("h5", h5.value, h5.value, h5.s, h5.t, "best feasible delta''"));
  {
    double worst = 0.0;
    std::size_t wi = 0;
    std::ostringstream os;
    os << "C_mu (first, second):";
    for (int m = 0; m < 3; ++m) {
      os << " mu=" << mus[m] << ": " << c_mu_first[m].value << ", " << c_mu_second[m].value << ";";
      const double w = std::max(c_mu_first[m].value, c_mu_second[m].value);
      if (w > worst) {
        worst = w;
        wi = static_cast<std::size_t>(m);
      }
    }
    const double margin = worst > 0.0 ? 1.0 / worst : std::numeric_limits<double>::infinity();
    auto r = make_record("h6", std::isfinite(margin) ? margin : 1.0, worst, c_mu_first[wi].s, c_mu_first[wi].t,
                         os.str());
    r.passed = std::isfinite(worst);
    rep.records.push_back(r);
  }
  {
    const double delta = hm_constant(params, box, n_samples, seed);
    std::ostringstream os;
    os << "delta with |grad h~| <= delta rho, a = " << params.a;
    rep.records.push_back(make_record("hm", delta > 0.0 ? 1.0 / delta : 0.0, delta, 0.0, 0.0, os.str()));
  }
  return rep;
}

}  // namespace nnls
