#pragma once

#include <array>

namespace nnls::detail {

// Truncated bivariate Taylor polynomial of total degree <= 4:
// c[i][j] multiplies dx^i dy^j.
class Jet2 {
 public:
  static constexpr int kOrder = 4;
  using Coeffs = std::array<std::array<double, kOrder + 1>, kOrder + 1>;

  Jet2() { clear(); }
  static Jet2 constant(double c) {
    Jet2 j;
    j.c_[0][0] = c;
    return j;
  }
  static Jet2 variable_x(double x0) {
    Jet2 j = constant(x0);
    j.c_[1][0] = 1.0;
    return j;
  }
  static Jet2 variable_y(double y0) {
    Jet2 j = constant(y0);
    j.c_[0][1] = 1.0;
    return j;
  }

  double value() const { return c_[0][0]; }
  double coeff(int i, int j) const { return c_[i][j]; }

  Jet2 operator+(const Jet2& o) const {
    Jet2 r;
    for (int i = 0; i <= kOrder; ++i)
      for (int j = 0; i + j <= kOrder; ++j) r.c_[i][j] = c_[i][j] + o.c_[i][j];
    return r;
  }
  Jet2 operator*(double s) const {
    Jet2 r;
    for (int i = 0; i <= kOrder; ++i)
      for (int j = 0; i + j <= kOrder; ++j) r.c_[i][j] = s * c_[i][j];
    return r;
  }
  Jet2 operator*(const Jet2& o) const {
    Jet2 r;
    for (int i1 = 0; i1 <= kOrder; ++i1)
      for (int j1 = 0; i1 + j1 <= kOrder; ++j1) {
        const double a = c_[i1][j1];
        if (a == 0.0) continue;
        for (int i2 = 0; i1 + j1 + i2 <= kOrder; ++i2)
          for (int j2 = 0; i1 + j1 + i2 + j2 <= kOrder; ++j2) r.c_[i1 + i2][j1 + j2] += a * o.c_[i2][j2];
      }
    return r;
  }

  // The jet minus its constant term.
  Jet2 increment() const {
    Jet2 r = *this;
    r.c_[0][0] = 0.0;
    return r;
  }

  // f(this) given f and its derivatives at value(): derivs[k] = f^(k).
  Jet2 compose(const std::array<double, kOrder + 1>& derivs) const {
    const Jet2 d = increment();
    Jet2 power = constant(1.0);
    Jet2 r;
    double factorial = 1.0;
    for (int k = 0; k <= kOrder; ++k) {
      if (k > 0) {
        power = power * d;
        factorial *= k;
      }
      r = r + power * (derivs[k] / factorial);
    }
    return r;
  }

 private:
  void clear() {
    for (auto& row : c_) row.fill(0.0);
  }
  Coeffs c_;
};

}  // namespace nnls::detail
