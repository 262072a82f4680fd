#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace nnls {

using Point = std::array<double, 3>;
using MultiIndex = std::array<int, 3>;

/// Uniform grid on the box [-L, L]^d with n points per axis (n odd, so the
/// origin is a node). Nodes on the box surface carry homogeneous Dirichlet
/// data; every solver keeps them at zero.
struct GridSpec {
  int dim = 1;
  double half_extent = 1.0;
  int n = 3;
  double spacing = 1.0;

  std::size_t size() const;
  double cell_volume() const;  // spacing^dim
  // exactly symmetric: coord(j) == -coord(n - 1 - j)
  double coord(int j) const { return (j - (n - 1) / 2) * spacing; }

  std::size_t stride(int axis) const;
  MultiIndex index(std::size_t flat) const;
  std::size_t flat(const MultiIndex& idx) const;
  Point point(std::size_t flat) const;
  bool on_boundary(std::size_t flat) const;

  // Product of per-axis trapezoid factors (1/2 on the box surface) times
  // cell_volume().
  double trapezoid_weight(std::size_t flat) const;

  bool operator==(const GridSpec&) const = default;
};

/// Default cap on n^d; larger requests are rejected before allocation.
inline constexpr std::size_t kDefaultPointBudget = 50'000'000;

GridSpec build_grid(int dim, double half_extent, int n,
                    std::size_t point_budget = kDefaultPointBudget);

double distance(const Point& a, const Point& b, int dim);

class Field {
 public:
  Field() = default;
  explicit Field(const GridSpec& grid, double fill = 0.0);
  Field(const GridSpec& grid, std::vector<double> values);

  const GridSpec& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }

  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double s);
  // this += s * other
  Field& axpy(double s, const Field& other);
  // pointwise product
  Field& multiply(const Field& other);

  double max_abs() const;
  bool all_finite() const;
  void zero_boundary();

 private:
  GridSpec grid_;
  std::vector<double> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);
Field pointwise(Field a, const Field& b);

void require_same_grid(const Field& a, const Field& b);

/// A candidate (u, v). Both components live on the same grid.
struct PairField {
  Field u;
  Field v;

  PairField() = default;
  explicit PairField(const GridSpec& grid) : u(grid), v(grid) {}
  PairField(Field u_, Field v_);

  const GridSpec& grid() const { return u.grid(); }

  PairField& operator+=(const PairField& o);
  PairField& operator-=(const PairField& o);
  PairField& operator*=(double s);
  PairField& axpy(double s, const PairField& o);
  // (u, v) += s * (psi, -psi)
  PairField& add_antisymmetric(double s, const Field& psi);
};

PairField operator+(PairField a, const PairField& b);
PairField operator-(PairField a, const PairField& b);
PairField operator*(double s, PairField a);

}  // namespace nnls
