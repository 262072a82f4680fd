#include "nnls/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nnls/error.hpp"

namespace nnls {

std::size_t GridSpec::size() const {
  std::size_t s = 1;
  for (int a = 0; a < dim; ++a) s *= static_cast<std::size_t>(n);
  return s;
}

double GridSpec::cell_volume() const { return std::pow(spacing, dim); }

std::size_t GridSpec::stride(int axis) const {
  std::size_t s = 1;
  for (int a = dim - 1; a > axis; --a) s *= static_cast<std::size_t>(n);
  return s;
}

MultiIndex GridSpec::index(std::size_t flat) const {
  MultiIndex idx{0, 0, 0};
  for (int a = dim - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(flat % static_cast<std::size_t>(n));
    flat /= static_cast<std::size_t>(n);
  }
  return idx;
}

std::size_t GridSpec::flat(const MultiIndex& idx) const {
  std::size_t f = 0;
  for (int a = 0; a < dim; ++a) f = f * static_cast<std::size_t>(n) + static_cast<std::size_t>(idx[a]);
  return f;
}

Point GridSpec::point(std::size_t flat_index) const {
  const MultiIndex idx = index(flat_index);
  Point x{0.0, 0.0, 0.0};
  for (int a = 0; a < dim; ++a) x[a] = coord(idx[a]);
  return x;
}

bool GridSpec::on_boundary(std::size_t flat_index) const {
  const MultiIndex idx = index(flat_index);
  for (int a = 0; a < dim; ++a)
    if (idx[a] == 0 || idx[a] == n - 1) return true;
  return false;
}

double GridSpec::trapezoid_weight(std::size_t flat_index) const {
  const MultiIndex idx = index(flat_index);
  double w = cell_volume();
  for (int a = 0; a < dim; ++a)
    if (idx[a] == 0 || idx[a] == n - 1) w *= 0.5;
  return w;
}

GridSpec build_grid(int dim, double half_extent, int n, std::size_t point_budget) {
  if (dim < 1 || dim > 3) throw ConfigError("grid dimension must be 1, 2 or 3");
  if (!(half_extent > 0.0) || !std::isfinite(half_extent))
    throw ConfigError("grid half extent must be positive");
  if (n < 3) throw ConfigError("grid needs at least 3 points per axis");
  if (n % 2 == 0) {
    std::ostringstream os;
    os << "points per axis must be odd so the origin is a node (got " << n << ")";
    throw ConfigError(os.str());
  }
  GridSpec g{dim, half_extent, n, 2.0 * half_extent / (n - 1)};
  if (static_cast<double>(g.size()) > static_cast<double>(point_budget)) {
    std::ostringstream os;
    os << "grid with " << n << "^" << dim << " points exceeds the point budget " << point_budget;
    throw ConfigError(os.str());
  }
  return g;
}

double distance(const Point& a, const Point& b, int dim) {
  double s = 0.0;
  for (int k = 0; k < dim; ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

Field::Field(const GridSpec& grid, double fill) : grid_(grid), values_(grid.size(), fill) {}

Field::Field(const GridSpec& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw Error("field value count does not match grid");
}

void require_same_grid(const Field& a, const Field& b) {
  if (!(a.grid() == b.grid())) throw Error("fields live on incompatible grids");
}

Field& Field::operator+=(const Field& other) {
  require_same_grid(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

Field& Field::operator*=(double s) {
  for (double& x : values_) x *= s;
  return *this;
}

Field& Field::axpy(double s, const Field& other) {
  require_same_grid(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += s * other.values_[i];
  return *this;
}

Field& Field::multiply(const Field& other) {
  require_same_grid(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] *= other.values_[i];
  return *this;
}

double Field::max_abs() const {
  double m = 0.0;
  for (double x : values_) m = std::max(m, std::abs(x));
  return m;
}

bool Field::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double x) { return std::isfinite(x); });
}

void Field::zero_boundary() {
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (grid_.on_boundary(i)) values_[i] = 0.0;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }
Field pointwise(Field a, const Field& b) { return a.multiply(b); }

PairField::PairField(Field u_, Field v_) : u(std::move(u_)), v(std::move(v_)) {
  require_same_grid(u, v);
}

PairField& PairField::operator+=(const PairField& o) {
  u += o.u;
  v += o.v;
  return *this;
}

PairField& PairField::operator-=(const PairField& o) {
  u -= o.u;
  v -= o.v;
  return *this;
}

PairField& PairField::operator*=(double s) {
  u *= s;
  v *= s;
  return *this;
}

PairField& PairField::axpy(double s, const PairField& o) {
  u.axpy(s, o.u);
  v.axpy(s, o.v);
  return *this;
}

PairField& PairField::add_antisymmetric(double s, const Field& psi) {
  u.axpy(s, psi);
  v.axpy(-s, psi);
  return *this;
}

PairField operator+(PairField a, const PairField& b) { return a += b; }
PairField operator-(PairField a, const PairField& b) { return a -= b; }
PairField operator*(double s, PairField a) { return a *= s; }

}  // namespace nnls
