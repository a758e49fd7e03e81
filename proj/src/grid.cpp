#include "fracspec/grid.hpp"

#include <cmath>
#include <numbers>

namespace fracspec {

GridSpec::GridSpec(int dimension, double half_length, std::size_t points_per_axis, double order)
    : dimension_(dimension),
      half_length_(half_length),
      points_(points_per_axis),
      order_(order),
      spacing_(0.0) {
  if (dimension != 1 && dimension != 2) {
    throw InvalidArgument("dimension must be 1 or 2");
  }
  if (!(order > 0.0 && order < 1.0)) {
    throw InvalidArgument("fractional order must lie in (0, 1)");
  }
  if (!(dimension > 2.0 * order)) {
    throw InvalidArgument("N > 2s violated");
  }
  if (!(half_length > 0.0) || !std::isfinite(half_length)) {
    throw InvalidArgument("half length must be positive and finite");
  }
  if (points_per_axis < 2 || points_per_axis % 2 != 0) {
    throw InvalidArgument("points per axis must be a positive even integer");
  }
  spacing_ = 2.0 * half_length / static_cast<double>(points_per_axis);
}

double GridSpec::cell_volume() const { return std::pow(spacing_, dimension_); }

double GridSpec::frequency_spacing() const { return std::numbers::pi / half_length_; }

std::size_t GridSpec::size() const {
  return dimension_ == 1 ? points_ : points_ * points_;
}

std::array<std::size_t, 2> GridSpec::unravel(std::size_t flat) const {
  if (dimension_ == 1) return {flat, 0};
  return {flat / points_, flat % points_};
}

std::array<double, 2> GridSpec::position(std::size_t flat) const {
  const auto idx = unravel(flat);
  if (dimension_ == 1) return {coordinate(idx[0]), 0.0};
  return {coordinate(idx[0]), coordinate(idx[1])};
}

double GridSpec::frequency_norm(std::size_t flat) const {
  const auto idx = unravel(flat);
  if (dimension_ == 1) return std::abs(frequency(idx[0]));
  return std::hypot(frequency(idx[0]), frequency(idx[1]));
}

Field::Field(GridSpec grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw InvalidArgument("field has " + std::to_string(values_.size()) +
                          " samples, grid expects " + std::to_string(grid_.size()));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw InvalidArgument("field values must be finite");
  }
}

Field Field::zeros(const GridSpec& grid) { return Field(grid, std::vector<double>(grid.size(), 0.0)); }

Field Field::constant(const GridSpec& grid, double value) {
  return Field(grid, std::vector<double>(grid.size(), value));
}

void require_same_grid(const Field& a, const Field& b) {
  if (!(a.grid() == b.grid())) throw GridMismatch();
}

Field Field::operator+(const Field& other) const {
  require_same_grid(*this, other);
  std::vector<double> out(values_.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = values_[k] + other.values_[k];
  return Field(grid_, std::move(out));
}

Field Field::operator-(const Field& other) const {
  require_same_grid(*this, other);
  std::vector<double> out(values_.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = values_[k] - other.values_[k];
  return Field(grid_, std::move(out));
}

Field Field::operator-() const {
  std::vector<double> out(values_.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = -values_[k];
  return Field(grid_, std::move(out));
}

Field Field::operator*(double c) const {
  std::vector<double> out(values_.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = c * values_[k];
  return Field(grid_, std::move(out));
}

Field Field::times(const Field& other) const {
  require_same_grid(*this, other);
  std::vector<double> out(values_.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = values_[k] * other.values_[k];
  return Field(grid_, std::move(out));
}

Field Field::abs() const {
  std::vector<double> out(values_.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::abs(values_[k]);
  return Field(grid_, std::move(out));
}

double Field::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double l2_inner(const Field& u, const Field& v) {
  require_same_grid(u, v);
  const auto a = u.values();
  const auto b = v.values();
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) sum += a[k] * b[k];
  return sum * u.grid().cell_volume();
}

double l2_norm(const Field& u) { return std::sqrt(l2_inner(u, u)); }

SpectrumArray::SpectrumArray(GridSpec grid, std::vector<std::complex<double>> coefficients)
    : grid_(std::move(grid)), coefficients_(std::move(coefficients)) {
  if (coefficients_.size() != grid_.size()) {
    throw InvalidArgument("spectrum size does not match grid");
  }
}

std::complex<double> SpectrumArray::at(int m1, int m2) const {
  const int n = static_cast<int>(grid_.points_per_axis());
  auto index = [n](int m) {
    if (m < -n / 2 || m >= n / 2) throw InvalidArgument("mode index out of range");
    return static_cast<std::size_t>(m < 0 ? m + n : m);
  };
  if (grid_.dimension() == 1) return coefficients_[index(m1)];
  return coefficients_[grid_.ravel(index(m1), index(m2))];
}

}  // namespace fracspec
