#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <type_traits>
#include <vector>

#include "fracspec/errors.hpp"

namespace fracspec {

/// Uniform periodic grid on the box [-L, L)^N standing in for R^N.
///
/// Grid point j along an axis sits at x_j = (j - n/2) * dx, so the origin is a
/// grid point and x_{n-j} == -x_j bit for bit. Frequencies follow the FFT
/// ordering: index j carries the signed mode m = j for j < n/2 and m = j - n
/// otherwise, with xi_m = (pi / L) * m.
class GridSpec {
 public:
  GridSpec(int dimension, double half_length, std::size_t points_per_axis, double order);

  int dimension() const { return dimension_; }
  double half_length() const { return half_length_; }
  std::size_t points_per_axis() const { return points_; }
  /// Fractional order s in (0, 1).
  double order() const { return order_; }

  double spacing() const { return spacing_; }
  double cell_volume() const;
  double frequency_spacing() const;
  /// Total number of samples n^N.
  std::size_t size() const;

  double coordinate(std::size_t j) const {
    return (static_cast<double>(j) - static_cast<double>(points_ / 2)) * spacing_;
  }
  int mode(std::size_t j) const {
    const auto half = points_ / 2;
    return j < half ? static_cast<int>(j) : static_cast<int>(j) - static_cast<int>(points_);
  }
  double frequency(std::size_t j) const { return frequency_spacing() * mode(j); }

  /// Axis indices of a flat (row-major) index; the second entry is 0 when N = 1.
  std::array<std::size_t, 2> unravel(std::size_t flat) const;
  std::size_t ravel(std::size_t i, std::size_t j = 0) const {
    return dimension_ == 1 ? i : i * points_ + j;
  }

  /// Physical position of a flat index; unused trailing coordinate is 0.
  std::array<double, 2> position(std::size_t flat) const;
  /// |xi| of a flat index.
  double frequency_norm(std::size_t flat) const;

  bool operator==(const GridSpec&) const = default;

 private:
  int dimension_;
  double half_length_;
  std::size_t points_;
  double order_;
  double spacing_;
};

/// Real samples of a function on a GridSpec; immutable once built.
class Field {
 public:
  Field(GridSpec grid, std::vector<double> values);

  static Field zeros(const GridSpec& grid);
  static Field constant(const GridSpec& grid, double value);

  /// Samples f at every grid point. f takes (x) when N = 1 and (x, y) when N = 2.
  template <class F>
  static Field sample(const GridSpec& grid, F&& f) {
    std::vector<double> values(grid.size());
    for (std::size_t k = 0; k < values.size(); ++k) {
      const auto p = grid.position(k);
      if constexpr (std::is_invocable_v<F, double, double>) {
        if (grid.dimension() == 2) {
          values[k] = f(p[0], p[1]);
        } else {
          values[k] = f(p[0], 0.0);
        }
      } else {
        if (grid.dimension() != 1) throw InvalidArgument("one-argument sampler on a 2-D grid");
        values[k] = f(p[0]);
      }
    }
    return Field(grid, std::move(values));
  }

  const GridSpec& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t k) const { return values_[k]; }
  std::size_t size() const { return values_.size(); }

  Field operator+(const Field& other) const;
  Field operator-(const Field& other) const;
  Field operator-() const;
  Field operator*(double c) const;
  friend Field operator*(double c, const Field& f) { return f * c; }
  /// Pointwise product.
  Field times(const Field& other) const;
  Field abs() const;
  double max_abs() const;

 private:
  GridSpec grid_;
  std::vector<double> values_;
};

void require_same_grid(const Field& a, const Field& b);

/// Uniform quadrature sum_k a_k b_k dx^N.
double l2_inner(const Field& u, const Field& v);
double l2_norm(const Field& u);

/// Discrete Fourier coefficients of a Field, stored in FFT index order.
///
/// Normalization: hat u(xi_m) = (dx / sqrt(2 pi))^N sum_j u_j exp(-i xi_m . x_j),
/// so that sum_m |hat u_m|^2 dxi^N = ||u||_2^2 (discrete Plancherel).
class SpectrumArray {
 public:
  SpectrumArray(GridSpec grid, std::vector<std::complex<double>> coefficients);

  const GridSpec& grid() const { return grid_; }
  std::span<const std::complex<double>> coefficients() const { return coefficients_; }
  /// Coefficient of the signed mode (m1[, m2]), each in [-n/2, n/2).
  std::complex<double> at(int m1, int m2 = 0) const;

 private:
  GridSpec grid_;
  std::vector<std::complex<double>> coefficients_;
};

}  // namespace fracspec
