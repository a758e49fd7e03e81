#include "fracspec/dilation.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "fracspec/execution.hpp"

namespace fracspec {

double dilation_wrapped_fraction(const Field& u, double t) {
  if (!(t > 0.0)) throw InvalidArgument("dilation factor must be positive");
  if (t >= 1.0) return 0.0;
  const auto& grid = u.grid();
  const double edge = t * grid.half_length();
  double outside = 0.0;
  double total = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double w = u[k] * u[k];
    total += w;
    const auto p = grid.position(k);
    if (std::abs(p[0]) >= edge || (grid.dimension() == 2 && std::abs(p[1]) >= edge)) {
      outside += w;
    }
  }
  return total > 0.0 ? outside / total : 0.0;
}

namespace {

// Periodic sinc for an even number of points, evaluated at y - x_j.
// sin(pi (y - x_j) / h) = (-1)^{j - n/2} sin(pi y / h), so only the tangent
// depends on j.
class SincRow {
 public:
  SincRow(const GridSpec& grid, double y)
      : grid_(grid),
        y_(y),
        sin_y_(std::sin(std::numbers::pi * y / grid.spacing())),
        scale_(static_cast<double>(grid.points_per_axis())),
        half_period_(grid.half_length()) {}

  double operator()(std::size_t j) const {
    const double z = y_ - grid_.coordinate(j);
    if (z == 0.0) return 1.0;
    const double tz = std::tan(std::numbers::pi * z / (2.0 * half_period_));
    if (tz == 0.0) return 1.0;
    const long offset = static_cast<long>(j) - static_cast<long>(grid_.points_per_axis() / 2);
    const double sign = (offset % 2 == 0) ? 1.0 : -1.0;
    return sign * sin_y_ / (scale_ * tz);
  }

 private:
  const GridSpec& grid_;
  double y_;
  double sin_y_;
  double scale_;
  double half_period_;
};

}  // namespace

Field dilate(const Field& u, double t, const DilationOptions& options) {
  if (!(t > 0.0) || !std::isfinite(t)) throw InvalidArgument("dilation factor must be positive");
  if (t == 1.0) return u;
  const double wrapped = dilation_wrapped_fraction(u, t);
  if (wrapped > options.max_wrapped_fraction) throw DilationOutOfBox(t, wrapped);

  const auto& grid = u.grid();
  const std::size_t n = grid.points_per_axis();
  const auto src = u.values();
  std::vector<double> out(grid.size(), 0.0);

  if (grid.dimension() == 1) {
    std::vector<std::size_t> support;
    for (std::size_t j = 0; j < n; ++j) {
      if (src[j] != 0.0) support.push_back(j);
    }
    const double amp = std::sqrt(t);
    parallel_for(n, [&](std::size_t a) {
      const SincRow row(grid, t * grid.coordinate(a));
      double acc = 0.0;
      for (std::size_t j : support) acc += src[j] * row(j);
      out[a] = amp * acc;
    });
    return Field(grid, std::move(out));
  }

  // Separable: V = t * S U S^T with S[a][j] = sinc(t x_a - x_j).
  std::vector<double> s(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    const SincRow row(grid, t * grid.coordinate(a));
    for (std::size_t j = 0; j < n; ++j) s[a * n + j] = row(j);
  }
  std::vector<double> half(n * n, 0.0);  // (S U)[a][j2]
  parallel_for(n, [&](std::size_t a) {
    for (std::size_t j1 = 0; j1 < n; ++j1) {
      const double w = s[a * n + j1];
      for (std::size_t j2 = 0; j2 < n; ++j2) half[a * n + j2] += w * src[j1 * n + j2];
    }
  });
  parallel_for(n, [&](std::size_t a) {
    for (std::size_t b = 0; b < n; ++b) {
      double acc = 0.0;
      for (std::size_t j2 = 0; j2 < n; ++j2) acc += half[a * n + j2] * s[b * n + j2];
      out[a * n + b] = t * acc;
    }
  });
  return Field(grid, std::move(out));
}

}  // namespace fracspec
