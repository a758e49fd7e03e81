#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "fracspec/grid.hpp"

namespace testing {

inline fracspec::Field random_field(const fracspec::GridSpec& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> v(grid.size());
  for (double& x : v) x = normal(rng);
  return fracspec::Field(grid, std::move(v));
}

// Smooth random field: a few low modes with random amplitudes under a
// Gaussian envelope of the given width.
inline fracspec::Field smooth_random_field(const fracspec::GridSpec& grid, std::uint64_t seed,
                                           double width) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  double a[4], b[4];
  for (int i = 0; i < 4; ++i) {
    a[i] = normal(rng);
    b[i] = normal(rng);
  }
  return fracspec::Field::sample(grid, [&](double x, double y) {
    double s = 0.0;
    for (int k = 0; k < 4; ++k) {
      const double w = (k + 1) / width;
      s += a[k] * std::cos(w * (x + 0.3 * y)) + b[k] * std::sin(w * (x - 0.2 * y));
    }
    return s * std::exp(-(x * x + y * y) / (2.0 * width * width));
  });
}

inline double rel(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace testing
