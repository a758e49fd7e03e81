#include "fracspec/gagliardo.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "fracspec/execution.hpp"
#include "fracspec/fourier.hpp"

namespace fracspec {

double hurwitz_zeta(double p, double a) {
  if (!(p > 1.0) || !(a > 0.0)) throw InvalidArgument("hurwitz_zeta needs p > 1, a > 0");
  // Euler-Maclaurin after M explicit terms.
  constexpr int kTerms = 16;
  double sum = 0.0;
  for (int k = 0; k < kTerms; ++k) sum += std::pow(k + a, -p);
  const double x = kTerms + a;
  sum += std::pow(x, 1.0 - p) / (p - 1.0) + 0.5 * std::pow(x, -p);
  // B_{2i} / (2i)!
  constexpr std::array<double, 4> kB = {1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0, -1.0 / 1209600.0};
  double rising = p;  // p (p+1) ... (p + 2i - 2)
  double power = std::pow(x, -p - 1.0);
  for (std::size_t i = 0; i < kB.size(); ++i) {
    sum += kB[i] * rising * power;
    rising *= (p + 2.0 * i + 1.0) * (p + 2.0 * i + 2.0);
    power /= x * x;
  }
  return sum;
}

namespace {

// int over the complement of the square [-R, R]^2 of |y|^{-p} dy, p > 2.
double square_complement_integral(double p, double half_side) {
  constexpr int kIntervals = 128;
  const double h = (std::numbers::pi / 4.0) / kIntervals;
  double acc = 0.0;
  for (int i = 0; i <= kIntervals; ++i) {
    const double w = (i == 0 || i == kIntervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    acc += w * std::pow(std::cos(i * h), p - 2.0);
  }
  acc *= h / 3.0;
  return 8.0 / (p - 2.0) * std::pow(half_side, 2.0 - p) * acc;
}

double lattice_kernel_1d(double p, double period, double d) {
  const double a = d / period;
  return std::pow(period, -p) * (hurwitz_zeta(p, a) + hurwitz_zeta(p, 1.0 - a));
}

// Explicit images inside |m_i| <= M; the rest by the midpoint rule.
double lattice_kernel_2d(double p, double period, double d1, double d2) {
  constexpr int kImages = 12;
  // nearest image first, so the explicit block is centred on the origin
  if (d1 > 0.5 * period) d1 -= period;
  if (d2 > 0.5 * period) d2 -= period;
  double sum = 0.0;
  for (int m1 = -kImages; m1 <= kImages; ++m1) {
    const double y1 = d1 + period * m1;
    for (int m2 = -kImages; m2 <= kImages; ++m2) {
      const double y2 = d2 + period * m2;
      sum += std::pow(y1 * y1 + y2 * y2, -0.5 * p);
    }
  }
  const double half_side = (kImages + 0.5) * period;
  return sum + square_complement_integral(p, half_side) / (period * period);
}

void require_cap(const GridSpec& grid, std::size_t max_points) {
  if (grid.size() > max_points) throw GridTooLarge(grid.size(), max_points);
}

}  // namespace

PeriodicKernel::PeriodicKernel(const GridSpec& grid) : grid_(grid), table_(grid.size(), 0.0) {
  const double p = grid.dimension() + 2.0 * grid.order();
  const double period = 2.0 * grid.half_length();
  const double h = grid.spacing();
  const std::size_t n = grid.points_per_axis();
  if (grid.dimension() == 1) {
    for (std::size_t d = 1; d < n; ++d) table_[d] = lattice_kernel_1d(p, period, d * h);
    return;
  }
  parallel_for(n, [&](std::size_t d1) {
    for (std::size_t d2 = 0; d2 < n; ++d2) {
      if (d1 == 0 && d2 == 0) continue;
      table_[d1 * n + d2] = lattice_kernel_2d(p, period, d1 * h, d2 * h);
    }
  });
}

double PeriodicKernel::between(std::size_t a, std::size_t b) const {
  const std::size_t n = grid_.points_per_axis();
  const auto ia = grid_.unravel(a);
  const auto ib = grid_.unravel(b);
  return at((ia[0] + n - ib[0]) % n, (ia[1] + n - ib[1]) % n);
}

namespace {

// sum_{a != b} F(a, b) K(a - b) dx^{2N}, rows accumulated in order.
template <class Pair>
double kernel_double_sum(const GridSpec& grid, const PeriodicKernel& kernel, Pair&& pair) {
  const std::size_t size = grid.size();
  const std::size_t n = grid.points_per_axis();
  std::vector<double> rows(size, 0.0);
  parallel_for(size, [&](std::size_t a) {
    const auto ia = grid.unravel(a);
    double acc = 0.0;
    for (std::size_t b = 0; b < size; ++b) {
      if (a == b) continue;
      const auto ib = grid.unravel(b);
      acc += pair(a, b) * kernel.at((ia[0] + n - ib[0]) % n, (ia[1] + n - ib[1]) % n);
    }
    rows[a] = acc;
  });
  double total = 0.0;
  for (double r : rows) total += r;
  const double dv = grid.cell_volume();
  return total * dv * dv;
}

}  // namespace

double gagliardo_form_direct(const Field& u, std::size_t max_points) {
  const auto& grid = u.grid();
  require_cap(grid, max_points);
  PeriodicKernel kernel(grid);
  const auto v = u.values();
  return kernel_double_sum(grid, kernel, [&](std::size_t a, std::size_t b) {
    const double d = v[a] - v[b];
    return d * d;
  });
}

double kernel_cross_term(const Field& f, const Field& h, std::size_t max_points) {
  require_same_grid(f, h);
  const auto& grid = f.grid();
  require_cap(grid, max_points);
  PeriodicKernel kernel(grid);
  const auto fv = f.values();
  const auto hv = h.values();
  return kernel_double_sum(grid, kernel,
                           [&](std::size_t a, std::size_t b) { return fv[a] * hv[b]; });
}

std::vector<Field> localized_test_fields(const GridSpec& grid) {
  const double w = grid.half_length() / 10.0;
  const bool two_d = grid.dimension() == 2;
  auto r2 = [two_d](double x, double y) { return two_d ? x * x + y * y : x * x; };
  std::vector<Field> fields;
  fields.push_back(Field::sample(grid, [&](double x, double y) {
    return std::exp(-r2(x, y) / (2 * w * w));
  }));
  fields.push_back(Field::sample(grid, [&](double x, double y) {
    return std::exp(-r2(x, y) / (8 * w * w));
  }));
  fields.push_back(Field::sample(grid, [&](double x, double y) {
    return (x / w) * std::exp(-r2(x, y) / (4 * w * w));
  }));
  fields.push_back(Field::sample(grid, [&](double x, double y) {
    return std::exp(-r2(x - w, y) / (2 * w * w)) + 0.5 * std::exp(-r2(x + 2 * w, y) / (3 * w * w));
  }));
  fields.push_back(Field::sample(grid, [&](double x, double y) {
    const double c = std::cosh(std::sqrt(r2(x, y)) / w);
    return 1.0 / (c * c);
  }));
  return fields;
}

KernelCalibration calibrate_kernel_constant(const GridSpec& grid, std::size_t max_points) {
  require_cap(grid, max_points);
  KernelCalibration cal;
  for (const auto& f : localized_test_fields(grid)) {
    cal.ratios.push_back(multiplier_form(f) / gagliardo_form_direct(f, max_points));
  }
  double sum = 0.0;
  for (double r : cal.ratios) sum += r;
  cal.constant = sum / static_cast<double>(cal.ratios.size());
  const auto [lo, hi] = std::minmax_element(cal.ratios.begin(), cal.ratios.end());
  cal.spread = (*hi - *lo) / cal.constant;
  return cal;
}

}  // namespace fracspec
