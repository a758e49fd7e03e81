#pragma once

#include <cstddef>
#include <vector>

#include "fracspec/grid.hpp"

namespace fracspec {

/// Default cap on n^N for the O((n^N)^2) kernel sums.
inline constexpr std::size_t kDefaultQuadraticCap = 16384;

/// The singular kernel |z|^{-(N+2s)} summed over all periodic images of the
/// box, tabulated on grid displacements. The zero displacement is stored as 0,
/// which drops the diagonal x = y terms from every double sum.
class PeriodicKernel {
 public:
  explicit PeriodicKernel(const GridSpec& grid);

  const GridSpec& grid() const { return grid_; }
  /// Kernel at displacement (d1, d2) grid steps, each taken modulo n.
  double at(std::size_t d1, std::size_t d2 = 0) const {
    return table_[grid_.dimension() == 1 ? d1 : d1 * grid_.points_per_axis() + d2];
  }
  /// Kernel between two flat grid indices.
  double between(std::size_t a, std::size_t b) const;

 private:
  GridSpec grid_;
  std::vector<double> table_;
};

/// Hurwitz zeta sum_{k>=0} (k + a)^{-p}, for p > 1 and a in (0, 1].
double hurwitz_zeta(double p, double a);

/// Punctured double-sum quadrature of
///   int int |u(x) - u(y)|^2 / |x - y|^{N+2s} dx dy
/// over the periodic box. Throws GridTooLarge above max_points samples.
double gagliardo_form_direct(const Field& u, std::size_t max_points = kDefaultQuadraticCap);

/// sum_{x != y} f(x) h(y) K(x - y) dx^N dy^N with the same kernel.
double kernel_cross_term(const Field& f, const Field& h,
                         std::size_t max_points = kDefaultQuadraticCap);

/// Five smooth, localized probe fields scaled to the box (width L/10).
std::vector<Field> localized_test_fields(const GridSpec& grid);

struct KernelCalibration {
  /// Mean of multiplier_form / gagliardo_form_direct over the probes.
  double constant = 0.0;
  /// (max - min) / mean of the same ratios.
  double spread = 0.0;
  std::vector<double> ratios;
};

/// Empirical constant c with multiplier_form ~= c * gagliardo_form_direct.
KernelCalibration calibrate_kernel_constant(const GridSpec& grid,
                                            std::size_t max_points = kDefaultQuadraticCap);

}  // namespace fracspec
