#pragma once

#include <string>
#include <variant>
#include <vector>

#include "fracspec/grid.hpp"

namespace fracspec {

inline constexpr double kDefaultTailTol = 1e-6;

/// g(x) = 1 - depth * exp(-|x|^2 / width^2)
struct GaussianWell {
  double depth = 1.0;
  double width = 1.0;
  bool operator==(const GaussianWell&) const = default;
};

/// g(x) = 1 - depth * chi(|x|), chi smooth, 1 on |x| <= radius/2, 0 on |x| >= radius.
struct CompactBump {
  double radius = 1.0;
  double depth = 1.0;
  bool operator==(const CompactBump&) const = default;
};

/// g == 1; violates the positive-measure clause on purpose.
struct ConstantOne {
  bool operator==(const ConstantOne&) const = default;
};

/// Samples supplied directly by the caller.
struct Tabulated {
  bool operator==(const Tabulated&) const = default;
};

using PotentialDescriptor = std::variant<GaussianWell, CompactBump, ConstantOne, Tabulated>;

std::string descriptor_name(const PotentialDescriptor& descriptor);

class Potential {
 public:
  /// Wraps raw samples without checking the hypotheses; see validate_g1.
  Potential(GridSpec grid, std::vector<double> values, PotentialDescriptor descriptor = Tabulated{},
            double tail_tol = kDefaultTailTol);

  const GridSpec& grid() const { return field_.grid(); }
  std::span<const double> values() const { return field_.values(); }
  const Field& field() const { return field_; }
  const PotentialDescriptor& descriptor() const { return descriptor_; }
  double tail_tol() const { return tail_tol_; }
  bool is_constant_one() const { return std::holds_alternative<ConstantOne>(descriptor_); }

 private:
  Field field_;
  PotentialDescriptor descriptor_;
  double tail_tol_;
};

/// Throws DepthViolation unless depth is in (0, 1], TailViolation when the
/// well has not decayed to within tail_tol of 1 at the box edge.
Potential gaussian_well(const GridSpec& grid, double depth, double width,
                        double tail_tol = kDefaultTailTol);
/// Throws TailViolation unless 0 < radius < L/2, DepthViolation unless depth in (0, 1].
Potential compact_bump(const GridSpec& grid, double radius, double depth,
                       double tail_tol = kDefaultTailTol);
Potential constant_one(const GridSpec& grid);

/// Builds the potential named by a descriptor (Tabulated is rejected).
Potential make_potential(const GridSpec& grid, const PotentialDescriptor& descriptor,
                         double tail_tol = kDefaultTailTol);

/// Per-clause outcome of the hypotheses 0 <= g <= 1, g -> 1 at infinity and
/// |{g < 1}| > 0 on the grid.
struct ValidationReport {
  bool bounds_ok = false;
  double min_value = 0.0;
  double max_value = 0.0;

  bool tail_ok = false;
  /// sup of (1 - g) over the outer 5% shell of the box.
  double tail_sup = 0.0;
  double tail_tol = 0.0;

  bool measure_ok = false;
  /// Fraction of grid points with g < 1 - 1e-12.
  double well_fraction = 0.0;

  bool all_passed() const { return bounds_ok && tail_ok && measure_ok; }
};

ValidationReport validate_g1(const Potential& potential);

}  // namespace fracspec
