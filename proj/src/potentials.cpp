#include "fracspec/potentials.hpp"

#include <algorithm>
#include <cmath>

namespace fracspec {

namespace {

constexpr double kShellFraction = 0.05;
constexpr double kWellThreshold = 1e-12;

double radius_of(const std::array<double, 2>& p) { return std::hypot(p[0], p[1]); }

void require_depth(double depth) {
  if (!(depth > 0.0 && depth <= 1.0)) {
    throw DepthViolation("well depth must lie in (0, 1]; depth 0 leaves {g < 1} empty");
  }
}

// exp(-1/x) for x > 0, else 0.
double smooth_step_piece(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

// 1 on r <= inner, 0 on r >= outer, C-infinity in between.
double smooth_cutoff(double r, double inner, double outer) {
  if (r <= inner) return 1.0;
  if (r >= outer) return 0.0;
  const double a = smooth_step_piece((outer - r) / (outer - inner));
  const double b = smooth_step_piece((r - inner) / (outer - inner));
  return a / (a + b);
}

}  // namespace

std::string descriptor_name(const PotentialDescriptor& descriptor) {
  struct Visitor {
    std::string operator()(const GaussianWell&) const { return "gaussian_well"; }
    std::string operator()(const CompactBump&) const { return "compact_bump"; }
    std::string operator()(const ConstantOne&) const { return "constant_one"; }
    std::string operator()(const Tabulated&) const { return "tabulated"; }
  };
  return std::visit(Visitor{}, descriptor);
}

Potential::Potential(GridSpec grid, std::vector<double> values, PotentialDescriptor descriptor,
                     double tail_tol)
    : field_(std::move(grid), std::move(values)),
      descriptor_(descriptor),
      tail_tol_(tail_tol) {
  if (!(tail_tol > 0.0)) throw InvalidArgument("tail tolerance must be positive");
}

Potential gaussian_well(const GridSpec& grid, double depth, double width, double tail_tol) {
  require_depth(depth);
  if (!(width > 0.0)) throw InvalidArgument("well width must be positive");
  const double L = grid.half_length();
  const double residue = depth * std::exp(-(L * L) / (width * width));
  if (residue > tail_tol) {
    throw TailViolation("gaussian well has not decayed at the box edge: 1 - g(L) = " +
                        std::to_string(residue));
  }
  std::vector<double> values(grid.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    const auto p = grid.position(k);
    const double r2 = p[0] * p[0] + p[1] * p[1];
    values[k] = 1.0 - depth * std::exp(-r2 / (width * width));
  }
  return Potential(grid, std::move(values), GaussianWell{depth, width}, tail_tol);
}

Potential compact_bump(const GridSpec& grid, double radius, double depth, double tail_tol) {
  if (!(radius > 0.0) || !(radius < grid.half_length() / 2.0)) {
    throw TailViolation("bump radius must lie in (0, L/2)");
  }
  require_depth(depth);
  std::vector<double> values(grid.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    values[k] = 1.0 - depth * smooth_cutoff(radius_of(grid.position(k)), radius / 2.0, radius);
  }
  return Potential(grid, std::move(values), CompactBump{radius, depth}, tail_tol);
}

Potential constant_one(const GridSpec& grid) {
  return Potential(grid, std::vector<double>(grid.size(), 1.0), ConstantOne{});
}

Potential make_potential(const GridSpec& grid, const PotentialDescriptor& descriptor,
                         double tail_tol) {
  if (const auto* w = std::get_if<GaussianWell>(&descriptor)) {
    return gaussian_well(grid, w->depth, w->width, tail_tol);
  }
  if (const auto* b = std::get_if<CompactBump>(&descriptor)) {
    return compact_bump(grid, b->radius, b->depth, tail_tol);
  }
  if (std::holds_alternative<ConstantOne>(descriptor)) return constant_one(grid);
  throw InvalidArgument("tabulated potentials need explicit samples");
}

ValidationReport validate_g1(const Potential& potential) {
  ValidationReport report;
  const auto& grid = potential.grid();
  const auto g = potential.values();
  const auto [lo, hi] = std::minmax_element(g.begin(), g.end());
  report.min_value = *lo;
  report.max_value = *hi;
  report.bounds_ok = *lo >= 0.0 && *hi <= 1.0;

  const double shell = (1.0 - kShellFraction) * grid.half_length();
  report.tail_tol = potential.tail_tol();
  std::size_t below = 0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto p = grid.position(k);
    if (std::max(std::abs(p[0]), std::abs(p[1])) >= shell) {
      report.tail_sup = std::max(report.tail_sup, 1.0 - g[k]);
    }
    if (g[k] < 1.0 - kWellThreshold) ++below;
  }
  report.tail_ok = potential.is_constant_one() || report.tail_sup <= report.tail_tol;
  report.well_fraction = static_cast<double>(below) / static_cast<double>(g.size());
  report.measure_ok = report.well_fraction > 0.0;
  return report;
}

}  // namespace fracspec
