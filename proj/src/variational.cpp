#include "fracspec/variational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <optional>

#include "fracspec/execution.hpp"
#include "fracspec/fourier.hpp"

namespace fracspec {

namespace {

constexpr double kDegenerateGap = 1e-6;
constexpr double kUnitNormTol = 1e-12;
constexpr double kDenominatorFloor = 1e-14;

Status status_of(bool ok) { return ok ? Status::pass : Status::fail; }

double relative_gap(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

}  // namespace

std::string to_string(Status status) {
  switch (status) {
    case Status::pass:
      return "pass";
    case Status::fail:
      return "fail";
    case Status::skipped:
      return "skipped";
    case Status::expected_negative:
      return "expected_negative";
  }
  return "fail";
}

void require_converged(const EigenPair& pair, double tol) {
  if (!(pair.residual <= tol)) throw NotConverged(pair.residual, tol);
}

std::vector<double> feasible_dilation_schedule(const Field& u, double ratio, std::size_t max_count,
                                               const DilationOptions& options) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw InvalidArgument("schedule ratio must lie in (0, 1)");
  std::vector<double> out;
  double t = 1.0;
  while (out.size() < max_count &&
         dilation_wrapped_fraction(u, t) <= options.max_wrapped_fraction) {
    out.push_back(t);
    t *= ratio;
  }
  return out;
}

DilationCurve dilation_limit_check(const OperatorSpec& op, const Field& u,
                                   const std::vector<double>& t_list,
                                   const DilationOptions& options,
                                   const CheckTolerances& tolerances) {
  if (!(op.grid() == u.grid())) throw GridMismatch();
  if (t_list.size() < 2) throw InvalidArgument("dilation check needs at least two values of t");
  for (std::size_t i = 0; i < t_list.size(); ++i) {
    if (!(t_list[i] > 0.0 && t_list[i] <= 1.0)) throw InvalidArgument("t must lie in (0, 1]");
    if (i > 0 && !(t_list[i] < t_list[i - 1])) throw InvalidArgument("t_list must be descending");
  }
  const double norm = l2_norm(u);
  if (std::abs(norm - 1.0) > 1e-8) throw InvalidArgument("dilation probe must have unit L2 norm");

  DilationCurve curve;
  curve.t = t_list;
  curve.phi.resize(t_list.size());
  curve.seminorm.resize(t_list.size());
  curve.potential.resize(t_list.size());
  // Validate every t before spending time on the transforms.
  for (double t : t_list) {
    const double wrapped = dilation_wrapped_fraction(u, t);
    if (wrapped > options.max_wrapped_fraction) throw DilationOutOfBox(t, wrapped);
  }
  parallel_for(t_list.size(), [&](std::size_t i) {
    const Field v = dilate(u, t_list[i], options);
    curve.seminorm[i] = multiplier_form(v);
    curve.potential[i] = potential_energy(op, v);
    curve.phi[i] = curve.seminorm[i] + curve.potential[i];
  });

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const auto m = static_cast<double>(t_list.size());
  for (std::size_t i = 0; i < t_list.size(); ++i) {
    const double x = std::log(t_list[i]);
    const double y = std::log(curve.seminorm[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  curve.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);

  const double beta = op.beta();
  const double expected = 2.0 * op.order();
  const std::size_t last = t_list.size() - 1;
  const double final_gap = std::abs(curve.phi[last] - beta);
  bool monotone = true;
  for (std::size_t i = t_list.size() / 2 + 1; i <= last; ++i) {
    if (std::abs(curve.phi[i] - beta) > std::abs(curve.phi[i - 1] - beta)) monotone = false;
  }

  auto& v = curve.verdict;
  v.name = "dilation_limit";
  v.measure("slope", curve.slope);
  v.measure("expected_slope", expected);
  v.measure("t_min", t_list[last]);
  v.measure("phi_at_t_min", curve.phi[last]);
  v.measure("potential_at_t_min", curve.potential[last]);
  v.measure("gap_at_t_min", final_gap);
  v.measure("trailing_gap_monotone", monotone ? 1.0 : 0.0);
  v.tolerance("slope", tolerances.slope);
  v.tolerance("gap_over_beta", tolerances.limit_gap);
  const bool slope_ok = std::abs(curve.slope - expected) <= tolerances.slope;
  const bool gap_ok = final_gap <= tolerances.limit_gap * beta;
  v.status = status_of(slope_ok && gap_ok && monotone);
  if (!slope_ok) v.note = "seminorm does not scale like t^{2s}";
  else if (!gap_ok) v.note = "Phi(v_t) has not reached beta at the smallest feasible t";
  else if (!monotone) v.note = "gap to beta is not monotone over the trailing half";
  return curve;
}

std::vector<bool> interior_mask(const GridSpec& grid) {
  const double limit = grid.half_length() - 2.0 * grid.spacing();
  std::vector<bool> mask(grid.size());
  for (std::size_t k = 0; k < mask.size(); ++k) {
    const auto p = grid.position(k);
    mask[k] = std::max(std::abs(p[0]), std::abs(p[1])) < limit;
  }
  return mask;
}

Verdict positivity_check(const Field& e1, const CheckTolerances& tolerances) {
  const auto values = e1.values();
  std::size_t arg = 0;
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (std::abs(values[k]) > std::abs(values[arg])) arg = k;
  }
  const double sign = values[arg] < 0.0 ? -1.0 : 1.0;
  const auto mask = interior_mask(e1.grid());
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double interior_lo = lo;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double x = sign * values[k];
    lo = std::min(lo, x);
    hi = std::max(hi, x);
    if (mask[k]) interior_lo = std::min(interior_lo, x);
  }
  Verdict v;
  v.name = "positivity";
  v.measure("min_value", lo);
  v.measure("max_value", hi);
  v.measure("interior_min_value", interior_lo);
  v.tolerance("relative_undershoot", tolerances.undershoot);
  v.status = status_of(hi > 0.0 && lo > -tolerances.undershoot * hi && interior_lo > 0.0);
  return v;
}

Verdict positivity_check(const EigenPair& e1, double tol, const CheckTolerances& tolerances) {
  require_converged(e1, tol);
  return positivity_check(e1.u, tolerances);
}

SignParts sign_parts(const Field& u) {
  const auto values = u.values();
  std::vector<double> plus(values.size(), 0.0);
  std::vector<double> minus(values.size(), 0.0);
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k] > 0.0) plus[k] = values[k];
    if (values[k] < 0.0) minus[k] = -values[k];
  }
  return SignParts{Field(u.grid(), std::move(plus)), Field(u.grid(), std::move(minus))};
}

Verdict nodal_check(const Field& u, const CheckTolerances& tolerances) {
  const double total = l2_inner(u, u);
  if (total == 0.0) throw ZeroField();
  const auto parts = sign_parts(u);
  const double plus = l2_inner(parts.plus, parts.plus) / total;
  const double minus = l2_inner(parts.minus, parts.minus) / total;
  Verdict v;
  v.name = "nodal";
  v.measure("plus_mass_fraction", plus);
  v.measure("minus_mass_fraction", minus);
  v.tolerance("min_part_mass_fraction", tolerances.part_mass);
  v.status = status_of(plus > tolerances.part_mass && minus > tolerances.part_mass);
  return v;
}

Verdict nodal_check(const EigenPair& u, double tol, const CheckTolerances& tolerances) {
  require_converged(u, tol);
  return nodal_check(u.u, tolerances);
}

Verdict simplicity_check(const std::vector<double>& lambdas,
                         const CheckTolerances& tolerances) {
  if (lambdas.size() < 2) throw InvalidArgument("simplicity check needs two eigenvalues");
  const double gap = lambdas[1] - lambdas[0];
  const double threshold = tolerances.simplicity_gap * std::max(1.0, std::abs(lambdas[0]));
  Verdict v;
  v.name = "simplicity";
  v.measure("lambda1", lambdas[0]);
  v.measure("lambda2", lambdas[1]);
  v.measure("gap", gap);
  v.tolerance("min_gap", threshold);
  v.status = status_of(gap > threshold);
  return v;
}

Verdict orthogonality_check(const Field& u, double lambda_u, const Field& v, double lambda_v,
                            const CheckTolerances& tolerances) {
  const double gap = std::abs(lambda_u - lambda_v);
  if (!(gap > kDegenerateGap)) throw DegeneratePair(gap);
  const double inner = l2_inner(u, v);
  Verdict out;
  out.name = "orthogonality";
  out.measure("inner_product", inner);
  out.measure("eigenvalue_gap", gap);
  out.tolerance("max_abs_inner_product", tolerances.orthogonality);
  out.status = status_of(std::abs(inner) <= tolerances.orthogonality);
  return out;
}

Verdict orthogonality_check(const EigenPair& u, const EigenPair& v, double tol,
                            const CheckTolerances& tolerances) {
  require_converged(u, tol);
  require_converged(v, tol);
  return orthogonality_check(u.u, u.lambda, v.u, v.lambda, tolerances);
}

double pohozaev_residual(const Field& u, double mu) {
  const double norm2 = l2_inner(u, u);
  if (norm2 == 0.0) throw ZeroField();
  const auto& grid = u.grid();
  const double n = grid.dimension();
  const double s = grid.order();
  return 0.5 * (n - 2.0 * s) * multiplier_form(u) - 0.5 * n * mu * norm2;
}

double pohozaev_root(const Field& u) {
  const double norm2 = l2_inner(u, u);
  if (norm2 == 0.0) throw ZeroField();
  const auto& grid = u.grid();
  const double n = grid.dimension();
  return (n - 2.0 * grid.order()) / n * multiplier_form(u) / norm2;
}

DecompositionSides decomposition_sides(const OperatorSpec& op, const Field& u, double lambda,
                                       double kernel_constant, std::size_t max_points) {
  if (!(op.grid() == u.grid())) throw GridMismatch();
  const auto parts = sign_parts(u);
  DecompositionSides out;
  out.cross = kernel_cross_term(parts.plus, parts.minus, max_points);
  const double shift = -2.0 * kernel_constant * out.cross;
  out.lhs_plus = phi(op, parts.plus);
  out.rhs_plus = shift + lambda * l2_inner(parts.plus, parts.plus);
  out.lhs_minus = phi(op, parts.minus);
  out.rhs_minus = shift + lambda * l2_inner(parts.minus, parts.minus);
  return out;
}

Verdict decomposition_identity_check(const OperatorSpec& op, const EigenPair& u2,
                                     double kernel_constant, double tol, std::size_t max_points,
                                     const CheckTolerances& tolerances) {
  require_converged(u2, tol);
  const auto nodal = nodal_check(u2.u, tolerances);
  if (!nodal.ok()) throw NotNodal("decomposition identity needs a sign-changing eigenfunction");
  const auto sides = decomposition_sides(op, u2.u, u2.lambda, kernel_constant, max_points);
  const double rel_plus = relative_gap(sides.lhs_plus, sides.rhs_plus);
  const double rel_minus = relative_gap(sides.lhs_minus, sides.rhs_minus);
  Verdict v;
  v.name = "decomposition_identity";
  v.measure("lambda2", u2.lambda);
  v.measure("kernel_constant", kernel_constant);
  v.measure("cross_term", sides.cross);
  v.measure("phi_plus", sides.lhs_plus);
  v.measure("rhs_plus", sides.rhs_plus);
  v.measure("relative_mismatch_plus", rel_plus);
  v.measure("phi_minus", sides.lhs_minus);
  v.measure("rhs_minus", sides.rhs_minus);
  v.measure("relative_mismatch_minus", rel_minus);
  v.tolerance("relative_mismatch", tolerances.decomposition);
  v.status = status_of(sides.cross >= 0.0 && rel_plus <= tolerances.decomposition &&
                       rel_minus <= tolerances.decomposition);
  return v;
}

PathResult minimax_path(const OperatorSpec& op, const EigenPair& u2, std::size_t num_samples,
                        double tol, const CheckTolerances& tolerances) {
  require_converged(u2, tol);
  if (!(u2.lambda < op.beta())) throw InvalidArgument("minimax path needs lambda2 < beta");
  if (num_samples < 2) throw InvalidArgument("path needs at least two samples");
  if (!nodal_check(u2.u, tolerances).ok()) throw NotNodal("minimax path needs a sign-changing eigenfunction");

  const auto parts = sign_parts(u2.u);
  const Field h0 = parts.plus * (1.0 / l2_norm(parts.plus));
  const Field h_half = parts.minus * (1.0 / l2_norm(parts.minus));
  const Field h1 = -h0;

  PathResult result;
  std::vector<double> ts(num_samples);
  for (std::size_t i = 0; i < num_samples; ++i) {
    ts[i] = static_cast<double>(i) / static_cast<double>(num_samples - 1);
  }
  std::vector<std::optional<Field>> fields(num_samples);
  std::vector<double> phis(num_samples);
  std::vector<double> bad_t;
  std::mutex bad_mutex;
  parallel_for(num_samples, [&](std::size_t i) {
    const double t = ts[i];
    if (t == 0.0) {
      fields[i] = h0;
    } else if (t == 1.0) {
      fields[i] = h1;
    } else if (t == 0.5) {
      fields[i] = h_half;
    } else {
      const Field mix = parts.plus * std::cos(std::numbers::pi * t) +
                        parts.minus * std::sin(std::numbers::pi * t);
      const double norm = l2_norm(mix);
      if (norm < kDenominatorFloor) {
        std::lock_guard lock(bad_mutex);
        bad_t.push_back(t);
        return;
      }
      fields[i] = mix * (1.0 / norm);
    }
    phis[i] = phi(op, *fields[i]);
  });
  if (!bad_t.empty()) throw DenominatorVanishes(*std::min_element(bad_t.begin(), bad_t.end()));

  double max_phi = -std::numeric_limits<double>::infinity();
  double arg_t = 0.0;
  double worst_norm = 0.0;
  for (std::size_t i = 0; i < num_samples; ++i) {
    worst_norm = std::max(worst_norm, std::abs(l2_norm(*fields[i]) - 1.0));
    if (phis[i] > max_phi) {
      max_phi = phis[i];
      arg_t = ts[i];
    }
    result.samples.push_back(PathSample{ts[i], std::move(*fields[i]), phis[i]});
  }
  const double h0_min = *std::min_element(h0.values().begin(), h0.values().end());
  bool antisymmetric = true;
  for (std::size_t k = 0; k < h0.size(); ++k) {
    if (!(h1[k] == -h0[k])) antisymmetric = false;
  }

  const double bound = u2.lambda + tolerances.path_slack * std::max(1.0, std::abs(u2.lambda));
  auto& v = result.verdict;
  v.name = "minimax_path";
  v.measure("lambda2", u2.lambda);
  v.measure("max_phi", max_phi);
  v.measure("argmax_t", arg_t);
  v.measure("h0_min_value", h0_min);
  v.measure("endpoint_antisymmetric", antisymmetric ? 1.0 : 0.0);
  v.measure("max_norm_deviation", worst_norm);
  v.measure("num_samples", static_cast<double>(num_samples));
  v.tolerance("phi_slack", tolerances.path_slack);
  v.tolerance("unit_norm", kUnitNormTol);
  v.status = status_of(h0_min >= 0.0 && antisymmetric && worst_norm <= kUnitNormTol &&
                       max_phi <= bound);
  return result;
}

}  // namespace fracspec
