#include "fracspec/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fracspec/execution.hpp"
#include "fracspec/lobpcg.hpp"

namespace fracspec {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

void for_each_column(const MatrixXd& in, MatrixXd& out,
                     const std::function<void(std::span<const double>, std::span<double>)>& f) {
  out.resize(in.rows(), in.cols());
  parallel_for(static_cast<std::size_t>(in.cols()), [&](std::size_t c) {
    const auto col = static_cast<Index>(c);
    f(std::span<const double>(in.col(col).data(), static_cast<std::size_t>(in.rows())),
      std::span<double>(out.col(col).data(), static_cast<std::size_t>(out.rows())));
  });
}

std::vector<double> shifted_inverse_symbol(const FractionalLaplacian& lap, double shift) {
  const auto sym = lap.symbol();
  std::vector<double> out(sym.size());
  for (std::size_t k = 0; k < sym.size(); ++k) out[k] = 1.0 / (sym[k] + shift);
  return out;
}

void check_count(const GridSpec& grid, const SolveOptions& opts) {
  if (opts.k < 1) throw InvalidArgument("k must be at least 1");
  if (!(opts.tol > 0.0)) throw InvalidArgument("tol must be positive");
  const double limit = opts.max_fraction * static_cast<double>(grid.size());
  if (static_cast<double>(opts.k) > limit) {
    throw KTooLarge("k=" + std::to_string(opts.k) + " exceeds " + std::to_string(opts.max_fraction) +
                    " of the " + std::to_string(grid.size()) + " unknowns");
  }
}

lobpcg::Options lobpcg_options(const SolveOptions& opts) {
  lobpcg::Options out;
  out.count = opts.k;
  out.block_size = opts.block_size;
  out.tol = opts.tol;
  out.max_iter = opts.max_iter;
  out.seed = opts.seed;
  return out;
}

// Deterministic sign: the first sample of largest magnitude is positive.
void fix_sign(std::vector<double>& v) {
  std::size_t arg = 0;
  for (std::size_t k = 1; k < v.size(); ++k) {
    if (std::abs(v[k]) > std::abs(v[arg])) arg = k;
  }
  if (v[arg] < 0.0) {
    for (double& x : v) x = -x;
  }
}

std::vector<double> weight_of(const OperatorSpec& op) {
  const auto g = op.potential().values();
  std::vector<double> w(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) w[k] = 1.0 - g[k] + kWeightRegularization;
  return w;
}

bool weight_is_empty(const OperatorSpec& op) {
  const auto g = op.potential().values();
  return std::all_of(g.begin(), g.end(), [](double v) { return 1.0 - v <= kWeightRegularization; });
}

MatrixXd assemble(const GridSpec& grid, std::size_t cap,
                  const std::function<void(std::span<const double>, std::span<double>)>& apply) {
  const std::size_t size = grid.size();
  if (size > cap) throw GridTooLargeForOracle(size, cap);
  const auto n = static_cast<Index>(size);
  MatrixXd a(n, n);
  parallel_for(size, [&](std::size_t j) {
    std::vector<double> e(size, 0.0);
    e[j] = 1.0;
    apply(e, std::span<double>(a.col(static_cast<Index>(j)).data(), size));
  });
  return a;
}

}  // namespace

std::vector<EigenPair> lowest_eigenpairs(const OperatorSpec& op, const SolveOptions& opts) {
  const auto& grid = op.grid();
  check_count(grid, opts);
  const auto precond = shifted_inverse_symbol(op.laplacian(), op.beta());

  lobpcg::Problem problem;
  problem.dimension = static_cast<Index>(grid.size());
  problem.stiffness = [&](const MatrixXd& in, MatrixXd& out) {
    for_each_column(in, out, [&](auto x, auto y) { op.apply(x, y); });
  };
  problem.preconditioner = [&](const MatrixXd& in, MatrixXd& out) {
    for_each_column(in, out, [&](auto x, auto y) { op.laplacian().apply_multiplier(precond, x, y); });
  };

  const auto result = lobpcg::solve(problem, lobpcg_options(opts));
  const double root_cell = std::sqrt(grid.cell_volume());
  std::vector<EigenPair> pairs;
  pairs.reserve(static_cast<std::size_t>(opts.k));
  for (Index j = 0; j < result.values.size(); ++j) {
    const VectorXd& col = result.vectors.col(j);
    const double scale = 1.0 / (col.norm() * root_cell);
    std::vector<double> v(col.data(), col.data() + col.size());
    for (double& x : v) x *= scale;
    fix_sign(v);
    pairs.push_back(EigenPair{result.values(j), Field(grid, std::move(v)), result.residuals(j)});
  }
  return pairs;
}

DenseSpectrum dense_oracle(const OperatorSpec& op, std::size_t cap) {
  MatrixXd a = assemble(op.grid(), cap, [&](auto x, auto y) { op.apply(x, y); });
  DenseSpectrum out;
  out.asymmetry = (a - a.transpose()).cwiseAbs().maxCoeff();
  a = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(a);
  out.values = solver.eigenvalues();
  out.vectors = solver.eigenvectors();
  return out;
}

std::vector<GammaValue> gamma_values(const OperatorSpec& op, const SolveOptions& opts) {
  if (weight_is_empty(op)) throw EmptyConstraint();
  const auto& grid = op.grid();
  check_count(grid, opts);
  const auto w = weight_of(op);
  const auto size = static_cast<Index>(grid.size());
  double mean_w = 0.0;
  for (double x : w) mean_w += x;
  mean_w /= static_cast<double>(w.size());
  const auto precond = shifted_inverse_symbol(op.laplacian(), mean_w);
  const auto& lap = op.laplacian();

  lobpcg::Problem problem;
  problem.dimension = size;
  problem.stiffness = [&](const MatrixXd& in, MatrixXd& out) {
    for_each_column(in, out, [&](auto x, auto y) {
      lap.apply(x, y);
      for (std::size_t k = 0; k < y.size(); ++k) y[k] += w[k] * x[k];
    });
  };
  problem.mass = [&](const MatrixXd& in, MatrixXd& out) {
    out = Eigen::Map<const VectorXd>(w.data(), size).asDiagonal() * in;
  };
  problem.preconditioner = [&](const MatrixXd& in, MatrixXd& out) {
    for_each_column(in, out, [&](auto x, auto y) { lap.apply_multiplier(precond, x, y); });
  };
  problem.constraints = MatrixXd::Constant(size, 1, 1.0 / std::sqrt(static_cast<double>(size)));

  const auto result = lobpcg::solve(problem, lobpcg_options(opts));
  const double root_cell = std::sqrt(grid.cell_volume());
  std::vector<GammaValue> out;
  out.reserve(static_cast<std::size_t>(opts.k));
  for (Index j = 0; j < result.values.size(); ++j) {
    const VectorXd& col = result.vectors.col(j);
    double mass = 0.0;
    for (Index i = 0; i < size; ++i) mass += w[static_cast<std::size_t>(i)] * col(i) * col(i);
    const double scale = 1.0 / (std::sqrt(mass) * root_cell);
    std::vector<double> v(col.data(), col.data() + col.size());
    for (double& x : v) x *= scale;
    fix_sign(v);
    out.push_back(GammaValue{result.values(j) - 1.0, Field(grid, std::move(v)), result.residuals(j)});
  }
  return out;
}

std::vector<GammaValue> gamma_values(const OperatorSpec& op, int k, double tol) {
  SolveOptions opts;
  opts.k = k;
  opts.tol = tol;
  return gamma_values(op, opts);
}

Eigen::VectorXd dense_gamma_oracle(const OperatorSpec& op, std::size_t cap) {
  if (weight_is_empty(op)) throw EmptyConstraint();
  const auto& lap = op.laplacian();
  MatrixXd a = assemble(op.grid(), cap, [&](auto x, auto y) { lap.apply(x, y); });
  a = 0.5 * (a + a.transpose());
  const auto w = weight_of(op);
  const Index n = a.rows();
  for (Index i = 0; i < n; ++i) a(i, i) += w[static_cast<std::size_t>(i)];

  // Householder reflector mapping e_0 to the normalized constant; its other
  // columns span the mean-zero subspace.
  VectorXd h = VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  h(0) -= 1.0;
  h.normalize();
  MatrixXd q = MatrixXd::Identity(n, n) - 2.0 * h * h.transpose();
  const MatrixXd basis = q.rightCols(n - 1);
  const MatrixXd kq = basis.transpose() * a * basis;
  const MatrixXd wq =
      basis.transpose() * Eigen::Map<const VectorXd>(w.data(), n).asDiagonal() * basis;

  // W x = mu (A + W) x, mu in (0, 1); Gamma = 1/mu - 1.
  Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> solver(0.5 * (wq + wq.transpose()),
                                                            0.5 * (kq + kq.transpose()),
                                                            Eigen::EigenvaluesOnly);
  const VectorXd& mu = solver.eigenvalues();
  VectorXd gamma(mu.size());
  for (Index i = 0; i < mu.size(); ++i) {
    const double m = mu(mu.size() - 1 - i);
    gamma(i) = m > 0.0 ? 1.0 / m - 1.0 : std::numeric_limits<double>::infinity();
  }
  return gamma;
}

double essential_cutoff(const GridSpec& grid) {
  const double base = std::numbers::pi / grid.half_length();
  return 10.0 * std::pow(base, 2.0 * grid.order()) / static_cast<double>(grid.points_per_axis());
}

bool is_bound_state(double lambda, double beta, const GridSpec& grid) {
  return lambda < beta - essential_cutoff(grid);
}

ImplicationReport implication_check(const OperatorSpec& op, double tol, const SolveOptions& opts) {
  ImplicationReport report;
  report.beta = op.beta();
  report.tol = tol;
  SolveOptions one = opts;
  one.k = 1;
  report.lambda1 = lowest_eigenpairs(op, one).front().lambda;
  report.conclusion_met = report.lambda1 < op.beta() - tol;
  try {
    report.gamma1 = gamma_values(op, one).front().gamma;
  } catch (const EmptyConstraint&) {
    report.empty_constraint = true;
    report.gamma1 = std::numeric_limits<double>::quiet_NaN();
    report.hypothesis_met = false;
    report.holds = true;
    report.note = "measure clause failed: the weight 1-g vanishes identically";
    return report;
  }
  report.hypothesis_met = report.gamma1 < op.beta() - tol;
  report.holds = !report.hypothesis_met || report.conclusion_met;
  if (!report.hypothesis_met) {
    report.note = "hypothesis not met";
  } else if (report.holds) {
    report.note = "hypothesis met and conclusion holds";
  } else {
    report.note = "hypothesis met but conclusion fails";
  }
  return report;
}

}  // namespace fracspec
