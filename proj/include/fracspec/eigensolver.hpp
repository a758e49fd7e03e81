#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fracspec/operator.hpp"

namespace fracspec {

struct SolveOptions {
  int k = 1;
  double tol = 1e-9;
  int max_iter = 5000;
  /// 0 selects k + 2.
  int block_size = 0;
  std::uint64_t seed = 42;
  /// k may not exceed this fraction of the n^N unknowns.
  double max_fraction = 0.25;
};

struct EigenPair {
  double lambda = 0.0;
  /// Unit L2 norm; sign fixed so the largest-magnitude sample is positive.
  Field u;
  /// ||L u - lambda u||_2.
  double residual = 0.0;
};

/// Lowest k eigenpairs of L_beta, ascending, by preconditioned LOBPCG.
std::vector<EigenPair> lowest_eigenpairs(const OperatorSpec& op, const SolveOptions& opts);

inline constexpr std::size_t kDefaultDenseCap = 4096;

struct DenseSpectrum {
  /// Ascending.
  Eigen::VectorXd values;
  /// Euclidean-orthonormal columns over the samples.
  Eigen::MatrixXd vectors;
  /// max |A - A^T| of the assembled matrix before symmetrization.
  double asymmetry = 0.0;
};

/// Assembles L_beta column by column and diagonalizes it densely.
DenseSpectrum dense_oracle(const OperatorSpec& op, std::size_t cap = kDefaultDenseCap);

/// Regularization added to the weight 1 - g so the pencil stays definite.
inline constexpr double kWeightRegularization = 1e-10;

struct GammaValue {
  double gamma = 0.0;
  /// Mean zero, weighted_mass (with the regularized weight) equal to 1.
  Field u;
  /// ||A u - gamma (1 - g + eps) u||_2 with A the multiplier operator.
  double residual = 0.0;
};

/// Lowest generalized eigenvalues of the seminorm form against the weight
/// (1 - g + eps), restricted to mean-zero fields. Throws EmptyConstraint when
/// the weight is <= eps everywhere.
std::vector<GammaValue> gamma_values(const OperatorSpec& op, const SolveOptions& opts);
std::vector<GammaValue> gamma_values(const OperatorSpec& op, int k, double tol);

/// Dense counterpart of gamma_values; returns ascending Gamma values.
Eigen::VectorXd dense_gamma_oracle(const OperatorSpec& op, std::size_t cap = kDefaultDenseCap);

/// 10 (pi / L)^{2s} / n: Ritz values within this distance of beta belong to
/// the discretized essential spectrum.
double essential_cutoff(const GridSpec& grid);
bool is_bound_state(double lambda, double beta, const GridSpec& grid);

struct ImplicationReport {
  double beta = 0.0;
  double tol = 0.0;
  double lambda1 = 0.0;
  /// NaN when the weight is empty.
  double gamma1 = 0.0;
  bool hypothesis_met = false;  // gamma1 < beta - tol
  bool conclusion_met = false;  // lambda1 < beta - tol
  /// The predicate hypothesis => conclusion.
  bool holds = false;
  bool empty_constraint = false;
  std::string note;
};

/// Evaluates (gamma1 < beta - tol) => (lambda1 < beta - tol).
ImplicationReport implication_check(const OperatorSpec& op, double tol,
                                    const SolveOptions& opts = {});

}  // namespace fracspec
