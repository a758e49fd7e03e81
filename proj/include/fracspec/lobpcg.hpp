#pragma once

#include <cstdint>
#include <functional>

#include <Eigen/Dense>

namespace fracspec::lobpcg {

/// out = Op(in), column by column.
using BlockOperator = std::function<void(const Eigen::MatrixXd& in, Eigen::MatrixXd& out)>;

/// Symmetric pencil K x = nu M x, solved for its smallest nu.
///
/// K + M must be positive definite on the search space. Rayleigh-Ritz is done
/// in the K + M inner product, so M itself may be nearly singular (a weight
/// that vanishes on part of the domain).
struct Problem {
  Eigen::Index dimension = 0;
  BlockOperator stiffness;
  /// Identity when empty.
  BlockOperator mass;
  /// Symmetric positive approximation of K^{-1}; none when empty.
  BlockOperator preconditioner;
  /// Orthonormal columns spanning directions excluded from the search space.
  Eigen::MatrixXd constraints;
};

struct Options {
  int count = 1;
  /// 0 selects count + 2.
  int block_size = 0;
  double tol = 1e-9;
  int max_iter = 5000;
  std::uint64_t seed = 42;
};

struct Result {
  /// Ascending.
  Eigen::VectorXd values;
  /// M-orthonormal columns.
  Eigen::MatrixXd vectors;
  /// ||K x - nu M x||_2 (projected off the constraints).
  Eigen::VectorXd residuals;
  int iterations = 0;
};

/// Block locally optimal preconditioned conjugate gradient with soft locking.
/// Spaces smaller than five blocks are solved densely instead.
/// Throws NoConvergence when max_iter is exhausted and KTooLarge when the
/// block does not fit in the search space.
Result solve(const Problem& problem, const Options& options);

}  // namespace fracspec::lobpcg
