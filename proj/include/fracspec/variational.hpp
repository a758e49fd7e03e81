#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "fracspec/dilation.hpp"
#include "fracspec/eigensolver.hpp"
#include "fracspec/gagliardo.hpp"
#include "fracspec/operator.hpp"

namespace fracspec {

enum class Status { pass, fail, skipped, expected_negative };

std::string to_string(Status status);

/// Outcome of one check together with the numbers that decided it.
struct Verdict {
  std::string name;
  Status status = Status::fail;
  /// Ordered (name, value) pairs.
  std::vector<std::pair<std::string, double>> measured;
  std::vector<std::pair<std::string, double>> tolerances;
  std::string note;

  /// True for pass and expected_negative.
  bool ok() const { return status != Status::fail; }
  void measure(std::string key, double value) { measured.emplace_back(std::move(key), value); }
  void tolerance(std::string key, double value) { tolerances.emplace_back(std::move(key), value); }
};

/// Thresholds used by the checks below.
struct CheckTolerances {
  /// |fitted seminorm slope - 2s|
  double slope = 0.05;
  /// |Phi(v_tmin) - beta| / beta
  double limit_gap = 0.01;
  /// Allowed negative undershoot of e1 relative to its maximum.
  double undershoot = 1e-8;
  /// Minimum mass fraction of each sign part.
  double part_mass = 1e-6;
  /// lambda2 - lambda1 must exceed this times max(1, |lambda1|).
  double simplicity_gap = 1e-6;
  double orthogonality = 1e-8;
  double decomposition = 0.05;
  /// max Phi(h(t)) may exceed lambda2 by this times max(1, lambda2).
  double path_slack = 1e-6;
};

/// Throws NotConverged when pair.residual > tol.
void require_converged(const EigenPair& pair, double tol);

struct DilationCurve {
  std::vector<double> t;
  std::vector<double> phi;
  /// multiplier_form(v_t)
  std::vector<double> seminorm;
  /// beta int g v_t^2
  std::vector<double> potential;
  /// Least-squares slope of log seminorm against log t.
  double slope = 0.0;
  Verdict verdict;
};

/// Phi(v_t) for v_t = dilate(u, t) along a descending t_list.
///
/// Passes when the seminorm slope is close to 2s, the gap |Phi - beta| is
/// nonincreasing over the trailing half of the list, and the gap at the
/// smallest t is within tolerances.limit_gap * beta.
DilationCurve dilation_limit_check(const OperatorSpec& op, const Field& u,
                                   const std::vector<double>& t_list,
                                   const DilationOptions& options = {},
                                   const CheckTolerances& tolerances = {});

/// 1, ratio, ratio^2, ... down to the smallest t the out-of-box guard admits
/// for u, at most max_count entries.
std::vector<double> feasible_dilation_schedule(const Field& u, double ratio = 0.5,
                                               std::size_t max_count = 40,
                                               const DilationOptions& options = {});

/// Mask of points at least 2 dx inside the box on every axis.
std::vector<bool> interior_mask(const GridSpec& grid);

Verdict positivity_check(const Field& e1, const CheckTolerances& tolerances = {});
Verdict positivity_check(const EigenPair& e1, double tol,
                         const CheckTolerances& tolerances = {});
Verdict nodal_check(const Field& u, const CheckTolerances& tolerances = {});
Verdict nodal_check(const EigenPair& u, double tol, const CheckTolerances& tolerances = {});
/// lambdas ascending, at least two.
Verdict simplicity_check(const std::vector<double>& lambdas,
                         const CheckTolerances& tolerances = {});
/// Throws DegeneratePair when |lambda_u - lambda_v| <= 1e-6.
Verdict orthogonality_check(const Field& u, double lambda_u, const Field& v, double lambda_v,
                            const CheckTolerances& tolerances = {});
Verdict orthogonality_check(const EigenPair& u, const EigenPair& v, double tol,
                            const CheckTolerances& tolerances = {});

/// ((N - 2s)/2) multiplier_form(u) - (N mu / 2) ||u||^2.
double pohozaev_residual(const Field& u, double mu);
/// The mu at which pohozaev_residual vanishes.
double pohozaev_root(const Field& u);

struct SignParts {
  Field plus;
  Field minus;
};

/// u = plus - minus with plus, minus >= 0 and disjoint supports.
SignParts sign_parts(const Field& u);

struct DecompositionSides {
  /// kernel_cross_term(u+, u-), always >= 0.
  double cross = 0.0;
  double lhs_plus = 0.0;
  double rhs_plus = 0.0;
  double lhs_minus = 0.0;
  double rhs_minus = 0.0;
};

/// Both sides of Phi(u+-) = -2 c J + lambda ||u+-||^2 with J the kernel cross
/// term and c the kernel calibration constant.
DecompositionSides decomposition_sides(const OperatorSpec& op, const Field& u, double lambda,
                                       double kernel_constant,
                                       std::size_t max_points = kDefaultQuadraticCap);

/// Passes when both instances agree within tolerances.decomposition relative.
/// Throws NotNodal.
Verdict decomposition_identity_check(const OperatorSpec& op, const EigenPair& u2,
                                     double kernel_constant, double tol = 1e-9,
                                     std::size_t max_points = kDefaultQuadraticCap,
                                     const CheckTolerances& tolerances = {});

struct PathSample {
  double t = 0.0;
  Field h;
  double phi_value = 0.0;
};

struct PathResult {
  std::vector<PathSample> samples;
  Verdict verdict;
};

/// h(t) = (u+ cos(pi t) + u- sin(pi t)) / ||...|| at num_samples uniform t in
/// [0, 1]. Passes when h(0) >= 0, h(1) == -h(0), every sample has unit norm
/// and max Phi(h(t)) <= lambda2 + path_slack max(1, lambda2).
/// Throws NotNodal, DenominatorVanishes, or InvalidArgument when lambda2 >= beta.
PathResult minimax_path(const OperatorSpec& op, const EigenPair& u2, std::size_t num_samples,
                        double tol = 1e-9, const CheckTolerances& tolerances = {});

}  // namespace fracspec
