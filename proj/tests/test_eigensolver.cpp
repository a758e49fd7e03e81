#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fracspec/eigensolver.hpp"
#include "fracspec/lobpcg.hpp"
#include "helpers.hpp"

using namespace fracspec;
using std::numbers::pi;

namespace {

GridSpec desk() { return GridSpec(1, 20.0, 256, 0.25); }

SolveOptions with_k(int k) {
  SolveOptions o;
  o.k = k;
  return o;
}

std::vector<double> multiplier_spectrum(const GridSpec& g, double beta) {
  std::vector<double> out;
  for (std::size_t k = 0; k < g.size(); ++k) out.push_back(std::pow(g.frequency_norm(k), 2.0 * g.order()) + beta);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("constant potential on a 2 pi box") {
  const GridSpec g(1, pi, 64, 0.25);
  const OperatorSpec op(constant_one(g), 1.0);
  const auto pairs = lowest_eigenpairs(op, with_k(3));
  REQUIRE(pairs.size() == 3);
  CHECK(pairs[0].lambda == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(pairs[1].lambda == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(pairs[2].lambda == doctest::Approx(2.0).epsilon(1e-10));
  // ground state is the constant
  const double c = 1.0 / std::sqrt(2.0 * pi);
  for (std::size_t k = 0; k < g.size(); ++k) CHECK(pairs[0].u[k] == doctest::Approx(c).epsilon(1e-8));
  // the degenerate pair spans {cos x, sin x}
  const Field cs = Field::sample(g, [](double x) { return std::cos(x); }) * (1.0 / std::sqrt(pi));
  const Field sn = Field::sample(g, [](double x) { return std::sin(x); }) * (1.0 / std::sqrt(pi));
  for (int j = 1; j <= 2; ++j) {
    const double a = l2_inner(pairs[j].u, cs);
    const double b = l2_inner(pairs[j].u, sn);
    CHECK(a * a + b * b == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("gaussian well against the dense oracle") {
  const OperatorSpec op(gaussian_well(desk(), 1.0, 1.0), 1.0);
  const auto dense = dense_oracle(op);
  const auto pairs = lowest_eigenpairs(op, with_k(5));
  REQUIRE(pairs.size() == 5);
  CHECK(pairs[0].lambda < 1.0);
  for (int j = 0; j < 5; ++j) CHECK(testing::rel(pairs[j].lambda, dense.values[j]) <= 1e-7);
  CHECK(testing::rel(pairs[1].lambda - pairs[0].lambda, dense.values[1] - dense.values[0]) <= 1e-7);
  CHECK(dense.asymmetry <= 1e-12);

  SUBCASE("ordering, residuals and orthonormality") {
    for (int i = 0; i < 5; ++i) {
      CHECK(pairs[i].residual <= 1e-9);
      CHECK(std::abs(l2_norm(pairs[i].u) - 1.0) <= 1e-12);
      if (i > 0) CHECK(pairs[i].lambda >= pairs[i - 1].lambda);
      for (int j = 0; j < i; ++j) CHECK(std::abs(l2_inner(pairs[i].u, pairs[j].u)) <= 1e-8);
    }
  }
  SUBCASE("rayleigh quotients") {
    for (const auto& p : pairs) CHECK(std::abs(rayleigh(op, p.u) - p.lambda) <= 1e-9);
  }
  SUBCASE("ground value bounds every probe") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const Field w = seed % 2 ? testing::random_field(desk(), seed)
                               : testing::smooth_random_field(desk(), seed, 1.0 + seed % 5);
      CHECK(pairs[0].lambda <= rayleigh(op, w) + 1e-9);
    }
  }
  SUBCASE("dense eigenvectors are eigenvectors") {
    const Eigen::VectorXd v = dense.vectors.col(0);
    const Field u(desk(), std::vector<double>(v.data(), v.data() + v.size()));
    const Field r = apply_l_beta(op, u) - u * dense.values[0];
    CHECK(r.max_abs() <= 1e-10);
  }
}

TEST_CASE("dense oracle on the constant potential") {
  for (double beta : {0.5, 2.0}) {
    const GridSpec g(1, 7.0, 128, 0.3);
    const auto dense = dense_oracle(OperatorSpec(constant_one(g), beta));
    const auto expected = multiplier_spectrum(g, beta);
    for (std::size_t i = 0; i < expected.size(); ++i) {
      CHECK(std::abs(dense.values[i] - expected[i]) <= 1e-10 * expected[i]);
    }
    CHECK(dense.asymmetry <= 1e-12);
  }
  SUBCASE("2-D") {
    const GridSpec g(2, 5.0, 16, 0.4);
    const auto dense = dense_oracle(OperatorSpec(constant_one(g), 1.0));
    const auto expected = multiplier_spectrum(g, 1.0);
    for (std::size_t i = 0; i < expected.size(); ++i) {
      CHECK(std::abs(dense.values[i] - expected[i]) <= 1e-10 * expected[i]);
    }
  }
  SUBCASE("cap") {
    const GridSpec g(1, 20.0, 512, 0.25);
    CHECK_THROWS_AS(dense_oracle(OperatorSpec(constant_one(g), 1.0), 256), GridTooLargeForOracle);
  }
}

TEST_CASE("solver errors") {
  const GridSpec g(1, 10.0, 64, 0.25);
  const OperatorSpec op(gaussian_well(g, 1.0, 1.0), 1.0);
  SUBCASE("too many pairs") {
    CHECK_THROWS_AS(lowest_eigenpairs(op, with_k(17)), KTooLarge);
    CHECK_NOTHROW(lowest_eigenpairs(op, with_k(16)));
  }
  SUBCASE("iteration budget") {
    SolveOptions o = with_k(2);
    o.max_iter = 2;
    o.tol = 1e-13;
    CHECK_THROWS_AS(lowest_eigenpairs(op, o), NoConvergence);
  }
  SUBCASE("bad options") {
    CHECK_THROWS_AS(lowest_eigenpairs(op, with_k(0)), InvalidArgument);
    SolveOptions o;
    o.tol = 0.0;
    CHECK_THROWS_AS(lowest_eigenpairs(op, o), InvalidArgument);
  }
}

TEST_CASE("solves are reproducible") {
  const OperatorSpec op(gaussian_well(desk(), 1.0, 1.0), 2.0);
  SolveOptions o = with_k(3);
  const auto a = lowest_eigenpairs(op, o);
  const auto b = lowest_eigenpairs(op, o);
  for (int j = 0; j < 3; ++j) {
    CHECK(a[j].lambda == b[j].lambda);
    for (std::size_t k = 0; k < a[j].u.size(); ++k) REQUIRE(a[j].u[k] == b[j].u[k]);
  }
  o.seed = 7;
  const auto c = lowest_eigenpairs(op, o);
  for (int j = 0; j < 3; ++j) CHECK(testing::rel(a[j].lambda, c[j].lambda) < 1e-9);
}

TEST_CASE("generic pencil solve") {
  // diag(1..n) x = nu diag(w) x with the first coordinate constrained away
  const Eigen::Index n = 60;
  Eigen::VectorXd k(n), w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k[i] = 1.0 + i;
    w[i] = 1.0 + 0.5 * std::sin(double(i));
  }
  lobpcg::Problem p;
  p.dimension = n;
  p.stiffness = [&](const Eigen::MatrixXd& in, Eigen::MatrixXd& out) { out = k.asDiagonal() * in; };
  p.mass = [&](const Eigen::MatrixXd& in, Eigen::MatrixXd& out) { out = w.asDiagonal() * in; };
  p.constraints = Eigen::MatrixXd::Zero(n, 1);
  p.constraints(0, 0) = 1.0;
  lobpcg::Options o;
  o.count = 4;
  const auto r = lobpcg::solve(p, o);
  std::vector<double> expected;
  for (Eigen::Index i = 1; i < n; ++i) expected.push_back(k[i] / w[i]);
  std::sort(expected.begin(), expected.end());
  for (int j = 0; j < 4; ++j) {
    CHECK(r.values[j] == doctest::Approx(expected[j]).epsilon(1e-9));
    CHECK(std::abs(r.vectors(0, j)) < 1e-12);
  }
  const Eigen::MatrixXd gram = r.vectors.transpose() * w.asDiagonal() * r.vectors;
  CHECK((gram - Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-10);
}

TEST_CASE("gamma values") {
  SUBCASE("compact bump") {
    const OperatorSpec op(compact_bump(desk(), 2.0, 1.0), 1.0);
    const auto gammas = gamma_values(op, 3, 1e-9);
    const auto dense = dense_gamma_oracle(op);
    REQUIRE(gammas.size() == 3);
    CHECK(gammas[0].gamma > 0.0);
    for (int j = 0; j < 3; ++j) CHECK(testing::rel(gammas[j].gamma, dense[j]) <= 1e-6);
  }
  SUBCASE("gaussian well") {
    const OperatorSpec op(gaussian_well(desk(), 1.0, 1.0), 1.0);
    const auto gammas = gamma_values(op, 2, 1e-9);
    const auto dense = dense_gamma_oracle(op);
    CHECK(testing::rel(gammas[0].gamma, dense[0]) <= 1e-6);
    CHECK(testing::rel(gammas[1].gamma, dense[1]) <= 1e-6);
    const Field& u = gammas[0].u;
    double mean = 0.0;
    for (double v : u.values()) mean += v;
    CHECK(std::abs(mean / u.size()) < 1e-10);
    CHECK(testing::rel(multiplier_form(u), gammas[0].gamma * weighted_mass(op, u)) < 1e-6);
  }
  SUBCASE("infimum over mean-zero probes") {
    const OperatorSpec op(gaussian_well(desk(), 1.0, 1.0), 1.0);
    const double gamma1 = gamma_values(op, 1, 1e-9)[0].gamma;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Field w = testing::smooth_random_field(desk(), 900 + seed, 1.0 + seed % 4);
      double mean = 0.0;
      for (double v : w.values()) mean += v;
      w = w - Field::constant(desk(), mean / w.size());
      w = w * (1.0 / std::sqrt(weighted_mass(op, w)));
      CHECK(gamma1 <= multiplier_form(w) + 1e-9);
    }
  }
  SUBCASE("empty weight") {
    const OperatorSpec op(constant_one(desk()), 1.0);
    CHECK_THROWS_AS(gamma_values(op, 1, 1e-9), EmptyConstraint);
    CHECK_THROWS_AS(dense_gamma_oracle(op), EmptyConstraint);
  }
}

TEST_CASE("essential cutoff") {
  const GridSpec g = desk();
  CHECK(essential_cutoff(g) == doctest::Approx(10.0 * std::sqrt(pi / 20.0) / 256.0));
  CHECK(is_bound_state(0.8, 1.0, g));
  CHECK_FALSE(is_bound_state(1.0 - 0.5 * essential_cutoff(g), 1.0, g));
  CHECK_FALSE(is_bound_state(1.2, 1.0, g));
}

TEST_CASE("implication check") {
  SUBCASE("hypothesis met") {
    const OperatorSpec op(gaussian_well(desk(), 1.0, 1.0), 2.0);
    const auto r = implication_check(op, 1e-6);
    CHECK(r.hypothesis_met);
    CHECK(r.conclusion_met);
    CHECK(r.holds);
    CHECK(r.gamma1 < 2.0);
    CHECK(r.lambda1 < 2.0);
  }
  SUBCASE("vacuous below gamma1") {
    const OperatorSpec op(gaussian_well(desk(), 1.0, 1.0), 0.5);
    const auto r = implication_check(op, 1e-6);
    CHECK_FALSE(r.hypothesis_met);
    CHECK(r.holds);
    CHECK(r.note.find("hypothesis not met") != std::string::npos);
  }
  SUBCASE("constant potential") {
    const OperatorSpec op(constant_one(desk()), 1.0);
    const auto r = implication_check(op, 1e-6);
    CHECK(r.empty_constraint);
    CHECK(std::isnan(r.gamma1));
    CHECK(r.note.find("measure clause failed") != std::string::npos);
  }
}
