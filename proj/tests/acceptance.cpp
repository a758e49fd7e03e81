// Runs the eleven acceptance criteria and prints one PASS/FAIL line for each.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "fracspec/commands.hpp"
#include "fracspec/execution.hpp"
#include "fracspec/variational.hpp"

using namespace fracspec;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, a, b, c, d);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

SolveOptions k_pairs(int k) {
  SolveOptions o;
  o.k = k;
  return o;
}

GridSpec desk(double L = 20.0, std::size_t n = 256) { return GridSpec(1, L, n, 0.25); }

Outcome plane_waves() {
  const GridSpec g(1, pi, 64, 0.25);
  double worst = 0.0;
  for (int m = 1; m <= 16; ++m) {
    for (int phase = 0; phase < 2; ++phase) {
      const Field u = Field::sample(g, [&](double x) { return phase ? std::sin(m * x) : std::cos(m * x); });
      const Field expected = u * std::pow(double(m), 0.5);
      worst = std::max(worst, l2_norm(apply_fractional_laplacian(u) - expected) / l2_norm(expected));
    }
  }
  const double dc = apply_fractional_laplacian(Field::constant(g, 1.0)).max_abs();
  return {worst <= 1e-12 && dc <= 1e-12,
          fmt("max relative error %.2e over 0 < |m| <= 16, zero mode residue %.1e (tol 1e-12)", worst, dc)};
}

Outcome oracle_equivalence() {
  double worst = 0.0;
  for (bool constant : {true, false}) {
    for (double beta : {0.5, 1.0, 2.0}) {
      const GridSpec g = desk();
      const OperatorSpec op(constant ? constant_one(g) : gaussian_well(g, 1.0, 1.0), beta);
      const auto pairs = lowest_eigenpairs(op, k_pairs(5));
      const auto dense = dense_oracle(op);
      for (int j = 0; j < 5; ++j) worst = std::max(worst, rel(pairs[j].lambda, dense.values[j]));
    }
  }
  return {worst <= 1e-7, fmt("max relative difference %.2e over 6 operators x 5 eigenvalues (tol 1e-7)", worst)};
}

Outcome empty_point_spectrum() {
  bool ok = true;
  double lowest_gap = 0.0;
  double min_ritz = INFINITY;
  for (double L : {10.0, 20.0, 40.0}) {
    const GridSpec g = desk(L, static_cast<std::size_t>(L * 12.8));
    const auto pairs = lowest_eigenpairs(OperatorSpec(constant_one(g), 1.0), k_pairs(5));
    for (const auto& p : pairs) {
      min_ritz = std::min(min_ritz, p.lambda);
      ok = ok && p.lambda >= 1.0 - 1e-8;
    }
    lowest_gap = std::max(lowest_gap, std::abs(pairs[0].lambda - 1.0));
  }
  ok = ok && lowest_gap <= 1e-10;
  return {ok, fmt("smallest Ritz value %.15g, |lambda1 - beta| <= %.2e over L in {10, 20, 40} (tols 1e-8, 1e-10)",
                  min_ritz, lowest_gap)};
}

double margin_of(double L, std::size_t n) {
  const OperatorSpec op(gaussian_well(desk(L, n), 1.0, 1.0), 1.0);
  return 1.0 - lowest_eigenpairs(op, k_pairs(2))[0].lambda;
}

Outcome stable_margin() {
  std::ifstream in(FRACSPEC_SOURCE_DIR "/tests/golden/margin.txt");
  double golden = NAN;
  in >> golden;
  const double base = margin_of(20.0, 256);
  const double refined = margin_of(20.0, 512);
  const double grown = margin_of(30.0, 384);
  const double d_refine = rel(refined, base);
  const double d_grow = rel(grown, base);
  const bool ok = base > 0.0 && rel(base, golden) <= 1e-7 && d_refine < 0.05 && d_grow < 0.05;
  return {ok, fmt("margin %.10f (golden %.10f); change %.2e under n 256->512, %.2e under L 20->30 (tol 5e-2)",
                  base, golden, d_refine, d_grow)};
}

Outcome bound_and_dilation() {
  double worst = -INFINITY;
  for (double beta : {0.5, 1.0, 2.0, 4.0}) {
    const OperatorSpec op(gaussian_well(desk(), 1.0, 1.0), beta);
    worst = std::max(worst, lowest_eigenpairs(op, k_pairs(1))[0].lambda - beta);
  }
  const GridSpec wide(1, 40000.0, 65536, 0.25);
  const OperatorSpec op(gaussian_well(wide, 1.0, 1.0), 1.0);
  Field u = Field::sample(wide, [](double x) { return std::exp(-x * x / 32.0); });
  u = u * (1.0 / l2_norm(u));
  const auto curve = dilation_limit_check(op, u, feasible_dilation_schedule(u));
  const double gap = std::abs(curve.phi.back() - 1.0);
  const bool ok = worst <= 1e-8 && curve.verdict.status == Status::pass;
  return {ok, fmt("max lambda1 - beta %.3f (tol 1e-8); dilation slope %.4f vs 2s = 0.5 (tol 0.05), "
                  "gap %.4f at t = %.3g (tol 0.01)",
                  worst, curve.slope, gap, curve.t.back())};
}

Outcome eigenfunction_suite() {
  std::string detail;
  bool ok = true;
  for (double beta : {1.0, 4.0}) {
    const OperatorSpec op(gaussian_well(desk(), 1.0, 1.0), beta);
    const auto pairs = lowest_eigenpairs(op, k_pairs(2));
    const auto pos = positivity_check(pairs[0], 1e-9);
    const auto simple = simplicity_check({pairs[0].lambda, pairs[1].lambda});
    const auto orth = orthogonality_check(pairs[0], pairs[1], 1e-9);
    bool here = pos.ok() && simple.ok() && orth.ok();
    std::string nodal = "n/a (lambda2 >= beta)";
    if (pairs[1].lambda < beta) {
      const auto nv = nodal_check(pairs[1], 1e-9);
      here = here && nv.ok();
      nodal = nv.ok() ? "pass" : "fail";
    }
    ok = ok && here;
    detail += fmt("beta=%g: gap %.3e, |<e1,u2>| %.1e, ", beta, pairs[1].lambda - pairs[0].lambda,
                  std::abs(l2_inner(pairs[0].u, pairs[1].u)));
    detail += "positivity " + to_string(pos.status) + ", nodal " + nodal + "; ";
  }
  return {ok, detail};
}

Outcome implication() {
  bool ok = true;
  int hypothesis_points = 0;
  double worst = 0.0;
  for (double beta : {0.5, 1.0, 2.0, 4.0}) {
    const OperatorSpec op(gaussian_well(desk(), 1.0, 1.0), beta);
    const auto rep = implication_check(op, 1e-6);
    const double dense = dense_gamma_oracle(op)[0];
    worst = std::max(worst, rel(rep.gamma1, dense));
    ok = ok && rep.holds;
    hypothesis_points += rep.hypothesis_met;
  }
  ok = ok && worst <= 1e-6 && hypothesis_points > 0;
  return {ok, fmt("implication holds at all %g hypothesis points of the beta sweep; "
                  "gamma1 vs dense pencil %.2e (tol 1e-6)",
                  hypothesis_points, worst)};
}

const std::vector<EigenPair>& nodal_pairs(const OperatorSpec& op) {
  static const auto pairs = lowest_eigenpairs(op, k_pairs(2));
  return pairs;
}

const OperatorSpec& nodal_op() {
  static const OperatorSpec op(gaussian_well(desk(), 1.0, 1.0), 4.0);
  return op;
}

Outcome witness_path() {
  const auto& u2 = nodal_pairs(nodal_op())[1];
  const auto result = minimax_path(nodal_op(), u2, 101);
  double top = -INFINITY;
  double norm_err = 0.0;
  for (const auto& s : result.samples) {
    top = std::max(top, s.phi_value);
    norm_err = std::max(norm_err, std::abs(l2_norm(s.h) - 1.0));
  }
  return {result.verdict.ok(), fmt("beta=4, lambda2 %.10f, max phi on path %.10f, norm error %.1e (slack 1e-6)",
                                   u2.lambda, top, norm_err)};
}

Outcome decomposition() {
  const auto& u2 = nodal_pairs(nodal_op())[1];
  const auto cal = calibrate_kernel_constant(desk());
  const auto sides = decomposition_sides(nodal_op(), u2.u, u2.lambda, cal.constant);
  const double rp = std::abs(sides.lhs_plus - sides.rhs_plus) / std::abs(sides.rhs_plus);
  const double rm = std::abs(sides.lhs_minus - sides.rhs_minus) / std::abs(sides.rhs_minus);
  const auto v = decomposition_identity_check(nodal_op(), u2, cal.constant);
  return {v.ok() && sides.cross >= 0.0,
          fmt("relative mismatch %.2e (plus), %.2e (minus), tol 0.05; cross term %.4e >= 0; constant %.5f",
              rp, rm, sides.cross, cal.constant)};
}

Outcome proportionality() {
  const auto cal = calibrate_kernel_constant(desk(20.0, 128));
  return {cal.ratios.size() == 5 && cal.spread < 0.02,
          fmt("ratio %.6f with relative spread %.2e over 5 fields (tol 2e-2)", cal.constant, cal.spread)};
}

Outcome determinism() {
  set_serial(true);
  const RunConfig config = load_config(FRACSPEC_SOURCE_DIR "/configs/gaussian_well.ini");
  const std::string a = render_json(cmd_verify(config), "");
  const std::string b = render_json(cmd_verify(config), "");
  return {a == b, fmt("two serial verify runs, %g-byte report bodies ", double(a.size())) +
                      (a == b ? "identical" : "differ")};
}

}  // namespace

int main() {
  set_serial(true);
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"plane-wave exactness", plane_waves},
      {"oracle equivalence", oracle_equivalence},
      {"empty point spectrum for g = 1", empty_point_spectrum},
      {"stable bound state below beta", stable_margin},
      {"spectral bound and dilation limit", bound_and_dilation},
      {"positivity, simplicity, nodality, orthogonality", eigenfunction_suite},
      {"gamma implication", implication},
      {"witness path", witness_path},
      {"sign-part decomposition identity", decomposition},
      {"form proportionality", proportionality},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
