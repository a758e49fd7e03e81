#include "fracspec/commands.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <typeinfo>

#include "fracspec/eigensolver.hpp"
#include "fracspec/errors.hpp"
#include "fracspec/gagliardo.hpp"

namespace fracspec {

namespace {

using nlohmann::json;

constexpr double kSpectralBoundSlack = 1e-8;
constexpr double kOracleTol = 1e-7;
constexpr double kGammaOracleTol = 1e-6;
constexpr double kSymmetryTol = 1e-12;
constexpr double kPohozaevRootTol = 1e-12;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string error_type(const std::exception& e) {
  if (dynamic_cast<const NoConvergence*>(&e)) return "NoConvergence";
  if (dynamic_cast<const NotConverged*>(&e)) return "NotConverged";
  if (dynamic_cast<const KTooLarge*>(&e)) return "KTooLarge";
  if (dynamic_cast<const EmptyConstraint*>(&e)) return "EmptyConstraint";
  if (dynamic_cast<const DegeneratePair*>(&e)) return "DegeneratePair";
  if (dynamic_cast<const NotNodal*>(&e)) return "NotNodal";
  if (dynamic_cast<const DenominatorVanishes*>(&e)) return "DenominatorVanishes";
  if (dynamic_cast<const DilationOutOfBox*>(&e)) return "DilationOutOfBox";
  if (dynamic_cast<const GridTooLarge*>(&e)) return "GridTooLarge";
  if (dynamic_cast<const GridTooLargeForOracle*>(&e)) return "GridTooLargeForOracle";
  if (dynamic_cast<const TailViolation*>(&e)) return "TailViolation";
  if (dynamic_cast<const DepthViolation*>(&e)) return "DepthViolation";
  if (dynamic_cast<const GridMismatch*>(&e)) return "GridMismatch";
  if (dynamic_cast<const ZeroField*>(&e)) return "ZeroField";
  if (dynamic_cast<const InvalidArgument*>(&e)) return "InvalidArgument";
  if (dynamic_cast<const IoError*>(&e)) return "IoError";
  if (dynamic_cast<const Error*>(&e)) return "Error";
  return "std::exception";
}

Report begin(const std::string& command, const RunConfig& config) {
  Report r;
  r.command = command;
  r.fingerprint = fingerprint_hex(config);
  r.config = canonical_json(config);
  return r;
}

// Runs one stage; a thrown error becomes a StageError plus a failed verdict
// named after the stage, so later stages still run and the report persists.
bool attempt(Report& report, const std::string& stage, const std::function<void()>& body) {
  try {
    body();
    return true;
  } catch (const std::exception& e) {
    report.errors.push_back(StageError{stage, error_type(e), e.what()});
    Verdict v;
    v.name = stage;
    v.status = Status::fail;
    v.note = error_type(e) + ": " + e.what();
    report.verdicts.push_back(std::move(v));
    return false;
  }
}

Verdict skipped(const std::string& name, const std::string& why) {
  Verdict v;
  v.name = name;
  v.status = Status::skipped;
  v.note = why;
  return v;
}

bool wants(const RunConfig& c, const std::string& check) {
  const auto& list = c.verify.checks;
  return std::find(list.begin(), list.end(), check) != list.end();
}

GridSpec make_grid(const GridConfig& g) {
  return GridSpec(g.dimension, g.half_length, g.points, g.order);
}

SolveOptions solve_options(const SolveConfig& s, int k) {
  SolveOptions o;
  o.k = k;
  o.tol = s.tol;
  o.max_iter = s.max_iter;
  o.block_size = s.block_size == 0 ? 0 : std::max(s.block_size, k);
  o.seed = s.seed;
  return o;
}

Verdict potential_verdict(const Potential& potential) {
  const auto rep = validate_g1(potential);
  Verdict v;
  v.name = "potential";
  v.measure("min_value", rep.min_value);
  v.measure("max_value", rep.max_value);
  v.measure("tail_sup", rep.tail_sup);
  v.measure("well_fraction", rep.well_fraction);
  v.measure("bounds_ok", rep.bounds_ok ? 1.0 : 0.0);
  v.measure("tail_ok", rep.tail_ok ? 1.0 : 0.0);
  v.measure("measure_ok", rep.measure_ok ? 1.0 : 0.0);
  v.tolerance("tail_tol", rep.tail_tol);
  if (rep.all_passed()) {
    v.status = Status::pass;
  } else if (potential.is_constant_one() && rep.bounds_ok && rep.tail_ok) {
    v.status = Status::expected_negative;
    v.note = "g == 1: the set {g < 1} is empty, so the measure clause fails as intended";
  } else {
    v.status = Status::fail;
  }
  return v;
}

json eigen_table(const std::vector<EigenPair>& pairs, double beta, const GridSpec& grid) {
  json rows = json::array();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    rows.push_back({{"index", i + 1},
                    {"lambda", pairs[i].lambda},
                    {"residual", pairs[i].residual},
                    {"bound_state", is_bound_state(pairs[i].lambda, beta, grid)}});
  }
  return rows;
}

CurveTable eigen_curve(const std::vector<EigenPair>& pairs, double beta, const GridSpec& grid) {
  CurveTable t{"eigenvalues", {"index", "lambda", "residual", "bound_state"}, {}};
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    t.rows.push_back({static_cast<double>(i + 1), pairs[i].lambda, pairs[i].residual,
                      is_bound_state(pairs[i].lambda, beta, grid) ? 1.0 : 0.0});
  }
  return t;
}

Verdict lambda_bound_verdict(const std::vector<EigenPair>& pairs, double beta, bool constant) {
  std::size_t below = 0;
  for (const auto& p : pairs) {
    if (p.lambda < beta - kSpectralBoundSlack) ++below;
  }
  Verdict v;
  v.name = "lambda_bound";
  v.measure("beta", beta);
  v.measure("lambda1", pairs.front().lambda);
  v.measure("count_below_beta", static_cast<double>(below));
  v.tolerance("slack", kSpectralBoundSlack);
  if (constant) {
    v.status = below == 0 ? Status::expected_negative : Status::fail;
    v.note = below == 0 ? "g == 1: no eigenvalue below beta" : "g == 1 produced a value below beta";
  } else {
    v.status = pairs.front().lambda <= beta + kSpectralBoundSlack ? Status::pass : Status::fail;
  }
  return v;
}

Verdict implication_verdict(const ImplicationReport& rep) {
  Verdict v;
  v.name = "implication";
  v.measure("beta", rep.beta);
  v.measure("lambda1", rep.lambda1);
  v.measure("gamma1", rep.gamma1);
  v.measure("hypothesis_met", rep.hypothesis_met ? 1.0 : 0.0);
  v.measure("conclusion_met", rep.conclusion_met ? 1.0 : 0.0);
  v.tolerance("tol", rep.tol);
  v.note = rep.note;
  if (rep.empty_constraint) {
    v.status = Status::expected_negative;
  } else {
    v.status = rep.holds ? Status::pass : Status::fail;
  }
  return v;
}

Field gaussian_probe(const GridSpec& grid, double width) {
  const Field u = Field::sample(grid, [&](double x, double y) {
    return std::exp(-(x * x + y * y) / (2.0 * width * width));
  });
  return u * (1.0 / l2_norm(u));
}

}  // namespace

Report cmd_solve(const RunConfig& config) {
  Report report = begin("solve", config);
  std::optional<OperatorSpec> op;
  attempt(report, "potential", [&] {
    const GridSpec grid = make_grid(config.grid);
    Potential potential = make_potential(grid, config.op.potential, config.op.tail_tol);
    report.verdicts.push_back(potential_verdict(potential));
    op.emplace(std::move(potential), config.op.beta);
  });
  if (!op) return report;
  attempt(report, "solve", [&] {
    const auto pairs = lowest_eigenpairs(*op, solve_options(config.solve, config.solve.k));
    report.results["essential_cutoff"] = essential_cutoff(op->grid());
    report.results["eigenvalues"] = eigen_table(pairs, op->beta(), op->grid());
    report.curves.push_back(eigen_curve(pairs, op->beta(), op->grid()));
    double worst = 0.0;
    for (const auto& p : pairs) worst = std::max(worst, p.residual);
    Verdict v;
    v.name = "converged";
    v.measure("max_residual", worst);
    v.tolerance("tol", config.solve.tol);
    v.status = worst <= config.solve.tol ? Status::pass : Status::fail;
    report.verdicts.push_back(std::move(v));
  });
  return report;
}

Report cmd_verify(const RunConfig& config) {
  Report report = begin("verify", config);
  const auto& tol = config.verify.tolerances;
  const double solve_tol = config.solve.tol;
  std::optional<OperatorSpec> op;
  attempt(report, "potential", [&] {
    const GridSpec grid = make_grid(config.grid);
    Potential potential = make_potential(grid, config.op.potential, config.op.tail_tol);
    if (wants(config, "potential")) report.verdicts.push_back(potential_verdict(potential));
    op.emplace(std::move(potential), config.op.beta);
  });
  if (!op) return report;
  const bool constant = op->potential().is_constant_one();
  const double beta = op->beta();

  std::vector<EigenPair> pairs;
  attempt(report, "solve", [&] {
    pairs = lowest_eigenpairs(*op, solve_options(config.solve, std::max(config.solve.k, 2)));
    report.results["essential_cutoff"] = essential_cutoff(op->grid());
    report.results["eigenvalues"] = eigen_table(pairs, beta, op->grid());
    report.curves.push_back(eigen_curve(pairs, beta, op->grid()));
  });
  const bool solved = pairs.size() >= 2;
  const bool nodal_case = solved && !constant && pairs[1].lambda < beta;
  const std::string no_nodal = constant ? "g == 1 has no eigenvalue below beta"
                                        : "lambda2 >= beta: no second eigenvalue below beta";

  auto eigen_stage = [&](const std::string& name, const std::function<void()>& body) {
    if (!wants(config, name)) return;
    if (!solved) {
      report.verdicts.push_back(skipped(name, "eigensolve failed"));
      return;
    }
    attempt(report, name, body);
  };

  eigen_stage("lambda_bound", [&] {
    report.verdicts.push_back(lambda_bound_verdict(pairs, beta, constant));
  });
  eigen_stage("positivity", [&] {
    report.verdicts.push_back(positivity_check(pairs[0], solve_tol, tol));
  });
  eigen_stage("simplicity", [&] {
    report.verdicts.push_back(simplicity_check({pairs[0].lambda, pairs[1].lambda}, tol));
  });
  eigen_stage("nodal", [&] {
    if (!nodal_case) {
      report.verdicts.push_back(skipped("nodal", no_nodal));
      return;
    }
    report.verdicts.push_back(nodal_check(pairs[1], solve_tol, tol));
  });
  eigen_stage("orthogonality", [&] {
    report.verdicts.push_back(orthogonality_check(pairs[0], pairs[1], solve_tol, tol));
  });
  eigen_stage("decomposition_identity", [&] {
    if (!nodal_case) {
      report.verdicts.push_back(skipped("decomposition_identity", no_nodal));
      return;
    }
    if (op->grid().size() > config.verify.quadratic_cap) {
      report.verdicts.push_back(
          skipped("decomposition_identity", "grid exceeds the quadratic-cost cap of the kernel sums"));
      return;
    }
    const auto cal = calibrate_kernel_constant(op->grid(), config.verify.quadratic_cap);
    report.results["kernel_calibration"] = {
        {"constant", cal.constant}, {"spread", cal.spread}, {"ratios", cal.ratios}};
    report.verdicts.push_back(decomposition_identity_check(
        *op, pairs[1], cal.constant, solve_tol, config.verify.quadratic_cap, tol));
  });
  eigen_stage("minimax_path", [&] {
    if (!nodal_case) {
      report.verdicts.push_back(skipped("minimax_path", no_nodal));
      return;
    }
    auto path = minimax_path(*op, pairs[1], config.verify.path_samples, solve_tol, tol);
    CurveTable curve{"path", {"t", "phi"}, {}};
    for (const auto& s : path.samples) curve.rows.push_back({s.t, s.phi_value});
    report.curves.push_back(std::move(curve));
    report.verdicts.push_back(std::move(path.verdict));
  });

  if (wants(config, "dilation_limit")) {
    attempt(report, "dilation_limit", [&] {
      const auto& v = config.verify;
      const GridSpec wide(config.grid.dimension, v.dilation_half_length, v.dilation_points,
                          config.grid.order);
      const OperatorSpec wide_op(make_potential(wide, config.op.potential, config.op.tail_tol), beta);
      const Field probe = gaussian_probe(wide, v.probe_width);
      DilationOptions options;
      options.max_wrapped_fraction = v.max_wrapped_fraction;
      const auto ts = v.t_list.empty() ? feasible_dilation_schedule(probe, 0.5, 40, options) : v.t_list;
      auto curve = dilation_limit_check(wide_op, probe, ts, options, tol);
      CurveTable table{"dilation", {"t", "phi", "seminorm", "potential"}, {}};
      for (std::size_t i = 0; i < curve.t.size(); ++i) {
        table.rows.push_back({curve.t[i], curve.phi[i], curve.seminorm[i], curve.potential[i]});
      }
      report.curves.push_back(std::move(table));
      curve.verdict.measure("dilation_half_length", v.dilation_half_length);
      curve.verdict.measure("dilation_points", static_cast<double>(v.dilation_points));
      curve.verdict.measure("probe_width", v.probe_width);
      report.verdicts.push_back(std::move(curve.verdict));
    });
  }

  eigen_stage("pohozaev", [&] {
    const Field& e1 = pairs[0].u;
    const double root = pohozaev_root(e1);
    const double at_root = pohozaev_residual(e1, root);
    const double mu = pairs[0].lambda - beta;
    const double scale = std::max(1.0, multiplier_form(e1));
    Verdict v;
    v.name = "pohozaev";
    v.measure("mu", mu);
    v.measure("residual_at_mu", pohozaev_residual(e1, mu));
    v.measure("root", root);
    v.measure("residual_at_root", at_root);
    v.tolerance("root_residual", kPohozaevRootTol);
    v.status = std::abs(at_root) <= kPohozaevRootTol * scale ? Status::pass : Status::fail;
    v.note = "diagnostic: mu = lambda1 - beta tested against the scaling identity of e1";
    report.verdicts.push_back(std::move(v));
  });

  if (wants(config, "implication")) {
    attempt(report, "implication", [&] {
      const auto rep = implication_check(*op, config.verify.implication_tol,
                                         solve_options(config.solve, 1));
      report.results["implication"] = {{"beta", rep.beta},
                                       {"lambda1", rep.lambda1},
                                       {"gamma1", std::isfinite(rep.gamma1) ? json(rep.gamma1) : json()},
                                       {"hypothesis_met", rep.hypothesis_met},
                                       {"conclusion_met", rep.conclusion_met},
                                       {"holds", rep.holds},
                                       {"note", rep.note}};
      report.verdicts.push_back(implication_verdict(rep));
    });
  }

  eigen_stage("oracle", [&] {
    if (op->grid().size() > config.verify.dense_cap) {
      report.verdicts.push_back(skipped("oracle", "grid exceeds the dense oracle cap"));
      return;
    }
    const auto dense = dense_oracle(*op, config.verify.dense_cap);
    double worst = 0.0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const double ref = dense.values(static_cast<Eigen::Index>(i));
      worst = std::max(worst, std::abs(pairs[i].lambda - ref) / std::max(std::abs(ref), 1e-300));
    }
    Verdict v;
    v.name = "oracle";
    v.measure("max_relative_difference", worst);
    v.measure("asymmetry", dense.asymmetry);
    v.tolerance("relative", kOracleTol);
    v.tolerance("asymmetry", kSymmetryTol);
    v.status = worst <= kOracleTol && dense.asymmetry <= kSymmetryTol ? Status::pass : Status::fail;
    report.verdicts.push_back(std::move(v));
  });
  return report;
}

Report cmd_sweep(const RunConfig& config) {
  if (!config.sweep.present()) throw InvalidArgument("config has no [sweep] section");
  Report report = begin("sweep", config);
  const double tol = config.verify.implication_tol;
  CurveTable table{"sweep",
                   {"value", "beta", "half_length", "points", "order", "lambda1", "lambda2",
                    "gamma1", "lambda1_below_beta", "gamma1_below_beta", "implication_holds"},
                   {}};
  bool bound_ok = true;
  bool implication_ok = true;
  bool constant = false;
  std::size_t hypothesis_points = 0;
  std::vector<std::pair<double, double>> beta_lambda;
  json points = json::array();

  for (double value : config.sweep.values) {
    RunConfig c = config;
    if (config.sweep.parameter == "beta") c.op.beta = value;
    if (config.sweep.parameter == "s") c.grid.order = value;
    if (config.sweep.parameter == "L") {
      // Keep the spacing fixed while the box grows.
      c.grid.points = static_cast<std::size_t>(
          std::round(value * static_cast<double>(config.grid.points) / (2.0 * config.grid.half_length)) * 2.0);
      c.grid.half_length = value;
    }
    attempt(report, "sweep point " + format_double(value), [&] {
      const GridSpec grid = make_grid(c.grid);
      const OperatorSpec op(make_potential(grid, c.op.potential, c.op.tail_tol), c.op.beta);
      constant = op.potential().is_constant_one();
      const auto pairs = lowest_eigenpairs(op, solve_options(c.solve, 2));
      double gamma1 = kNaN;
      try {
        gamma1 = gamma_values(op, solve_options(c.solve, 1)).front().gamma;
      } catch (const EmptyConstraint&) {
      }
      const double beta = c.op.beta;
      const double l1 = pairs[0].lambda;
      const double l2 = is_bound_state(pairs[1].lambda, beta, grid) ? pairs[1].lambda : kNaN;
      const bool l1_below = l1 < beta - tol;
      const bool g1_below = std::isfinite(gamma1) && gamma1 < beta - tol;
      const bool holds = !g1_below || l1_below;
      bound_ok = bound_ok && l1 <= beta + kSpectralBoundSlack;
      implication_ok = implication_ok && holds;
      if (g1_below) ++hypothesis_points;
      beta_lambda.emplace_back(beta, l1);
      table.rows.push_back({value, beta, c.grid.half_length, static_cast<double>(c.grid.points),
                            c.grid.order, l1, l2, gamma1, l1_below ? 1.0 : 0.0, g1_below ? 1.0 : 0.0,
                            holds ? 1.0 : 0.0});
      points.push_back({{"value", value},
                        {"lambda1", l1},
                        {"lambda2", std::isfinite(l2) ? json(l2) : json()},
                        {"gamma1", std::isfinite(gamma1) ? json(gamma1) : json()},
                        {"residual1", pairs[0].residual}});
    });
  }
  report.results["points"] = std::move(points);
  const auto rows = static_cast<double>(table.rows.size());
  report.curves.push_back(std::move(table));

  Verdict bound;
  bound.name = "lambda_bound";
  bound.measure("points", rows);
  bound.tolerance("slack", kSpectralBoundSlack);
  bound.status = bound_ok ? Status::pass : Status::fail;
  report.verdicts.push_back(std::move(bound));

  Verdict impl;
  impl.name = "implication";
  impl.measure("points", rows);
  impl.measure("hypothesis_points", static_cast<double>(hypothesis_points));
  impl.tolerance("tol", tol);
  if (constant) {
    impl.status = Status::expected_negative;
    impl.note = "g == 1: the weight vanishes, Gamma is undefined";
  } else {
    impl.status = implication_ok ? Status::pass : Status::fail;
  }
  report.verdicts.push_back(std::move(impl));

  if (config.sweep.parameter == "beta") {
    std::sort(beta_lambda.begin(), beta_lambda.end());
    bool monotone = true;
    for (std::size_t i = 1; i < beta_lambda.size(); ++i) {
      if (beta_lambda[i].second < beta_lambda[i - 1].second) monotone = false;
    }
    Verdict mono;
    mono.name = "monotone_in_beta";
    mono.measure("points", static_cast<double>(beta_lambda.size()));
    mono.status = monotone ? Status::pass : Status::fail;
    report.verdicts.push_back(std::move(mono));
  }
  return report;
}

Report cmd_oracle(const RunConfig& config) {
  Report report = begin("oracle", config);
  std::optional<OperatorSpec> op;
  attempt(report, "potential", [&] {
    const GridSpec grid = make_grid(config.grid);
    op.emplace(make_potential(grid, config.op.potential, config.op.tail_tol), config.op.beta);
  });
  if (!op) return report;
  const int k = config.solve.k;

  attempt(report, "eigenvalues", [&] {
    const auto pairs = lowest_eigenpairs(*op, solve_options(config.solve, k));
    const auto dense = dense_oracle(*op, config.verify.dense_cap);
    CurveTable table{"oracle", {"index", "lobpcg", "dense", "relative_difference"}, {}};
    double worst = 0.0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const double ref = dense.values(static_cast<Eigen::Index>(i));
      const double rel = std::abs(pairs[i].lambda - ref) / std::max(std::abs(ref), 1e-300);
      worst = std::max(worst, rel);
      table.rows.push_back({static_cast<double>(i + 1), pairs[i].lambda, ref, rel});
    }
    report.curves.push_back(std::move(table));
    Verdict v;
    v.name = "eigenvalues";
    v.measure("max_relative_difference", worst);
    v.measure("asymmetry", dense.asymmetry);
    v.tolerance("relative", kOracleTol);
    v.tolerance("asymmetry", kSymmetryTol);
    v.status = worst <= kOracleTol && dense.asymmetry <= kSymmetryTol ? Status::pass : Status::fail;
    report.verdicts.push_back(std::move(v));
  });

  if (op->potential().is_constant_one()) {
    Verdict v;
    v.name = "gamma";
    v.status = Status::expected_negative;
    v.note = "g == 1: the weight vanishes, Gamma is undefined";
    report.verdicts.push_back(std::move(v));
    return report;
  }
  attempt(report, "gamma", [&] {
    const int kg = std::min(k, 3);
    const auto gammas = gamma_values(*op, solve_options(config.solve, kg));
    const auto dense = dense_gamma_oracle(*op, config.verify.dense_cap);
    CurveTable table{"gamma", {"index", "lobpcg", "dense", "relative_difference"}, {}};
    double worst = 0.0;
    for (std::size_t i = 0; i < gammas.size(); ++i) {
      const double ref = dense(static_cast<Eigen::Index>(i));
      const double rel = std::abs(gammas[i].gamma - ref) / std::abs(ref);
      worst = std::max(worst, rel);
      table.rows.push_back({static_cast<double>(i + 1), gammas[i].gamma, ref, rel});
    }
    report.curves.push_back(std::move(table));
    Verdict v;
    v.name = "gamma";
    v.measure("max_relative_difference", worst);
    v.tolerance("relative", kGammaOracleTol);
    v.status = worst <= kGammaOracleTol ? Status::pass : Status::fail;
    report.verdicts.push_back(std::move(v));
  });
  return report;
}

}  // namespace fracspec
