#include "fracspec/lobpcg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "fracspec/errors.hpp"

namespace fracspec::lobpcg {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// Relative cutoff on the Gram spectrum below which a direction counts as
// linearly dependent.
constexpr double kDropTolerance = 1e-13;

void apply_mass(const Problem& problem, const MatrixXd& in, MatrixXd& out) {
  if (problem.mass) {
    problem.mass(in, out);
  } else {
    out = in;
  }
}

void project(const Problem& problem, MatrixXd& x) {
  if (problem.constraints.cols() > 0) {
    x -= problem.constraints * (problem.constraints.transpose() * x);
  }
}

MatrixXd symmetrized(const MatrixXd& a) { return 0.5 * (a + a.transpose()); }

MatrixXd select_columns(const MatrixXd& m, const std::vector<Index>& idx) {
  MatrixXd out(m.rows(), static_cast<Index>(idx.size()));
  for (std::size_t c = 0; c < idx.size(); ++c) out.col(static_cast<Index>(c)) = m.col(idx[c]);
  return out;
}

MatrixXd hstack(std::initializer_list<const MatrixXd*> blocks) {
  Index rows = 0;
  Index cols = 0;
  for (const auto* b : blocks) {
    if (b->cols() == 0) continue;
    rows = b->rows();
    cols += b->cols();
  }
  MatrixXd out(rows, cols);
  Index at = 0;
  for (const auto* b : blocks) {
    if (b->cols() == 0) continue;
    out.middleCols(at, b->cols()) = *b;
    at += b->cols();
  }
  return out;
}

struct Ritz {
  bool ok = false;
  MatrixXd coef;
  VectorXd theta;
};

// Rayleigh-Ritz on span(S): orthonormalize in the K + M inner product (SVQB,
// dropping dependent directions), then diagonalize the projected K. A Ritz
// value theta of K relative to K + M maps to nu = theta / (1 - theta).
Ritz rayleigh_ritz(const MatrixXd& s, const MatrixXd& ks, const MatrixXd& ms, Index want) {
  const MatrixXd gk = symmetrized(s.transpose() * ks);
  const MatrixXd gg = gk + symmetrized(s.transpose() * ms);
  VectorXd scale(gg.rows());
  for (Index i = 0; i < gg.rows(); ++i) {
    const double d = gg(i, i);
    scale(i) = d > 0.0 ? 1.0 / std::sqrt(d) : 0.0;
  }
  const MatrixXd gn = scale.asDiagonal() * gg * scale.asDiagonal();
  Eigen::SelfAdjointEigenSolver<MatrixXd> gram(gn);
  const VectorXd& ev = gram.eigenvalues();
  const double top = ev(ev.size() - 1);
  std::vector<Index> keep;
  for (Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > kDropTolerance * top) keep.push_back(i);
  }
  Ritz out;
  if (static_cast<Index>(keep.size()) < want) return out;
  MatrixXd basis(gg.rows(), static_cast<Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    basis.col(static_cast<Index>(c)) = gram.eigenvectors().col(keep[c]) / std::sqrt(ev(keep[c]));
  }
  basis = scale.asDiagonal() * basis;
  const MatrixXd kr = symmetrized(basis.transpose() * gk * basis);
  Eigen::SelfAdjointEigenSolver<MatrixXd> ritz(kr);
  out.ok = true;
  out.coef = basis * ritz.eigenvectors().leftCols(want);
  out.theta = ritz.eigenvalues().head(want);
  return out;
}

// Full-space solve used when the search space is too small for a block
// iteration. Works on the constraint complement with the pencil
// (M, K + M), whose largest values theta map to nu = 1 / theta - 1.
Result dense_solve(const Problem& problem, Index count) {
  const Index n = problem.dimension;
  const Index c = problem.constraints.cols();
  MatrixXd q = MatrixXd::Identity(n, n);
  if (c > 0) {
    Eigen::HouseholderQR<MatrixXd> qr(problem.constraints);
    q = (qr.householderQ() * MatrixXd::Identity(n, n)).rightCols(n - c);
  }
  MatrixXd kq(n, q.cols());
  MatrixXd mq(n, q.cols());
  problem.stiffness(q, kq);
  apply_mass(problem, q, mq);
  const MatrixXd gk = symmetrized(q.transpose() * kq);
  const MatrixXd gm = symmetrized(q.transpose() * mq);
  Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> pencil(gm, gk + gm);
  if (pencil.info() != Eigen::Success) throw NoConvergence(0, std::numeric_limits<double>::infinity());
  Result result;
  result.values.resize(count);
  result.vectors.resize(n, count);
  result.residuals.resize(count);
  const Index top = q.cols() - 1;
  for (Index j = 0; j < count; ++j) {
    const VectorXd y = pencil.eigenvectors().col(top - j);
    VectorXd x = q * y;
    const VectorXd kx = kq * y;
    const VectorXd mx = mq * y;
    const double m = x.dot(mx);
    const double val = x.dot(kx) / m;
    x /= std::sqrt(m);
    VectorXd rj = (kx - val * mx) / std::sqrt(m);
    if (c > 0) rj -= problem.constraints * (problem.constraints.transpose() * rj);
    result.values(j) = val;
    result.vectors.col(j) = x;
    result.residuals(j) = rj.norm();
  }
  return result;
}

}  // namespace

Result solve(const Problem& problem, const Options& options) {
  const Index n = problem.dimension;
  if (!problem.stiffness) throw InvalidArgument("LOBPCG needs a stiffness operator");
  if (options.count < 1) throw InvalidArgument("at least one eigenpair must be requested");
  if (!(options.tol > 0.0)) throw InvalidArgument("tolerance must be positive");
  const Index count = options.count;
  Index block = options.block_size > 0 ? options.block_size : count + 2;
  if (block < count) throw InvalidArgument("block size smaller than the number of pairs");
  const Index available = n - problem.constraints.cols();
  if (3 * count > available) {
    throw KTooLarge("requested " + std::to_string(count) + " pairs from a space of dimension " +
                    std::to_string(available));
  }
  if (available < 5 * block) return dense_solve(problem, count);

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  MatrixXd x(n, block);
  for (Index j = 0; j < block; ++j) {
    for (Index i = 0; i < n; ++i) x(i, j) = normal(rng);
  }
  project(problem, x);

  MatrixXd kx(n, block);
  MatrixXd mx(n, block);
  problem.stiffness(x, kx);
  apply_mass(problem, x, mx);
  {
    const Ritz init = rayleigh_ritz(x, kx, mx, block);
    if (!init.ok) throw KTooLarge("initial block is rank deficient");
    x = x * init.coef;
    problem.stiffness(x, kx);
    apply_mass(problem, x, mx);
  }

  MatrixXd p(n, 0);
  MatrixXd kp(n, 0);
  MatrixXd mp(n, 0);
  VectorXd nu(block);
  VectorXd res(block);
  double best = std::numeric_limits<double>::infinity();

  for (int iter = 1; iter <= options.max_iter; ++iter) {
    for (Index j = 0; j < block; ++j) {
      const double m = x.col(j).dot(mx.col(j));
      const double f = 1.0 / std::sqrt(m);
      x.col(j) *= f;
      kx.col(j) *= f;
      mx.col(j) *= f;
      nu(j) = x.col(j).dot(kx.col(j));
    }
    MatrixXd r = kx - mx * nu.asDiagonal();
    project(problem, r);
    for (Index j = 0; j < block; ++j) res(j) = r.col(j).norm();
    const double worst = res.head(count).maxCoeff();
    best = std::min(best, worst);

    if (worst <= options.tol) {
      // Final Rayleigh-Ritz inside span(X) with exact M-orthonormalization.
      const MatrixXd gk = symmetrized(x.transpose() * kx);
      const MatrixXd gm = symmetrized(x.transpose() * mx);
      Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> final_rr(gk, gm);
      const MatrixXd y = final_rr.eigenvectors();
      const MatrixXd xf = x * y;
      const MatrixXd kf = kx * y;
      const MatrixXd mf = mx * y;
      Result result;
      result.iterations = iter;
      result.values.resize(count);
      result.vectors = xf.leftCols(count);
      result.residuals.resize(count);
      for (Index j = 0; j < count; ++j) {
        const double val = xf.col(j).dot(kf.col(j)) / xf.col(j).dot(mf.col(j));
        result.values(j) = val;
        VectorXd rj = kf.col(j) - val * mf.col(j);
        if (problem.constraints.cols() > 0) {
          rj -= problem.constraints * (problem.constraints.transpose() * rj);
        }
        result.residuals(j) = rj.norm();
      }
      return result;
    }

    std::vector<Index> active;
    for (Index j = 0; j < block; ++j) {
      if (res(j) > options.tol) active.push_back(j);
    }
    MatrixXd w = select_columns(r, active);
    if (problem.preconditioner) {
      MatrixXd tw(w.rows(), w.cols());
      problem.preconditioner(w, tw);
      w = std::move(tw);
    }
    project(problem, w);
    for (Index j = 0; j < w.cols(); ++j) {
      const double nrm = w.col(j).norm();
      if (nrm > 0.0) w.col(j) /= nrm;
    }
    MatrixXd kw(n, w.cols());
    MatrixXd mw(n, w.cols());
    problem.stiffness(w, kw);
    apply_mass(problem, w, mw);

    MatrixXd s = hstack({&x, &w, &p});
    MatrixXd ks = hstack({&kx, &kw, &kp});
    MatrixXd ms = hstack({&mx, &mw, &mp});
    Ritz rr = rayleigh_ritz(s, ks, ms, block);
    if (!rr.ok && p.cols() > 0) {
      // Restart the conjugate directions.
      s = hstack({&x, &w});
      ks = hstack({&kx, &kw});
      ms = hstack({&mx, &mw});
      rr = rayleigh_ritz(s, ks, ms, block);
    }
    if (!rr.ok) throw NoConvergence(iter, best);

    const Index rest = s.cols() - block;
    const MatrixXd tail = select_columns(rr.coef.bottomRows(rest), active);
    p = s.rightCols(rest) * tail;
    kp = ks.rightCols(rest) * tail;
    mp = ms.rightCols(rest) * tail;

    x = s * rr.coef;
    project(problem, x);
    problem.stiffness(x, kx);
    apply_mass(problem, x, mx);
  }
  throw NoConvergence(options.max_iter, best);
}

}  // namespace fracspec::lobpcg
