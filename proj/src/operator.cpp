#include "fracspec/operator.hpp"

#include <cmath>

namespace fracspec {

OperatorSpec::OperatorSpec(Potential potential, double beta)
    : potential_(std::move(potential)),
      beta_(beta),
      laplacian_(std::make_shared<const FractionalLaplacian>(potential_.grid())) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidArgument("beta must be positive");
}

void OperatorSpec::apply(std::span<const double> in, std::span<double> out) const {
  laplacian_->apply(in, out);
  const auto g = potential_.values();
  for (std::size_t k = 0; k < out.size(); ++k) out[k] += beta_ * g[k] * in[k];
}

namespace {
void require_operator_grid(const OperatorSpec& op, const Field& u) {
  if (!(op.grid() == u.grid())) throw GridMismatch();
}
}  // namespace

Field apply_l_beta(const OperatorSpec& op, const Field& u) {
  require_operator_grid(op, u);
  std::vector<double> out(u.size());
  op.apply(u.values(), out);
  return Field(u.grid(), std::move(out));
}

double potential_energy(const OperatorSpec& op, const Field& u) {
  require_operator_grid(op, u);
  const auto g = op.potential().values();
  const auto v = u.values();
  double sum = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) sum += g[k] * v[k] * v[k];
  return op.beta() * sum * u.grid().cell_volume();
}

double phi(const OperatorSpec& op, const Field& u) {
  require_operator_grid(op, u);
  return op.laplacian().quadratic_form(u.values()) + potential_energy(op, u);
}

double rayleigh(const OperatorSpec& op, const Field& u) {
  const double norm2 = l2_inner(u, u);
  if (norm2 == 0.0) throw ZeroField();
  return phi(op, u) / norm2;
}

double weighted_mass(const OperatorSpec& op, const Field& u) {
  require_operator_grid(op, u);
  const auto g = op.potential().values();
  const auto v = u.values();
  double sum = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) sum += (1.0 - g[k]) * v[k] * v[k];
  return sum * u.grid().cell_volume();
}

}  // namespace fracspec
