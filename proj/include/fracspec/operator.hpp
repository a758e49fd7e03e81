#pragma once

#include <memory>
#include <span>

#include "fracspec/fourier.hpp"
#include "fracspec/potentials.hpp"

namespace fracspec {

/// L_beta u = (-Delta)^s u + beta g u on the grid of its potential.
class OperatorSpec {
 public:
  OperatorSpec(Potential potential, double beta);

  const GridSpec& grid() const { return potential_.grid(); }
  double order() const { return grid().order(); }
  double beta() const { return beta_; }
  const Potential& potential() const { return potential_; }
  const FractionalLaplacian& laplacian() const { return *laplacian_; }

  /// Matrix-free application on raw samples.
  void apply(std::span<const double> in, std::span<double> out) const;

 private:
  Potential potential_;
  double beta_;
  std::shared_ptr<const FractionalLaplacian> laplacian_;
};

Field apply_l_beta(const OperatorSpec& op, const Field& u);

/// multiplier_form(u) + beta int g u^2.
double phi(const OperatorSpec& op, const Field& u);
/// beta int g u^2 alone.
double potential_energy(const OperatorSpec& op, const Field& u);
/// phi(u) / ||u||^2; throws ZeroField for u == 0.
double rayleigh(const OperatorSpec& op, const Field& u);
/// int (1 - g) u^2.
double weighted_mass(const OperatorSpec& op, const Field& u);

}  // namespace fracspec
