#pragma once

#include <span>
#include <vector>

#include "fracspec/grid.hpp"

namespace fracspec {

SpectrumArray forward_transform(const Field& u);
/// Inverse of forward_transform; the imaginary residue is discarded.
Field inverse_transform(const SpectrumArray& spectrum);

/// The fractional Laplacian (-Delta)^s as the Fourier multiplier |xi|^{2s} on a
/// periodic grid. The xi = 0 multiplier is exactly zero; the Nyquist mode uses
/// |xi_{-n/2}|^{2s}.
class FractionalLaplacian {
 public:
  explicit FractionalLaplacian(const GridSpec& grid);

  const GridSpec& grid() const { return grid_; }
  /// |xi|^{2s} per flat FFT index.
  std::span<const double> symbol() const { return symbol_; }

  void apply(std::span<const double> in, std::span<double> out) const;
  /// out = F^{-1}[ multiplier * F[in] ] for an arbitrary real, even multiplier.
  void apply_multiplier(std::span<const double> multiplier, std::span<const double> in,
                        std::span<double> out) const;
  /// sum over modes of |xi|^{2s} |hat u|^2 dxi^N.
  double quadratic_form(std::span<const double> values) const;
  /// The same bilinear form evaluated on two fields.
  double bilinear_form(std::span<const double> a, std::span<const double> b) const;

 private:
  GridSpec grid_;
  std::vector<double> symbol_;
};

Field apply_fractional_laplacian(const Field& u);

/// Discrete quadrature of int |xi|^{2s} |hat u(xi)|^2 dxi; the H^s seminorm in
/// the normalization where the multiplier and kernel forms coincide.
double multiplier_form(const Field& u);
/// Polarized multiplier form: int |xi|^{2s} hat u conj(hat v) dxi.
double multiplier_bilinear(const Field& u, const Field& v);

}  // namespace fracspec
