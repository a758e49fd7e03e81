#include "fracspec/fourier.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "fft.hpp"

namespace fracspec {

namespace {

// Per-mode phase exp(-i xi_m x_0) with x_0 = -L on every axis, i.e. (-1)^m.
double corner_phase(const GridSpec& grid, std::size_t flat) {
  const auto idx = grid.unravel(flat);
  int m = grid.mode(idx[0]);
  if (grid.dimension() == 2) m += grid.mode(idx[1]);
  return (m % 2 == 0) ? 1.0 : -1.0;
}

double spectrum_scale(const GridSpec& grid) {
  return std::pow(grid.spacing() / std::sqrt(2.0 * std::numbers::pi), grid.dimension());
}

}  // namespace

SpectrumArray forward_transform(const Field& u) {
  const auto& grid = u.grid();
  auto& fft = detail::FftEngine::for_grid(grid);
  std::vector<std::complex<double>> coeffs(grid.size());
  fft.forward(u.values(), coeffs);
  const double scale = spectrum_scale(grid);
  for (std::size_t k = 0; k < coeffs.size(); ++k) coeffs[k] *= scale * corner_phase(grid, k);
  return SpectrumArray(grid, std::move(coeffs));
}

Field inverse_transform(const SpectrumArray& spectrum) {
  const auto& grid = spectrum.grid();
  auto& fft = detail::FftEngine::for_grid(grid);
  const auto src = spectrum.coefficients();
  std::vector<std::complex<double>> work(src.begin(), src.end());
  const double scale = 1.0 / (spectrum_scale(grid) * static_cast<double>(grid.size()));
  for (std::size_t k = 0; k < work.size(); ++k) work[k] *= scale * corner_phase(grid, k);
  std::vector<std::complex<double>> out(grid.size());
  fft.backward(work, out);
  std::vector<double> values(out.size());
  for (std::size_t k = 0; k < values.size(); ++k) values[k] = out[k].real();
  return Field(grid, std::move(values));
}

FractionalLaplacian::FractionalLaplacian(const GridSpec& grid) : grid_(grid), symbol_(grid.size()) {
  const double two_s = 2.0 * grid.order();
  for (std::size_t k = 0; k < symbol_.size(); ++k) {
    const double xi = grid.frequency_norm(k);
    symbol_[k] = xi == 0.0 ? 0.0 : std::pow(xi, two_s);
  }
}

void FractionalLaplacian::apply_multiplier(std::span<const double> multiplier,
                                           std::span<const double> in,
                                           std::span<double> out) const {
  auto& fft = detail::FftEngine::for_grid(grid_);
  const std::size_t size = grid_.size();
  std::vector<std::complex<double>> coeffs(size);
  fft.forward(in, coeffs);
  const double inv = 1.0 / static_cast<double>(size);
  for (std::size_t k = 0; k < size; ++k) coeffs[k] *= multiplier[k] * inv;
  std::vector<std::complex<double>> back(size);
  fft.backward(coeffs, back);
  for (std::size_t k = 0; k < size; ++k) out[k] = back[k].real();
}

void FractionalLaplacian::apply(std::span<const double> in, std::span<double> out) const {
  apply_multiplier(symbol_, in, out);
}

double FractionalLaplacian::quadratic_form(std::span<const double> values) const {
  auto& fft = detail::FftEngine::for_grid(grid_);
  std::vector<std::complex<double>> coeffs(grid_.size());
  fft.forward(values, coeffs);
  double sum = 0.0;
  for (std::size_t k = 0; k < coeffs.size(); ++k) sum += symbol_[k] * std::norm(coeffs[k]);
  // dxi^N (dx^2 / 2pi)^N = (dx / n)^N
  return sum * std::pow(grid_.spacing() / static_cast<double>(grid_.points_per_axis()),
                        grid_.dimension());
}

double FractionalLaplacian::bilinear_form(std::span<const double> a,
                                          std::span<const double> b) const {
  auto& fft = detail::FftEngine::for_grid(grid_);
  std::vector<std::complex<double>> fa(grid_.size());
  std::vector<std::complex<double>> fb(grid_.size());
  fft.forward(a, fa);
  fft.forward(b, fb);
  double sum = 0.0;
  for (std::size_t k = 0; k < fa.size(); ++k) sum += symbol_[k] * (fa[k] * std::conj(fb[k])).real();
  return sum * std::pow(grid_.spacing() / static_cast<double>(grid_.points_per_axis()),
                        grid_.dimension());
}

Field apply_fractional_laplacian(const Field& u) {
  FractionalLaplacian lap(u.grid());
  std::vector<double> out(u.size());
  lap.apply(u.values(), out);
  return Field(u.grid(), std::move(out));
}

double multiplier_form(const Field& u) { return FractionalLaplacian(u.grid()).quadratic_form(u.values()); }

double multiplier_bilinear(const Field& u, const Field& v) {
  require_same_grid(u, v);
  return FractionalLaplacian(u.grid()).bilinear_form(u.values(), v.values());
}

}  // namespace fracspec
