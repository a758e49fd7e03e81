#pragma once

#include <complex>
#include <span>

#include "fracspec/grid.hpp"

namespace fracspec::detail {

/// Unnormalized complex FFT over an n^N grid, backed by FFTW.
///
/// Instances are per thread (see for_grid); plans are created with
/// FFTW_ESTIMATE so the same transform algorithm runs on every call.
class FftEngine {
 public:
  FftEngine(int dimension, std::size_t points);
  ~FftEngine();
  FftEngine(const FftEngine&) = delete;
  FftEngine& operator=(const FftEngine&) = delete;

  static FftEngine& for_grid(const GridSpec& grid);

  std::size_t size() const { return size_; }
  /// out_m = sum_j in_j exp(-2 pi i j m / n)
  void forward(std::span<const double> in, std::span<std::complex<double>> out);
  void forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out);
  /// out_j = sum_m in_m exp(+2 pi i j m / n), no 1/n factor.
  void backward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out);

 private:
  struct Impl;
  Impl* impl_;
  std::size_t size_;
};

}  // namespace fracspec::detail
