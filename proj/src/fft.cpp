#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

namespace fracspec::detail {

namespace {
// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct FftEngine::Impl {
  fftw_complex* in = nullptr;
  fftw_complex* out = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

FftEngine::FftEngine(int dimension, std::size_t points) : impl_(new Impl), size_(0) {
  size_ = dimension == 1 ? points : points * points;
  std::lock_guard lock(planner_mutex());
  impl_->in = fftw_alloc_complex(size_);
  impl_->out = fftw_alloc_complex(size_);
  const int n = static_cast<int>(points);
  int dims[2] = {n, n};
  impl_->forward =
      fftw_plan_dft(dimension, dims, impl_->in, impl_->out, FFTW_FORWARD, FFTW_ESTIMATE);
  impl_->backward =
      fftw_plan_dft(dimension, dims, impl_->in, impl_->out, FFTW_BACKWARD, FFTW_ESTIMATE);
}

FftEngine::~FftEngine() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(impl_->forward);
  fftw_destroy_plan(impl_->backward);
  fftw_free(impl_->in);
  fftw_free(impl_->out);
  delete impl_;
}

FftEngine& FftEngine::for_grid(const GridSpec& grid) {
  thread_local std::map<std::pair<int, std::size_t>, std::unique_ptr<FftEngine>> cache;
  const auto key = std::make_pair(grid.dimension(), grid.points_per_axis());
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, std::make_unique<FftEngine>(key.first, key.second)).first;
  }
  return *it->second;
}

void FftEngine::forward(std::span<const double> in, std::span<std::complex<double>> out) {
  for (std::size_t k = 0; k < size_; ++k) {
    impl_->in[k][0] = in[k];
    impl_->in[k][1] = 0.0;
  }
  fftw_execute(impl_->forward);
  auto* res = reinterpret_cast<const std::complex<double>*>(impl_->out);
  std::copy(res, res + size_, out.begin());
}

void FftEngine::forward(std::span<const std::complex<double>> in,
                        std::span<std::complex<double>> out) {
  std::copy(in.begin(), in.end(), reinterpret_cast<std::complex<double>*>(impl_->in));
  fftw_execute(impl_->forward);
  auto* res = reinterpret_cast<const std::complex<double>*>(impl_->out);
  std::copy(res, res + size_, out.begin());
}

void FftEngine::backward(std::span<const std::complex<double>> in,
                         std::span<std::complex<double>> out) {
  std::copy(in.begin(), in.end(), reinterpret_cast<std::complex<double>*>(impl_->in));
  fftw_execute(impl_->backward);
  auto* res = reinterpret_cast<const std::complex<double>*>(impl_->out);
  std::copy(res, res + size_, out.begin());
}

}  // namespace fracspec::detail
