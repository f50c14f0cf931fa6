#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace frf::detail {
namespace {

// FFTW planning is not thread-safe; execution with new arrays is. Plans are
// created once per shape under a lock and reused with fftw_execute_dft_*.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [shape, plans] : plans_) {
      fftw_destroy_plan(plans.first);
      fftw_destroy_plan(plans.second);
    }
  }

  std::pair<fftw_plan, fftw_plan> get(std::span<const std::size_t> shape) {
    std::vector<int> dims(shape.begin(), shape.end());
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = plans_.find(dims);
    if (it != plans_.end()) return it->second;

    std::size_t real_size = 1;
    for (int d : dims) real_size *= static_cast<std::size_t>(d);
    const std::size_t complex_size =
        real_size / static_cast<std::size_t>(dims.back()) *
        (static_cast<std::size_t>(dims.back()) / 2 + 1);
    double* r = fftw_alloc_real(real_size);
    fftw_complex* c = fftw_alloc_complex(complex_size);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    const int rank = static_cast<int>(dims.size());
    fftw_plan fwd = fftw_plan_dft_r2c(rank, dims.data(), r, c, flags);
    fftw_plan bwd = fftw_plan_dft_c2r(rank, dims.data(), c, r, flags);
    fftw_free(r);
    fftw_free(c);
    if (fwd == nullptr || bwd == nullptr) {
      throw std::runtime_error("fftw: plan creation failed");
    }
    return plans_.emplace(std::move(dims), std::make_pair(fwd, bwd))
        .first->second;
  }

 private:
  std::mutex mutex_;
  std::map<std::vector<int>, std::pair<fftw_plan, fftw_plan>> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

std::size_t product(std::span<const std::size_t> shape) {
  std::size_t p = 1;
  for (auto s : shape) p *= s;
  return p;
}

}  // namespace

std::vector<Complex> rfft(std::span<const double> samples,
                          std::span<const std::size_t> shape) {
  const std::size_t n = product(shape);
  if (samples.size() != n) throw std::invalid_argument("rfft: size mismatch");
  std::vector<double> in(samples.begin(), samples.end());
  std::vector<Complex> out(n / shape.back() * (shape.back() / 2 + 1));
  auto plans = cache().get(shape);
  fftw_execute_dft_r2c(plans.first, in.data(),
                       reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

std::vector<double> irfft(std::vector<Complex> spectrum,
                          std::span<const std::size_t> shape) {
  const std::size_t n = product(shape);
  if (spectrum.size() != n / shape.back() * (shape.back() / 2 + 1)) {
    throw std::invalid_argument("irfft: size mismatch");
  }
  std::vector<double> out(n);
  auto plans = cache().get(shape);
  // c2r overwrites its input; `spectrum` is our own copy.
  fftw_execute_dft_c2r(plans.second,
                       reinterpret_cast<fftw_complex*>(spectrum.data()),
                       out.data());
  const double scale = 1.0 / static_cast<double>(n);
  for (double& v : out) v *= scale;
  return out;
}

}  // namespace frf::detail
