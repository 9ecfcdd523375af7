#include "torusmix/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace torusmix::fft {

namespace {

// FFTW_ESTIMATE keeps plan selection deterministic and planning cheap; the
// grids here are small powers of two where ESTIMATE plans are near optimal.
class PlanCache {
 public:
  fftw_plan get(int dimension, int resolution, int sign) {
    std::scoped_lock lock(mutex_);
    auto key = std::make_tuple(dimension, resolution, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    int n[3] = {resolution, resolution, resolution};
    fftw_plan p = fftw_plan_many_dft(dimension, n, 1, nullptr, nullptr, 1, 0,
                                     nullptr, nullptr, 1, 0, sign,
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, p);
    return p;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

std::size_t pow_dim(int resolution, int dimension) {
  std::size_t n = 1;
  for (int i = 0; i < dimension; ++i) n *= static_cast<std::size_t>(resolution);
  return n;
}

}  // namespace

void forward(int dimension, int resolution, std::complex<double>* data) {
  fftw_plan p = cache().get(dimension, resolution, FFTW_FORWARD);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(data),
                   reinterpret_cast<fftw_complex*>(data));
  const double scale = 1.0 / static_cast<double>(pow_dim(resolution, dimension));
  const std::size_t n = pow_dim(resolution, dimension);
  for (std::size_t i = 0; i < n; ++i) data[i] *= scale;
}

void backward(int dimension, int resolution, std::complex<double>* data) {
  fftw_plan p = cache().get(dimension, resolution, FFTW_BACKWARD);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(data),
                   reinterpret_cast<fftw_complex*>(data));
}

void backward_2d(int resolution, std::complex<double>* data) {
  backward(2, resolution, data);
}

void backward_1d(int resolution, std::complex<double>* data) {
  backward(1, resolution, data);
}

}  // namespace torusmix::fft
