#include "torusmix/grid_field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "torusmix/errors.hpp"
#include "torusmix/fft.hpp"

namespace torusmix {

namespace {
std::size_t pow_dim(int resolution, int dimension) {
  std::size_t n = 1;
  for (int i = 0; i < dimension; ++i) n *= static_cast<std::size_t>(resolution);
  return n;
}
}  // namespace

void check_resolution(int resolution) {
  if (resolution < 4 || (resolution & (resolution - 1)) != 0) {
    throw ConfigError("resolution must be a power of two >= 4, got " +
                      std::to_string(resolution));
  }
}

GridField::GridField(int dimension, int components, int resolution)
    : dimension_(dimension),
      components_(components),
      resolution_(resolution),
      points_(pow_dim(resolution, dimension)),
      real_(static_cast<std::size_t>(components) * points_, 0.0),
      spec_(static_cast<std::size_t>(components) * points_, complexd(0.0)) {
  if (dimension != 2 && dimension != 3)
    throw ShapeError("dimension must be 2 or 3");
  check_resolution(resolution);
}

GridField GridField::from_real(int dimension, int components, int resolution,
                               std::vector<double> real_values) {
  GridField f(dimension, components, resolution);
  if (real_values.size() != f.real_.size())
    throw ShapeError("real value array has wrong size");
  f.real_ = std::move(real_values);
  f.sync_spectral_from_real();
  return f;
}

GridField GridField::from_spectral(int dimension, int components,
                                   int resolution,
                                   std::vector<complexd> spectral_values) {
  GridField f(dimension, components, resolution);
  if (spectral_values.size() != f.spec_.size())
    throw ShapeError("spectral value array has wrong size");
  f.spec_ = std::move(spectral_values);
  f.sync_real_from_spectral();
  return f;
}

void GridField::sync_spectral_from_real() {
  std::vector<complexd> buf(points_);
  for (int c = 0; c < components_; ++c) {
    const double* src = real_.data() + static_cast<std::size_t>(c) * points_;
    for (std::size_t p = 0; p < points_; ++p) buf[p] = src[p];
    fft::forward(dimension_, resolution_, buf.data());
    std::copy(buf.begin(), buf.end(),
              spec_.begin() + static_cast<std::size_t>(c) * points_);
  }
}

void GridField::sync_real_from_spectral() {
  std::vector<complexd> buf(points_);
  for (int c = 0; c < components_; ++c) {
    std::copy(spec_.begin() + static_cast<std::size_t>(c) * points_,
              spec_.begin() + static_cast<std::size_t>(c + 1) * points_,
              buf.begin());
    fft::backward(dimension_, resolution_, buf.data());
    double* dst = real_.data() + static_cast<std::size_t>(c) * points_;
    for (std::size_t p = 0; p < points_; ++p) dst[p] = buf[p].real();
  }
}

double GridField::max_abs() const {
  double m = 0.0;
  for (double v : real_) m = std::max(m, std::abs(v));
  return m;
}

double GridField::imag_residual() const {
  std::vector<complexd> buf(points_);
  double worst = 0.0;
  for (int c = 0; c < components_; ++c) {
    std::copy(spec_.begin() + static_cast<std::size_t>(c) * points_,
              spec_.begin() + static_cast<std::size_t>(c + 1) * points_,
              buf.begin());
    fft::backward(dimension_, resolution_, buf.data());
    for (const auto& z : buf) worst = std::max(worst, std::abs(z.imag()));
  }
  const double scale = std::max(max_abs(), 1e-300);
  return worst / scale;
}

double GridField::l2_norm_squared(int component) const {
  double s = 0.0;
  const complexd* src =
      spec_.data() + static_cast<std::size_t>(component) * points_;
  for (std::size_t p = 0; p < points_; ++p) s += std::norm(src[p]);
  return s;
}

complexd GridField::mean_mode(int component) const {
  return spec_[static_cast<std::size_t>(component) * points_];
}

std::array<int, 3> GridField::unflatten(std::size_t point) const {
  std::array<int, 3> idx{0, 0, 0};
  const int N = resolution_;
  if (dimension_ == 2) {
    idx[0] = static_cast<int>(point / N);
    idx[1] = static_cast<int>(point % N);
  } else {
    idx[2] = static_cast<int>(point % N);
    std::size_t q = point / N;
    idx[1] = static_cast<int>(q % N);
    idx[0] = static_cast<int>(q / N);
  }
  return idx;
}

std::size_t GridField::flatten(const std::array<int, 3>& idx) const {
  const int N = resolution_;
  std::size_t p = static_cast<std::size_t>(idx[0]);
  p = p * N + idx[1];
  if (dimension_ == 3) p = p * N + idx[2];
  return p;
}

std::array<int, 3> GridField::wavevector(std::size_t point) const {
  auto idx = unflatten(point);
  std::array<int, 3> k{0, 0, 0};
  for (int a = 0; a < dimension_; ++a) k[a] = wavenumber(idx[a], resolution_);
  return k;
}

GridField GridField::resampled(int new_resolution) const {
  check_resolution(new_resolution);
  if (new_resolution == resolution_) return *this;
  GridField out(dimension_, components_, new_resolution);
  const int keep = std::min(resolution_, new_resolution) / 2 - 1;
  auto copy_modes = [&](int c) {
    const complexd* src = spec_.data() + static_cast<std::size_t>(c) * points_;
    complexd* dst =
        out.spec_.data() + static_cast<std::size_t>(c) * out.points_;
    std::array<int, 3> k{0, 0, 0};
    auto on_axis = [&](int a, auto&& self) -> void {
      if (a == dimension_) {
        std::array<int, 3> si{0, 0, 0}, di{0, 0, 0};
        for (int x = 0; x < dimension_; ++x) {
          si[x] = k[x] >= 0 ? k[x] : k[x] + resolution_;
          di[x] = k[x] >= 0 ? k[x] : k[x] + new_resolution;
        }
        dst[out.flatten(di)] = src[flatten(si)];
        return;
      }
      for (k[a] = -keep; k[a] <= keep; ++k[a]) self(a + 1, self);
    };
    on_axis(0, on_axis);
  };
  for (int c = 0; c < components_; ++c) copy_modes(c);
  out.sync_real_from_spectral();
  return out;
}

GridField GridField::derivative(int component, int axis) const {
  if (axis < 0 || axis >= dimension_) throw ShapeError("derivative axis out of range");
  GridField out(dimension_, 1, resolution_);
  const complexd* src =
      spec_.data() + static_cast<std::size_t>(component) * points_;
  const double two_pi = 2.0 * M_PI;
  for (std::size_t p = 0; p < points_; ++p) {
    auto idx = unflatten(p);
    int k = wavenumber(idx[axis], resolution_);
    // Unmatched Nyquist mode has no well-defined odd derivative; drop it.
    if (k == -resolution_ / 2) k = 0;
    out.spec_[p] = src[p] * complexd(0.0, two_pi * k);
  }
  out.sync_real_from_spectral();
  return out;
}

}  // namespace torusmix
