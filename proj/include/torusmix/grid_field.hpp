#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

namespace torusmix {

using complexd = std::complex<double>;

// Scalar or vector field sampled on the uniform grid {j/N}^d of the unit
// torus, kept simultaneously in real and spectral form. The spectral array
// uses standard DFT index order; coefficient at multi-index j represents the
// wavenumber k with k_i = j_i for j_i < N/2 and j_i - N otherwise, normalized
// so that f(x) = sum_k fhat(k) e^{+2pi i k.x}.
class GridField {
 public:
  GridField() = default;
  GridField(int dimension, int components, int resolution);

  static GridField from_real(int dimension, int components, int resolution,
                             std::vector<double> real_values);
  static GridField from_spectral(int dimension, int components, int resolution,
                                 std::vector<complexd> spectral_values);

  int dimension() const { return dimension_; }
  int components() const { return components_; }
  int resolution() const { return resolution_; }
  std::size_t points() const { return points_; }

  const std::vector<double>& real_values() const { return real_; }
  const std::vector<complexd>& spectral_values() const { return spec_; }
  std::vector<double>& mutable_real_values() { return real_; }
  std::vector<complexd>& mutable_spectral_values() { return spec_; }

  double real_at(int component, std::size_t point) const {
    return real_[static_cast<std::size_t>(component) * points_ + point];
  }
  complexd spectral_at(int component, std::size_t point) const {
    return spec_[static_cast<std::size_t>(component) * points_ + point];
  }

  // Recompute one representation from the other.
  void sync_spectral_from_real();
  void sync_real_from_spectral();

  // max_x |f_c(x)| over all components.
  double max_abs() const;
  // Largest |imag| left behind by a backward transform, relative to max_abs.
  double imag_residual() const;
  // Parseval sum over a component: sum_k |fhat(k)|^2 = integral of f^2.
  double l2_norm_squared(int component = 0) const;
  // k = 0 coefficient (the mean) of a component.
  complexd mean_mode(int component = 0) const;

  // Spectral injection (zero-pad) or truncation to a new power-of-two grid.
  GridField resampled(int new_resolution) const;
  // Spectral derivative d/dx_axis of one component, as a scalar field.
  GridField derivative(int component, int axis) const;

  // Wavenumber of spectral index i along one axis.
  static int wavenumber(int index, int resolution) {
    return index < resolution / 2 ? index : index - resolution;
  }
  // Multi-index of a flattened point (row major, x1 slowest).
  std::array<int, 3> unflatten(std::size_t point) const;
  std::size_t flatten(const std::array<int, 3>& idx) const;
  // Integer wavenumber vector of a flattened spectral index.
  std::array<int, 3> wavevector(std::size_t point) const;

 private:
  int dimension_ = 0;
  int components_ = 0;
  int resolution_ = 0;
  std::size_t points_ = 0;
  std::vector<double> real_;
  std::vector<complexd> spec_;
};

// Verifies that resolution is a power of two >= 4; throws ConfigError.
void check_resolution(int resolution);

}  // namespace torusmix
