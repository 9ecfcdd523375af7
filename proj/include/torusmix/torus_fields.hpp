#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "torusmix/grid_field.hpp"

namespace torusmix {

using Mode = std::array<int, 3>;  // third entry 0 in 2D

// Gaussian random potential on the torus: independent coefficients
// c_k ~ N(mu_k, sigma_k^2) on the retained modes 0 < |k|_inf <= K, with the
// conjugate mode forced to conj(c_k) so the field is real. When the stddev
// table is empty, sigma_k = |k|^-decay_exponent.
struct SpectrumConfig {
  int dimension = 2;
  int max_wavenumber = 8;
  double decay_exponent = 2.0;
  std::uint64_t seed = 0;
  std::map<Mode, double> mean;
  std::map<Mode, double> stddev;

  double sigma(const Mode& k) const;
  double mu(const Mode& k) const;
};

// gamma so that the sampled potential lies in C^{1,alpha-} almost surely
// (mean-square increment calibration with margin 0.05).
double gamma_for_alpha(int dimension, double alpha);

struct ClebschPotentials {
  GridField phi1;
  GridField phi2;
};

// Canonical representatives of the +-k mode pairs, deterministic order.
std::vector<Mode> canonical_modes(int dimension, int max_wavenumber);

GridField sample_stream_2d(const SpectrumConfig& spec, int resolution);
ClebschPotentials sample_clebsch_3d(const SpectrumConfig& spec, int resolution);

// v = (d2 phi, -d1 phi), exact in spectral space.
GridField velocity_from_stream(const GridField& phi);

struct ClebschVelocity {
  GridField v;
  double pre_projection_divergence = 0.0;
};
// v = grad phi1 x grad phi2 via an alias-free padded product, projected onto
// the divergence-free subspace. The output grid retains every product mode
// (resolution grows to the next power of two above 4K+2 when needed).
ClebschVelocity velocity_from_clebsch(const ClebschPotentials& pots);

// max_k |2pi k . vhat(k)| / (1 + |vhat(k)| |2pi k|) over retained modes.
double divergence_residual(const GridField& v);

struct CovarianceCheck {
  // d=2: 2x2 covariance of v(x); d=3: 6x6 covariance of (grad phi1, grad phi2).
  std::vector<double> analytic;  // row-major n x n
  std::vector<double> sampled;   // Monte Carlo, same layout
  int matrix_size = 0;
  double min_eigenvalue = 0.0;     // of the analytic matrix
  double max_abs_deviation = 0.0;  // |sampled - analytic| over entries
  double max_deviation_se = 0.0;   // same, in units of the MC standard error
};
CovarianceCheck pointwise_covariance_check(const SpectrumConfig& spec,
                                           const std::array<double, 3>& x,
                                           int samples);

struct HolderFit {
  double alpha = 0.0;        // fitted exponent, clamped to [0, 1]
  double alpha_raw = 0.0;    // unclamped slope
  double norm = 0.0;         // exp(intercept): max-increment law norm * r^alpha
  std::vector<double> radii;
  std::vector<double> increments;
};
// Max-increment regularity fit over dyadic axis shifts r in [4/N, 1/8].
// derivative_order 0 fits f itself, 1 fits the gradient stack of f.
HolderFit holder_fit(const GridField& f, int derivative_order);
double holder_estimate(const GridField& f, int derivative_order);

}  // namespace torusmix
