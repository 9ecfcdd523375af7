#include "torusmix/torus_fields.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "torusmix/errors.hpp"
#include "torusmix/fft.hpp"
#include "torusmix/rng.hpp"

namespace torusmix {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double mode_norm(const Mode& k) {
  return std::sqrt(static_cast<double>(k[0]) * k[0] +
                   static_cast<double>(k[1]) * k[1] +
                   static_cast<double>(k[2]) * k[2]);
}

bool is_canonical(const Mode& k) {
  for (int c : k) {
    if (c > 0) return true;
    if (c < 0) return false;
  }
  return false;
}

std::size_t spectral_index(const Mode& k, int dimension, int N) {
  auto wrap = [N](int c) { return c >= 0 ? c : c + N; };
  std::size_t p = static_cast<std::size_t>(wrap(k[0]));
  p = p * N + wrap(k[1]);
  if (dimension == 3) p = p * N + wrap(k[2]);
  return p;
}

// Draws the canonical-mode coefficients in a fixed order and writes the
// conjugate-symmetric spectrum. One Rng per scalar keeps substreams
// independent and the order deterministic.
std::vector<complexd> sample_spectrum(const SpectrumConfig& spec,
                                      int resolution, std::uint64_t stream) {
  const int d = spec.dimension;
  const int N = resolution;
  std::size_t npts = 1;
  for (int i = 0; i < d; ++i) npts *= N;
  std::vector<complexd> out(npts, complexd(0.0));
  Rng rng(seed_hash(spec.seed, stream));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (const Mode& k : canonical_modes(d, spec.max_wavenumber)) {
    const double sig = spec.sigma(k);
    const double a = rng.normal();
    const double b = rng.normal();
    const complexd c = complexd(spec.mu(k), 0.0) +
                       sig * inv_sqrt2 * complexd(a, b);
    Mode mk{-k[0], -k[1], -k[2]};
    out[spectral_index(k, d, N)] = c;
    out[spectral_index(mk, d, N)] = std::conj(c);
  }
  return out;
}

int next_pow2(int n) {
  int p = 4;
  while (p < n) p <<= 1;
  return p;
}

int max_retained_wavenumber(const GridField& f) {
  int kmax = 0;
  const auto& spec = f.spectral_values();
  for (int c = 0; c < f.components(); ++c) {
    const complexd* s = spec.data() + static_cast<std::size_t>(c) * f.points();
    for (std::size_t p = 0; p < f.points(); ++p) {
      if (std::abs(s[p]) == 0.0) continue;
      auto k = f.wavevector(p);
      for (int a = 0; a < f.dimension(); ++a)
        kmax = std::max(kmax, std::abs(k[a]));
    }
  }
  return kmax;
}

}  // namespace

double SpectrumConfig::sigma(const Mode& k) const {
  if (!stddev.empty()) {
    auto it = stddev.find(k);
    return it == stddev.end() ? 0.0 : it->second;
  }
  return std::pow(mode_norm(k), -decay_exponent);
}

double SpectrumConfig::mu(const Mode& k) const {
  auto it = mean.find(k);
  return it == mean.end() ? 0.0 : it->second;
}

double gamma_for_alpha(int dimension, double alpha) {
  return dimension / 2.0 + 1.0 + alpha + 0.05;
}

std::vector<Mode> canonical_modes(int dimension, int max_wavenumber) {
  const int K = max_wavenumber;
  std::vector<Mode> out;
  const int lo3 = dimension == 3 ? -K : 0;
  const int hi3 = dimension == 3 ? K : 0;
  for (int a = -K; a <= K; ++a)
    for (int b = -K; b <= K; ++b)
      for (int c = lo3; c <= hi3; ++c) {
        Mode k{a, b, c};
        if (is_canonical(k)) out.push_back(k);
      }
  return out;
}

GridField sample_stream_2d(const SpectrumConfig& spec, int resolution) {
  if (spec.dimension != 2) throw ShapeError("sample_stream_2d needs dimension 2");
  check_resolution(resolution);
  if (spec.max_wavenumber > resolution / 3)
    throw ConfigError("max_wavenumber " + std::to_string(spec.max_wavenumber) +
                      " exceeds dealias headroom N/3 at N=" +
                      std::to_string(resolution));
  return GridField::from_spectral(2, 1, resolution,
                                  sample_spectrum(spec, resolution, 0x5741u));
}

ClebschPotentials sample_clebsch_3d(const SpectrumConfig& spec,
                                    int resolution) {
  if (spec.dimension != 3) throw ShapeError("sample_clebsch_3d needs dimension 3");
  check_resolution(resolution);
  if (spec.max_wavenumber > resolution / 3)
    throw ConfigError("max_wavenumber " + std::to_string(spec.max_wavenumber) +
                      " exceeds dealias headroom N/3 at N=" +
                      std::to_string(resolution));
  return ClebschPotentials{
      GridField::from_spectral(3, 1, resolution,
                               sample_spectrum(spec, resolution, 0xC1E1u)),
      GridField::from_spectral(3, 1, resolution,
                               sample_spectrum(spec, resolution, 0xC1E2u))};
}

GridField velocity_from_stream(const GridField& phi) {
  if (phi.dimension() != 2 || phi.components() != 1)
    throw ShapeError("velocity_from_stream needs a 2D scalar");
  const int N = phi.resolution();
  const std::size_t npts = phi.points();
  std::vector<complexd> spec(2 * npts);
  for (std::size_t p = 0; p < npts; ++p) {
    auto k = phi.wavevector(p);
    const complexd s = phi.spectral_values()[p];
    spec[p] = complexd(0.0, kTwoPi * k[1]) * s;          // d2 phi
    spec[npts + p] = complexd(0.0, -kTwoPi * k[0]) * s;  // -d1 phi
  }
  return GridField::from_spectral(2, 2, N, std::move(spec));
}

ClebschVelocity velocity_from_clebsch(const ClebschPotentials& pots) {
  const GridField& p1 = pots.phi1;
  const GridField& p2 = pots.phi2;
  if (p1.dimension() != 3 || p2.dimension() != 3)
    throw ShapeError("velocity_from_clebsch needs 3D potentials");
  if (p1.resolution() != p2.resolution())
    throw ShapeError("potential resolutions differ");
  const int K = std::max(max_retained_wavenumber(p1),
                         max_retained_wavenumber(p2));
  // The cross product carries modes up to 2K; an M >= 4K+2 grid multiplies it
  // alias-free and an output grid of N_out >= 4K+2 retains every mode.
  const int M = std::max(p1.resolution(), next_pow2(4 * K + 2));
  const GridField f1 = p1.resampled(M);
  const GridField f2 = p2.resampled(M);

  std::size_t npts = f1.points();
  std::vector<GridField> g1(3), g2(3);
  for (int a = 0; a < 3; ++a) {
    g1[a] = f1.derivative(0, a);
    g2[a] = f2.derivative(0, a);
  }
  std::vector<double> cross(3 * npts);
  for (std::size_t p = 0; p < npts; ++p) {
    const double a1 = g1[0].real_values()[p], a2 = g1[1].real_values()[p],
                 a3 = g1[2].real_values()[p];
    const double b1 = g2[0].real_values()[p], b2 = g2[1].real_values()[p],
                 b3 = g2[2].real_values()[p];
    cross[p] = a2 * b3 - a3 * b2;
    cross[npts + p] = a3 * b1 - a1 * b3;
    cross[2 * npts + p] = a1 * b2 - a2 * b1;
  }
  GridField v = GridField::from_real(3, 3, M, std::move(cross));

  ClebschVelocity out{GridField{}, divergence_residual(v)};
  // Leray projection: vhat <- vhat - k (k.vhat)/|k|^2, removes round-off
  // divergence left by the pointwise product.
  auto& spec = v.mutable_spectral_values();
  const std::size_t np = v.points();
  for (std::size_t p = 0; p < np; ++p) {
    auto k = v.wavevector(p);
    const double k2 = static_cast<double>(k[0]) * k[0] +
                      static_cast<double>(k[1]) * k[1] +
                      static_cast<double>(k[2]) * k[2];
    if (k2 == 0.0) continue;
    const complexd dot =
        spec[p] * static_cast<double>(k[0]) +
        spec[np + p] * static_cast<double>(k[1]) +
        spec[2 * np + p] * static_cast<double>(k[2]);
    for (int a = 0; a < 3; ++a)
      spec[static_cast<std::size_t>(a) * np + p] -= dot * (k[a] / k2);
  }
  v.sync_real_from_spectral();
  out.v = std::move(v);
  return out;
}

double divergence_residual(const GridField& v) {
  if (v.components() != v.dimension())
    throw ShapeError("divergence_residual needs a vector field");
  const std::size_t npts = v.points();
  double worst = 0.0;
  for (std::size_t p = 0; p < npts; ++p) {
    auto k = v.wavevector(p);
    complexd dot(0.0);
    double knorm2 = 0.0, vnorm2 = 0.0;
    for (int a = 0; a < v.dimension(); ++a) {
      const complexd va = v.spectral_at(a, p);
      dot += va * (kTwoPi * k[a]);
      knorm2 += (kTwoPi * k[a]) * (kTwoPi * k[a]);
      vnorm2 += std::norm(va);
    }
    const double resid =
        std::abs(dot) / (1.0 + std::sqrt(vnorm2) * std::sqrt(knorm2));
    worst = std::max(worst, resid);
  }
  return worst;
}

namespace {

// Complex mode amplitude of the observable at x for canonical mode k:
// observable = sum over pairs of 2 Re(c_k w_k(x)). For d=2 the observable is
// v(x) (2 entries), for d=3 the stacked gradients (6 entries: grad phi1 then
// grad phi2; the potentials are independent, so each mode feeds one block).
void mode_vectors(const SpectrumConfig& spec, const Mode& k,
                  const std::array<double, 3>& x, int block,
                  std::vector<complexd>& w) {
  const double phase = kTwoPi * (k[0] * x[0] + k[1] * x[1] + k[2] * x[2]);
  const complexd e = std::polar(1.0, phase);
  if (spec.dimension == 2) {
    w.assign(2, complexd(0.0));
    w[0] = complexd(0.0, kTwoPi * k[1]) * e;
    w[1] = complexd(0.0, -kTwoPi * k[0]) * e;
  } else {
    w.assign(6, complexd(0.0));
    for (int a = 0; a < 3; ++a)
      w[3 * block + a] = complexd(0.0, kTwoPi * k[a]) * e;
  }
}

}  // namespace

CovarianceCheck pointwise_covariance_check(const SpectrumConfig& spec,
                                           const std::array<double, 3>& x_in,
                                           int samples) {
  if (samples < 100) throw ConfigError("pointwise_covariance_check needs samples >= 100");
  std::array<double, 3> x = x_in;
  for (double& c : x) c -= std::floor(c);  // wrap into [0,1)
  const int d = spec.dimension;
  const int n = d == 2 ? 2 : 6;
  const int blocks = d == 2 ? 1 : 2;
  CovarianceCheck out;
  out.matrix_size = n;
  out.analytic.assign(static_cast<std::size_t>(n) * n, 0.0);
  out.sampled.assign(static_cast<std::size_t>(n) * n, 0.0);

  const auto modes = canonical_modes(d, spec.max_wavenumber);
  std::vector<complexd> w;
  for (const Mode& k : modes) {
    const double s2 = spec.sigma(k) * spec.sigma(k);
    for (int blk = 0; blk < blocks; ++blk) {
      mode_vectors(spec, k, x, blk, w);
      // per-pair covariance contribution: 2 sigma^2 (Re w Re w^T + Im w Im w^T)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          out.analytic[static_cast<std::size_t>(i) * n + j] +=
              2.0 * s2 *
              (w[i].real() * w[j].real() + w[i].imag() * w[j].imag());
    }
  }

  // Monte Carlo cross-check by direct mode summation at x.
  std::vector<std::vector<complexd>> wt(modes.size() * blocks);
  for (std::size_t m = 0; m < modes.size(); ++m)
    for (int blk = 0; blk < blocks; ++blk)
      mode_vectors(spec, modes[m], x, blk, wt[m * blocks + blk]);
  std::vector<double> mean_acc(n, 0.0), cov_acc(static_cast<std::size_t>(n) * n, 0.0);
  std::vector<std::vector<double>> draws(samples, std::vector<double>(n, 0.0));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int s = 0; s < samples; ++s) {
    Rng rng(seed_hash(spec.seed, 0xC0Fu + static_cast<std::uint64_t>(s)));
    auto& v = draws[s];
    for (std::size_t m = 0; m < modes.size(); ++m) {
      const double sig = spec.sigma(modes[m]);
      for (int blk = 0; blk < blocks; ++blk) {
        const double a = rng.normal();
        const double b = rng.normal();
        const complexd c = sig * inv_sqrt2 * complexd(a, b) +
                           complexd(spec.mu(modes[m]), 0.0);
        const auto& wv = wt[m * blocks + blk];
        for (int i = 0; i < n; ++i) v[i] += 2.0 * (c * wv[i]).real();
      }
    }
    for (int i = 0; i < n; ++i) mean_acc[i] += v[i];
  }
  for (int i = 0; i < n; ++i) mean_acc[i] /= samples;
  for (int s = 0; s < samples; ++s)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        cov_acc[static_cast<std::size_t>(i) * n + j] +=
            (draws[s][i] - mean_acc[i]) * (draws[s][j] - mean_acc[j]);
  for (auto& c : cov_acc) c /= (samples - 1);
  out.sampled = cov_acc;

  Eigen::MatrixXd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      A(i, j) = out.analytic[static_cast<std::size_t>(i) * n + j];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  out.min_eigenvalue = es.eigenvalues().minCoeff();

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double cij = out.analytic[static_cast<std::size_t>(i) * n + j];
      const double sij = out.sampled[static_cast<std::size_t>(i) * n + j];
      const double se = std::sqrt(
          (A(i, i) * A(j, j) + cij * cij) / std::max(1, samples - 1));
      const double dev = std::abs(sij - cij);
      out.max_abs_deviation = std::max(out.max_abs_deviation, dev);
      if (se > 0.0)
        out.max_deviation_se = std::max(out.max_deviation_se, dev / se);
    }
  return out;
}

HolderFit holder_fit(const GridField& f, int derivative_order) {
  if (derivative_order != 0 && derivative_order != 1)
    throw ConfigError("derivative_order must be 0 or 1");
  const int N = f.resolution();
  if (N < 64) throw ConfigError("holder fit needs resolution >= 64");

  std::vector<GridField> fields;
  if (derivative_order == 0) {
    fields.push_back(f);
  } else {
    for (int c = 0; c < f.components(); ++c)
      for (int a = 0; a < f.dimension(); ++a)
        fields.push_back(f.derivative(c, a));
  }

  HolderFit fit;
  for (int shift = 4; shift <= N / 8; shift *= 2) {
    double m = 0.0;
    for (const auto& g : fields) {
      const auto& vals = g.real_values();
      for (int c = 0; c < g.components(); ++c) {
        const double* base = vals.data() + static_cast<std::size_t>(c) * g.points();
        for (std::size_t p = 0; p < g.points(); ++p) {
          auto idx = g.unflatten(p);
          for (int a = 0; a < g.dimension(); ++a) {
            auto jdx = idx;
            jdx[a] = (idx[a] + shift) % N;
            m = std::max(m, std::abs(base[g.flatten(jdx)] - base[p]));
          }
        }
      }
    }
    fit.radii.push_back(static_cast<double>(shift) / N);
    fit.increments.push_back(m);
  }
  for (double v : fit.increments)
    if (v <= 0.0) throw EstimatorError("holder fit undefined: zero increments (constant field)");
  // least squares on log-log
  const std::size_t n = fit.radii.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(fit.radii[i]);
    const double ly = std::log(fit.increments[i]);
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  fit.alpha_raw = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - fit.alpha_raw * sx) / n;
  fit.norm = std::exp(intercept);
  fit.alpha = std::clamp(fit.alpha_raw, 0.0, 1.0);
  return fit;
}

double holder_estimate(const GridField& f, int derivative_order) {
  return holder_fit(f, derivative_order).alpha;
}

}  // namespace torusmix
