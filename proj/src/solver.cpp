#include "torusmix/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "torusmix/errors.hpp"
#include "torusmix/fft.hpp"

namespace torusmix {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void project_band(GridField& f, int band) {
  auto& spec = f.mutable_spectral_values();
  for (std::size_t p = 0; p < f.points(); ++p) {
    auto k = f.wavevector(p);
    bool keep = true;
    for (int a = 0; a < f.dimension(); ++a)
      if (std::abs(k[a]) > band) keep = false;
    if (!keep) spec[p] = complexd(0.0);
  }
  f.sync_real_from_spectral();
}

// Pseudo-spectral integrating-factor RK4 stepper over raw spectral arrays.
// Diffusion is exact per step; the dealiased advection term is evaluated in
// real space against the (autonomous) velocity samples.
class Stepper {
 public:
  Stepper(const GridField& v, int dimension, int resolution, double epsilon,
          bool dealias)
      : d_(dimension),
        n_(resolution),
        eps_(epsilon),
        npts_(1) {
    for (int i = 0; i < d_; ++i) npts_ *= static_cast<std::size_t>(n_);
    const bool has_velocity = v.components() > 0 && v.max_abs() > 0.0;
    if (has_velocity) {
      if (v.dimension() != d_ || v.resolution() != n_ || v.components() != d_)
        throw ShapeError("velocity field does not match the scalar grid");
      vel_ = &v.real_values();
    }
    const int band = dealias ? n_ / 3 : n_ / 2 - 1;
    band_ = band;
    kfac_.resize(npts_ * d_);
    mask_.assign(npts_, 1.0f);
    k2_.resize(npts_);
    GridField probe(d_, 1, n_);
    for (std::size_t p = 0; p < npts_; ++p) {
      auto k = probe.wavevector(p);
      double k2 = 0.0;
      bool keep = true;
      for (int a = 0; a < d_; ++a) {
        kfac_[a * npts_ + p] = kTwoPi * k[a];
        k2 += (kTwoPi * k[a]) * (kTwoPi * k[a]);
        if (std::abs(k[a]) > band) keep = false;
      }
      k2_[p] = k2;
      if (!keep) mask_[p] = 0.0f;
    }
    grad_.assign(d_, std::vector<complexd>(npts_));
    adv_.resize(npts_);
    k1_.resize(npts_); k2buf_.resize(npts_); k3_.resize(npts_); k4_.resize(npts_);
    e1_.resize(npts_); e2_.resize(npts_);
  }

  bool has_velocity() const { return vel_ != nullptr; }
  int band() const { return band_; }

  double max_velocity() const {
    if (!vel_) return 0.0;
    double m = 0.0;
    for (double x : *vel_) m = std::max(m, std::abs(x));
    return m;
  }

  void set_dt(double dt) {
    dt_ = dt;
    for (std::size_t p = 0; p < npts_; ++p) {
      e1_[p] = std::exp(-eps_ * k2_[p] * dt * 0.5);
      e2_[p] = e1_[p] * e1_[p];
    }
  }

  // -dealias(F(v . grad theta)), with the k=0 component pinned to zero so the
  // mean coefficient is bit-stable over arbitrarily many steps.
  void nonlinear(const std::vector<complexd>& spec, std::vector<complexd>& out) {
    if (!vel_) {
      std::fill(out.begin(), out.end(), complexd(0.0));
      return;
    }
    for (int a = 0; a < d_; ++a) {
      auto& g = grad_[a];
      for (std::size_t p = 0; p < npts_; ++p)
        g[p] = spec[p] * complexd(0.0, kfac_[a * npts_ + p]) *
               static_cast<double>(mask_[p]);
      fft::backward(d_, n_, g.data());
    }
    const double* v = vel_->data();
    for (std::size_t p = 0; p < npts_; ++p) {
      double s = 0.0;
      for (int a = 0; a < d_; ++a)
        s += v[a * npts_ + p] * grad_[a][p].real();
      adv_[p] = complexd(s, 0.0);
    }
    fft::forward(d_, n_, adv_.data());
    for (std::size_t p = 0; p < npts_; ++p)
      out[p] = -adv_[p] * static_cast<double>(mask_[p]);
    out[0] = complexd(0.0);
  }

  void step(std::vector<complexd>& spec) {
    nonlinear(spec, k1_);
    for (std::size_t p = 0; p < npts_; ++p)
      adv_[p] = e1_[p] * (spec[p] + 0.5 * dt_ * k1_[p]);
    nonlinear(adv_, k2buf_);
    for (std::size_t p = 0; p < npts_; ++p)
      adv_[p] = e1_[p] * spec[p] + 0.5 * dt_ * k2buf_[p];
    nonlinear(adv_, k3_);
    for (std::size_t p = 0; p < npts_; ++p)
      adv_[p] = e2_[p] * spec[p] + dt_ * e1_[p] * k3_[p];
    nonlinear(adv_, k4_);
    const double w = dt_ / 6.0;
    for (std::size_t p = 0; p < npts_; ++p)
      spec[p] = e2_[p] * spec[p] +
                w * (e2_[p] * k1_[p] + 2.0 * e1_[p] * (k2buf_[p] + k3_[p]) +
                     k4_[p]);
  }

  double variance(const std::vector<complexd>& spec) const {
    double s = 0.0;
    for (std::size_t p = 0; p < npts_; ++p) s += std::norm(spec[p]);
    return s;
  }

  // eps * sum |2pi k|^2 |theta_hat|^2 (the Parseval dissipation integrand)
  double grad_sum(const std::vector<complexd>& spec) const {
    double s = 0.0;
    for (std::size_t p = 0; p < npts_; ++p) s += k2_[p] * std::norm(spec[p]);
    return eps_ * s;
  }

 private:
  int d_;
  int n_;
  double eps_;
  std::size_t npts_;
  double dt_ = 0.0;
  int band_ = 0;
  const std::vector<double>* vel_ = nullptr;
  std::vector<double> kfac_, k2_;
  std::vector<float> mask_;
  std::vector<std::vector<complexd>> grad_;
  std::vector<complexd> adv_, k1_, k2buf_, k3_, k4_;
  std::vector<double> e1_, e2_;
};

}  // namespace

double auto_time_step(const SolverConfig& cfg, int resolution,
                      double max_velocity, int dimension) {
  const double dx = 1.0 / resolution;
  double dt = cfg.t_final;
  if (max_velocity > 0.0) dt = std::min(dt, dx / max_velocity);
  if (cfg.epsilon > 0.0) {
    const double kmax = kTwoPi * (resolution / 3);
    const double kappa2 = dimension * kmax * kmax;
    dt = std::min(dt, cfg.diff_step_cap / (cfg.epsilon * kappa2));
  }
  return cfg.cfl_safety * dt;
}

ScalarState initialize(const InitialData& data, int dimension, int resolution,
                       int band_limit) {
  check_resolution(resolution);
  const int N = resolution;
  GridField theta(dimension, 1, N);
  switch (data.kind) {
    case InitialKind::single_mode: {
      auto& spec = theta.mutable_spectral_values();
      Mode k = data.mode;
      Mode mk{-k[0], -k[1], -k[2]};
      auto wrap = [N](int c) { return c >= 0 ? c : c + N; };
      auto at = [&](const Mode& m) {
        std::size_t p = static_cast<std::size_t>(wrap(m[0]));
        p = p * N + wrap(m[1]);
        if (dimension == 3) p = p * N + wrap(m[2]);
        return p;
      };
      spec[at(k)] = complexd(0.0, -0.5);  // sin(2pi k.x)
      spec[at(mk)] = complexd(0.0, 0.5);
      theta.sync_real_from_spectral();
      break;
    }
    case InitialKind::checkerboard: {
      const int m = data.tiles;
      if (m < 1) throw ConfigError("checkerboard tiles must be >= 1");
      if (N % (2 * m) != 0)
        throw ConfigError("checkerboard needs resolution divisible by 2*tiles");
      auto& re = theta.mutable_real_values();
      for (std::size_t p = 0; p < theta.points(); ++p) {
        auto idx = theta.unflatten(p);
        int parity = 0;
        for (int a = 0; a < dimension; ++a)
          parity += (2 * m * idx[a]) / N;
        re[p] = (parity % 2 == 0) ? 1.0 : -1.0;
      }
      theta.sync_spectral_from_real();
      break;
    }
    case InitialKind::indicator_halftorus: {
      auto& re = theta.mutable_real_values();
      for (std::size_t p = 0; p < theta.points(); ++p)
        re[p] = theta.unflatten(p)[0] * 2 < N ? 1.0 : 0.0;
      theta.sync_spectral_from_real();
      break;
    }
    case InitialKind::spectral_table: {
      auto& spec = theta.mutable_spectral_values();
      auto wrap = [N](int c) { return c >= 0 ? c : c + N; };
      for (const auto& [k, c] : data.table) {
        std::size_t p = static_cast<std::size_t>(wrap(k[0]));
        p = p * N + wrap(k[1]);
        if (dimension == 3) p = p * N + wrap(k[2]);
        spec[p] = c;
        Mode mk{-k[0], -k[1], -k[2]};
        std::size_t q = static_cast<std::size_t>(wrap(mk[0]));
        q = q * N + wrap(mk[1]);
        if (dimension == 3) q = q * N + wrap(mk[2]);
        if (q != p) spec[q] = std::conj(c);
      }
      theta.sync_real_from_spectral();
      break;
    }
    default:
      throw ConfigError("unknown initial data kind");
  }
  if (band_limit > 0) project_band(theta, band_limit);
  return ScalarState{std::move(theta), 0.0};
}

ScalarState step(const ScalarState& state, const GridField& v,
                 const SolverConfig& cfg) {
  if (cfg.dt <= 0.0) throw ConfigError("step needs an explicit dt > 0");
  Stepper st(v, state.theta.dimension(), state.theta.resolution(), cfg.epsilon,
             cfg.dealias);
  const double vmax = st.max_velocity();
  if (vmax > 0.0 && cfg.dt > cfg.cfl_safety / (state.theta.resolution() * vmax))
    throw StabilityError(
        "dt " + std::to_string(cfg.dt) + " violates the CFL bound " +
        std::to_string(cfg.cfl_safety / (state.theta.resolution() * vmax)));
  st.set_dt(cfg.dt);
  std::vector<complexd> spec = state.theta.spectral_values();
  st.step(spec);
  ScalarState out;
  out.theta = GridField::from_spectral(state.theta.dimension(), 1,
                                       state.theta.resolution(), std::move(spec));
  out.time = state.time + cfg.dt;
  return out;
}

SolveResult solve(const ScalarState& state0, const GridField& v,
                  const SolverConfig& cfg) {
  const int d = state0.theta.dimension();
  const int N = state0.theta.resolution();
  Stepper st(v, d, N, cfg.epsilon, cfg.dealias);
  const double vmax = st.max_velocity();

  double dt = cfg.dt;
  if (dt <= 0.0) {
    dt = auto_time_step(cfg, N, vmax, d);
  } else if (vmax > 0.0 && dt > cfg.cfl_safety / (N * vmax)) {
    throw StabilityError("dt " + std::to_string(dt) +
                         " violates the CFL bound " +
                         std::to_string(cfg.cfl_safety / (N * vmax)));
  }
  const long steps = std::max(1L, static_cast<long>(std::ceil(cfg.t_final / dt - 1e-12)));
  dt = cfg.t_final / static_cast<double>(steps);
  st.set_dt(dt);

  SolveResult res;
  DissipationLedger& led = res.ledger;
  led.dt = dt;
  led.steps = steps;
  led.band_limit = st.band();
  led.initial_variance_raw = state0.theta.l2_norm_squared();

  // Project the data onto the dealias band once; the stepper then keeps it
  // band-limited, so in-band products are alias-free for the whole run.
  GridField theta0 = state0.theta;
  project_band(theta0, st.band());
  std::vector<complexd> spec = theta0.spectral_values();
  led.initial_variance = st.variance(spec);

  const double cadence =
      cfg.output_cadence > 0.0 ? cfg.output_cadence : cfg.t_final / 64.0;
  const double var0 = led.initial_variance;
  if (var0 <= 0.0) throw InputError("initial data has zero variance");

  double diss = 0.0;
  double g_prev = st.grad_sum(spec);
  double next_record = 0.0;
  auto record = [&](double t) {
    led.times.push_back(t);
    const double var = st.variance(spec);
    led.variance.push_back(var);
    led.dissipation_cumulative.push_back(diss);
    led.balance_residual.push_back(std::abs(var - var0 + 2.0 * diss) / var0);
    if (cfg.store_trajectory) {
      ScalarState s;
      s.theta = GridField::from_spectral(d, 1, N, spec);
      s.time = t;
      res.trajectory.push_back(std::move(s));
    }
  };
  record(0.0);
  next_record = cadence;

  for (long i = 0; i < steps; ++i) {
    st.step(spec);
    const double g = st.grad_sum(spec);
    diss += 0.5 * dt * (g_prev + g);
    g_prev = g;
    const double t = dt * static_cast<double>(i + 1);
    if (t + 1e-12 >= next_record || i + 1 == steps) {
      record(t);
      while (next_record <= t + 1e-12) next_record += cadence;
    }
  }
  res.final_state.theta = GridField::from_spectral(d, 1, N, std::move(spec));
  res.final_state.time = cfg.t_final;
  return res;
}

double energy_balance_residual(const DissipationLedger& ledger) {
  if (ledger.variance.empty()) throw InputError("empty ledger");
  const double var0 = ledger.variance.front();
  if (var0 <= 0.0) throw InputError("degenerate ledger: zero initial variance");
  double worst = 0.0;
  for (std::size_t i = 0; i < ledger.times.size(); ++i) {
    const double r = std::abs(ledger.variance[i] - var0 +
                              2.0 * ledger.dissipation_cumulative[i]) / var0;
    worst = std::max(worst, r);
  }
  return worst;
}

double Beta::operator()(double x) const {
  switch (kind) {
    case BetaKind::identity: return x;
    case BetaKind::square: return x * x;
    case BetaKind::cubic: return x * x * x;
    case BetaKind::custom: {
      double acc = 0.0, pw = 1.0;
      for (double c : coefficients) {
        acc += c * pw;
        pw *= x;
      }
      return acc;
    }
  }
  return x;
}

std::vector<double> renormalization_defect(const std::vector<ScalarState>& trajectory,
                                           const Beta& beta) {
  if (trajectory.empty()) throw InputError("renormalization_defect: empty trajectory");
  auto integral = [&](const ScalarState& s) {
    const auto& re = s.theta.real_values();
    double acc = 0.0;
    for (double x : re) acc += beta(x);
    return acc / static_cast<double>(re.size());
  };
  const double i0 = integral(trajectory.front());
  std::vector<double> out;
  out.reserve(trajectory.size());
  for (const auto& s : trajectory) out.push_back(std::abs(integral(s) - i0));
  return out;
}

}  // namespace torusmix
