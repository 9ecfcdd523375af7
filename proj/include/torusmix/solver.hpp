#pragma once

#include <map>
#include <optional>
#include <vector>

#include "torusmix/grid_field.hpp"
#include "torusmix/torus_fields.hpp"

namespace torusmix {

enum class InitialKind { single_mode, checkerboard, indicator_halftorus, spectral_table };

struct InitialData {
  InitialKind kind = InitialKind::single_mode;
  Mode mode{1, 0, 0};                 // single_mode: theta = sin(2pi k.x)
  int tiles = 4;                      // checkerboard tile pairs per axis
  std::map<Mode, complexd> table;     // spectral_table (canonical modes)
};

struct SolverConfig {
  double epsilon = 0.0;       // diffusivity
  double dt = 0.0;            // 0 = auto
  double t_final = 1.0;
  double cfl_safety = 0.5;
  bool dealias = true;
  double output_cadence = 0.0;  // 0 = t_final/64
  // Auto-dt cap on eps |2pi k_max|^2 dt, keeps the trapezoid ledger consistent
  // with the exact per-step diffusion factor (balance residual ~ cap^2).
  double diff_step_cap = 0.01;
  bool store_trajectory = false;
};

struct ScalarState {
  GridField theta;
  double time = 0.0;
};

struct DissipationLedger {
  std::vector<double> times;
  std::vector<double> dissipation_cumulative;  // eps int_0^t int |grad theta|^2
  std::vector<double> variance;                // int theta^2 at each time
  std::vector<double> balance_residual;
  double initial_variance_raw = 0.0;  // before the dealias-band projection
  double initial_variance = 0.0;      // after it (what the run evolves)
  int band_limit = 0;                 // |k|_inf band of the evolved data
  double dt = 0.0;
  long steps = 0;
};

struct SolveResult {
  ScalarState final_state;
  DissipationLedger ledger;
  std::vector<ScalarState> trajectory;  // filled when cfg.store_trajectory
};

// theta at time 0. Discontinuous kinds (indicator, checkerboard) are exact
// grid samples; their spectral form is the grid-band truncated series.
// band_limit > 0 projects onto |k|_inf <= band_limit.
ScalarState initialize(const InitialData& data, int dimension, int resolution,
                       int band_limit = 0);

// One integrating-factor RK4 step of dt (cfg.dt must be > 0 here).
ScalarState step(const ScalarState& state, const GridField& v,
                 const SolverConfig& cfg);

SolveResult solve(const ScalarState& state0, const GridField& v,
                  const SolverConfig& cfg);

double energy_balance_residual(const DissipationLedger& ledger);

enum class BetaKind { identity, square, cubic, custom };
struct Beta {
  BetaKind kind = BetaKind::square;
  std::vector<double> coefficients;  // custom polynomial, ascending order
  double operator()(double x) const;
};

// |int beta(theta(t)) - int beta(theta_in)| for each state of the trajectory.
std::vector<double> renormalization_defect(const std::vector<ScalarState>& trajectory,
                                           const Beta& beta);

// The auto-dt rule used by solve when cfg.dt == 0 (exposed for the harness).
double auto_time_step(const SolverConfig& cfg, int resolution, double max_velocity,
                      int dimension);

}  // namespace torusmix
