#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "torusmix/solver.hpp"

namespace torusmix {

enum class SweepVerdict { no_anomaly_consistent, anomaly_suspected, inconclusive };
const char* to_string(SweepVerdict v);

struct SweepConfig {
  std::vector<double> epsilons;  // strictly decreasing, geometric ratio <= 1/2
  InitialData theta_in;
  SolverConfig solver;           // per-run template (epsilon/dt filled per cell)
  int n_min = 32;
  int n_max = 512;
  double decrease_factor = 0.2;  // no-anomaly gate: D_min < factor * D_max
  double plateau_tol = 0.1;      // anomaly gate: last three D within 10%
  double anomaly_floor = 1e-3;   // ... and above floor * variance(0)
  int workers = 0;               // 0 = hardware concurrency
};

struct SweepRun {
  double epsilon = 0.0;
  int resolution = 0;
  DissipationLedger ledger;
  ScalarState final_state;
};

struct SweepResult {
  std::vector<double> epsilons;
  std::vector<double> dissipation;       // D(eps) at t_final
  std::vector<double> variance_deficit;  // variance(0) - variance(T)
  double fit_slope = 0.0;                // log D vs log eps, small-eps window
  SweepVerdict verdict = SweepVerdict::inconclusive;
  std::vector<SweepRun> runs;
  int data_band = 0;  // common |k|_inf band of the initial data
};

// Resolution rule: N = next power of two with N >= 2/sqrt(eps T), N >= 3 K_v,
// N >= n_min; throws RefusalError naming the minimal admissible N when that
// exceeds n_max.
int sweep_resolution(double epsilon, double t_final, int velocity_band,
                     int n_min, int n_max);

SweepResult epsilon_sweep(const GridField& v_base, const SweepConfig& cfg);

// Applies the verdict thresholds to a dissipation curve (exposed so synthetic
// curves can exercise the rule).
SweepVerdict sweep_verdict(const std::vector<double>& dissipation,
                           double variance0, double decrease_factor,
                           double plateau_tol, double anomaly_floor);
double sweep_fit_slope(const std::vector<double>& epsilons,
                       const std::vector<double>& dissipation);

struct YaglomAverage {
  double mean = 0.0;
  std::optional<GridField> pointwise;
};
// S(theta, v, r) = int_{S^{d-1}} xi . dv(r xi; x) |dtheta(r xi; x)|^2 dxi,
// quadrature over Q quasi-uniform directions, increments by spectral shift.
YaglomAverage yaglom_average(const GridField& theta, const GridField& v,
                             double r, int quadrature_q = 256,
                             bool keep_pointwise = false);

struct YaglomRatioPoint {
  double epsilon = 0.0;
  double mean_s = 0.0;
  double ratio = 0.0;  // mean_s / epsilon
};
std::vector<YaglomRatioPoint> yaglom_ratio_curve(const GridField& v_base,
                                                 const SweepResult& sweep,
                                                 int quadrature_q = 256);

struct StructureFunctionFit {
  double beta = 0.0;  // fitted exponent (slope of log S2 vs log r, halved)
  std::vector<double> radii;
  std::vector<double> s2;
};
StructureFunctionFit structure_function_exponent(const GridField& theta,
                                                 const std::vector<double>& radii,
                                                 int quadrature_q = 64);

// L2 distances |theta_i(T) - theta_last(T)| with the final (smallest eps)
// state as the surrogate limit; coarser states are spectrally injected.
std::vector<double> strong_convergence_check(const std::vector<ScalarState>& finals);

// Quasi-uniform unit directions: uniform angles (d=2), Fibonacci sphere (d=3).
std::vector<std::array<double, 3>> sphere_directions(int dimension, int count);
// Surface measure of S^{d-1} divided by count (quadrature weight).
double sphere_weight(int dimension, int count);

}  // namespace torusmix
