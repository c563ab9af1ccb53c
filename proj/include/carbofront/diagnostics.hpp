#pragma once

// Checks of the provable properties of the free-boundary system evaluated on
// a computed Trajectory: comparison bounds, the integrated mass balance, the
// time-integrated energy inequality, boundedness of the v-dissipation
// relative to the front position, and the sqrt(t) law for s(t).

#include <cstddef>
#include <string>
#include <vector>

#include "carbofront/model.hpp"
#include "carbofront/solver.hpp"

namespace carbofront {

struct BoundsResult {
  bool pass = true;
  /// Smallest margin to the box [0, star]; negative when violated.
  double worst = 0.0;
  std::string field;  ///< "u" or "v" at the worst margin
  std::size_t node = 0;
  double time = 0.0;
  double u_min = 0.0, u_max = 0.0, v_min = 0.0, v_max = 0.0;
};

/// Passes iff every snapshot keeps u in [-tol, u_star + tol] and v in
/// [-tol, v_star + tol].
BoundsResult bounds_check(const Trajectory& traj, double u_star, double v_star,
                          double tol);

/// |LHS - RHS| / max(RHS, 1) of the integrated moment balance
///   int_0^s x (u + v) dx + k1 int u(s) + k2 int v(s) + s^2/2
///     = int_0^s0 x (u0 + v0) dx + k1 int g + k2 int h + s0^2/2
/// at snapshot time t. Throws LookupError if t is not a snapshot time.
double mass_balance_residual(const ValidatedScenario& scenario,
                             const Trajectory& traj, double t);

struct EnergyBalance {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  ///< rhs - lhs; >= -tol means the inequality holds
};

/// Time-integrated energy inequality on [0, t] (t a snapshot time).
EnergyBalance energy_inequality_check(const ValidatedScenario& scenario,
                                      const Trajectory& traj, double t);

/// D(t) / (s(t) + 1) with D(t) = int_0^t int_0^s |v_x|^2.
double dissipation_bound_check(const Trajectory& traj, double t);

struct PowerLawFit {
  double amplitude = 0.0;
  double exponent = 0.0;
  double t_min = 0.0;
  double t_max = 0.0;
  std::size_t points = 0;
  double rms_residual = 0.0;  ///< of log s
};

/// Least squares of log s = log a + beta log t over checkpoints in
/// [t_min, t_max]. Needs t_max > t_min >= 1 and >= 10 points.
PowerLawFit sqrt_law_fit(const Trajectory& traj, double t_min, double t_max);

struct EmpiricalConstants {
  double c_star = 0.0;  ///< min over t >= t_min of s / sqrt(t)
  double C_star = 0.0;  ///< max over all t of s / sqrt(t + 1)
};

EmpiricalConstants empirical_constants(const Trajectory& traj, double t_min);

struct CheckResult {
  bool pass = true;
  double worst = 0.0;
  double tolerance = 0.0;
};

struct DiagnosticsOptions {
  double bounds_tol = 1e-8;
  double mass_tol = 1e-2;            ///< on the worst relative residual
  double energy_rel_tol = 1e-4;      ///< slack >= -tol * |RHS|
  double energy_abs_floor = 1e-10;   ///< absolute allowance near t = 0
  double fit_decades = 1.0;          ///< fit window [t_end / 10^k, t_end]
  double constants_t_min = 1.0;
};

struct DiagnosticsReport {
  BoundsResult bounds;
  CheckResult bounds_check;
  CheckResult mass;
  CheckResult energy;
  CheckResult dissipation;
  std::vector<double> times;
  std::vector<double> mass_residual;
  std::vector<double> energy_slack;
  std::vector<double> dissipation_ratio;
  bool fit_available = false;
  PowerLawFit fit;
  bool constants_available = false;
  EmpiricalConstants constants;

  bool all_pass() const {
    return bounds_check.pass && mass.pass && energy.pass && dissipation.pass;
  }
};

DiagnosticsReport diagnose(const ValidatedScenario& scenario,
                           const Trajectory& traj,
                           const DiagnosticsOptions& options = {});

/// Snapshot index whose time matches t to rounding. Throws LookupError.
std::size_t snapshot_index(const Trajectory& traj, double t);

}  // namespace carbofront
