#pragma once

// Time stepping of the front-fixed system
//
//   u_t - (kappa1/s^2) u_yy - (s'/s) y u_y =  f(u, v)     on (0, 1)
//   v_t - (kappa2/s^2) v_yy - (s'/s) y v_y = -f(u, v)
//   u(t,0) = g(t),  v(t,0) = h(t)
//   -(kappa1/s) u_y(t,1) = s' u(t,1) + psi(u(t,1))
//   -(kappa2/s) v_y(t,1) = s' v(t,1)
//   s' = psi(u(t,1))
//
// with a theta-weighted finite-difference scheme on a uniform grid, a
// ghost-node flux row at y = 1, and a Picard loop coupling the fields to the
// front position.

#include <cstddef>
#include <string>
#include <vector>

#include "carbofront/error.hpp"
#include "carbofront/model.hpp"
#include "carbofront/transform.hpp"

namespace carbofront {

struct State {
  double t = 0.0;
  double s = 1.0;     ///< front position
  double sdot = 0.0;  ///< psi(u_bar at y = 1)
  std::vector<double> u_bar;
  std::vector<double> v_bar;
};

struct StepControl {
  double dt = 0.01;
  double picard_tol = 1e-10;
  int picard_max = 50;
  bool upwind = true;  ///< false: centered advection
  double theta = 1.0;  ///< implicitness weight in [0.5, 1]
  int retry_cap = 8;   ///< dt halvings allowed per step

  /// Throws InvalidParameter.
  void validate() const;
};

/// Time integrals accumulated online with the integrator's theta weight
/// (see TrajectoryRecorder). Spatial integrals
/// are over the physical interval [0, s(t)].
struct RunningIntegrals {
  double u_front = 0.0;  ///< int u(tau, s(tau))
  double v_front = 0.0;  ///< int v(tau, s(tau))
  double g = 0.0;        ///< int g
  double h = 0.0;        ///< int h
  double grad_u = 0.0;   ///< int int |u_x|^2
  double grad_v = 0.0;   ///< int int |v_x|^2
  double reaction = 0.0; ///< int int |gamma v - u|^(q+1)
  double psi_work = 0.0;      ///< int psi(u(s)) (u(s) - g)
  double front_jump = 0.0;    ///< int s'/2 (|u(s) - g|^2 + gamma |v(s) - h|^2)
  double forcing_g = 0.0;     ///< int g' int (u - g)
  double forcing_h = 0.0;     ///< int h' int (v - h)
  double coupling_g = 0.0;    ///< int int f (g - g_star)
  double coupling_h = 0.0;    ///< int int f (h - h_star)
  double front_work_g = 0.0;  ///< int s' g (u(s) - g)
  double front_work_h = 0.0;  ///< int s' h (v(s) - h)
};

struct Checkpoint {
  double t = 0.0;
  double s = 0.0;
  double sdot = 0.0;
  RunningIntegrals integrals;
};

/// checkpoints[k] and snapshots[k] refer to the same time.
struct Trajectory {
  std::vector<Checkpoint> checkpoints;
  std::vector<State> snapshots;
  bool complete = true;
  std::string failure;
  std::size_t steps = 0;
  std::size_t retries = 0;
};

/// Thrown by run() when a step produces non-finite values; carries the
/// trajectory up to the last accepted step.
class RunAborted : public NumericalBlowup {
 public:
  RunAborted(const std::string& what, Trajectory partial)
      : NumericalBlowup(what), partial_(std::move(partial)) {}
  const Trajectory& partial() const noexcept { return partial_; }

 private:
  Trajectory partial_;
};

State initialize(const ValidatedScenario& scenario, const FixedGrid& grid,
                 const StepControl& control);

/// One step of size control.dt. Throws StepFailure when Picard stalls and
/// NumericalBlowup on non-finite values.
State advance(const State& state, const ValidatedScenario& scenario,
              const StepControl& control);

double front_speed(const State& state, const ValidatedScenario& scenario);

/// Advances to `horizon`, recording a checkpoint and snapshot every
/// `checkpoint_every` (and at the horizon). Failed steps are retried with
/// halved dt; when the retry cap is exceeded the partial trajectory is
/// returned with complete = false.
Trajectory run(const ValidatedScenario& scenario, const FixedGrid& grid,
               const StepControl& control, double horizon,
               double checkpoint_every);

/// Builds a Trajectory from a sequence of accepted states, accumulating the
/// running integrals. Shared by every time integrator. Each step adds
/// dt (theta r_new + (1 - theta) r_old), matching the integrator's own time
/// weighting; theta = 1 keeps incompatible initial data (u0(0) != g(0))
/// from charging a grid-sized gradient to the first step.
class TrajectoryRecorder {
 public:
  TrajectoryRecorder(const ValidatedScenario& scenario, const State& initial,
                     double theta = 0.5);

  void push(const State& next);
  void checkpoint();
  const State& current() const noexcept { return current_; }
  Trajectory& trajectory() noexcept { return traj_; }
  Trajectory take() { return std::move(traj_); }

 private:
  const ValidatedScenario* scenario_;
  double theta_;
  State current_;
  RunningIntegrals rates_;
  RunningIntegrals totals_;
  Trajectory traj_;
};

/// Instantaneous integrands of every running integral at one state.
RunningIntegrals integrand_rates(const ValidatedScenario& scenario,
                                 const State& state);

}  // namespace carbofront
