#include "carbofront/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "carbofront/tridiagonal.hpp"

namespace carbofront {

void StepControl::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw InvalidParameter("dt must be positive");
  }
  if (!(picard_tol > 0.0)) throw InvalidParameter("picard_tol must be positive");
  if (picard_max < 1) throw InvalidParameter("picard_max must be >= 1");
  if (!(theta >= 0.5 && theta <= 1.0)) {
    throw InvalidParameter("theta must lie in [0.5, 1]");
  }
  if (retry_cap < 0) throw InvalidParameter("retry_cap must be >= 0");
}

namespace {

double sup_norm(const std::vector<double>& x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

bool all_finite(const std::vector<double>& x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

// Per-species data for assembling one linear system.
struct Species {
  double kappa;
  const std::vector<double>* old_field;
  double boundary_value;  // Dirichlet value at y = 0, new time level
};

class Stepper {
 public:
  Stepper(const ValidatedScenario& scenario, const StepControl& control)
      : sc_(scenario), ctl_(control) {}

  State step(const State& st, double dt) {
    const std::size_t n = st.u_bar.size();
    resize(n);
    const double gamma = sc_.params().gamma;
    const double theta = ctl_.theta;
    const double t1 = st.t + dt;
    const auto [g1, h1] = boundary_eval(sc_.scenario().boundary, t1);

    const double psi_old = sc_.psi(st.u_bar[n - 1]);
    for (std::size_t i = 0; i < n; ++i) {
      f_old_[i] = sc_.f(st.u_bar[i], st.v_bar[i]);
    }

    double s_new = st.s + dt * psi_old;
    u_it_ = st.u_bar;
    v_it_ = st.v_bar;
    double change = std::numeric_limits<double>::infinity();

    for (int it = 0; it < ctl_.picard_max; ++it) {
      const double sp = (s_new - st.s) / dt;
      for (std::size_t i = 0; i < n; ++i) {
        slope_[i] = sc_.exchange_slope(u_it_[i], v_it_[i]);
      }
      const double psi_slope = sc_.psi_slope(u_it_[n - 1]);

      // u: reaction +c (gamma v_it - u), boundary flux s' u + psi(u).
      assemble({sc_.params().kappa1, &st.u_bar, g1}, st.s, s_new, sp, dt,
               /*psi_slope=*/psi_slope, /*psi_old=*/psi_old);
      for (std::size_t i = 1; i < n; ++i) {
        diag_[i] += theta * dt * slope_[i];
        rhs_[i] += theta * dt * slope_[i] * gamma * v_it_[i] +
                   (1.0 - theta) * dt * f_old_[i];
      }
      solve_tridiagonal(lower_, diag_, upper_, rhs_, scratch_);
      u_new_.assign(rhs_.begin(), rhs_.end());
      u_new_[0] = g1;

      // v: reaction -c (gamma v - u_new), boundary flux s' v.
      assemble({sc_.params().kappa2, &st.v_bar, h1}, st.s, s_new, sp, dt, 0.0,
               0.0);
      for (std::size_t i = 1; i < n; ++i) {
        diag_[i] += theta * dt * slope_[i] * gamma;
        rhs_[i] += theta * dt * slope_[i] * u_new_[i] -
                   (1.0 - theta) * dt * f_old_[i];
      }
      solve_tridiagonal(lower_, diag_, upper_, rhs_, scratch_);
      v_new_.assign(rhs_.begin(), rhs_.end());
      v_new_[0] = h1;

      const double s_next =
          st.s + dt * (theta * sc_.psi(u_new_[n - 1]) + (1.0 - theta) * psi_old);
      if (!all_finite(u_new_) || !all_finite(v_new_) || !std::isfinite(s_next)) {
        throw NumericalBlowup("non-finite value at t = " + std::to_string(t1));
      }
      constexpr double tiny = std::numeric_limits<double>::min();
      change = std::max({std::abs(s_next - s_new) / s_next,
                         sup_diff(u_new_, u_it_) / std::max(sup_norm(u_new_), tiny),
                         sup_diff(v_new_, v_it_) / std::max(sup_norm(v_new_), tiny)});
      s_new = s_next;
      u_it_.swap(u_new_);
      v_it_.swap(v_new_);
      if (change < ctl_.picard_tol) {
        State out;
        out.t = t1;
        out.s = s_new;
        out.u_bar = u_it_;
        out.v_bar = v_it_;
        out.sdot = sc_.psi(out.u_bar[n - 1]);
        return out;
      }
    }
    throw StepFailure("Picard iteration did not converge at t = " +
                          std::to_string(t1),
                      change);
  }

 private:
  void resize(std::size_t n) {
    lower_.resize(n);
    diag_.resize(n);
    upper_.resize(n);
    rhs_.resize(n);
    scratch_.resize(n);
    f_old_.resize(n);
    slope_.resize(n);
  }

  // Builds the transport part (diffusion, advection, flux row) of
  //   (w_new - w_old)/dt = theta L_{s_new}[w_new] + (1 - theta) L_{s_old}[w_old]
  // multiplied through by dt. The psi term of the flux row is linearized as
  // psi_slope * w_new in the implicit part.
  void assemble(const Species& sp_data, double s_old, double s_new, double sp,
                double dt, double psi_slope, double psi_old) {
    const std::vector<double>& w = *sp_data.old_field;
    const std::size_t n = w.size();
    const double dy = 1.0 / static_cast<double>(n - 1);
    const double theta = ctl_.theta;
    const double kappa = sp_data.kappa;

    const double d_new = theta * dt * kappa / (s_new * s_new * dy * dy);
    const double a_new = theta * dt * sp / (s_new * dy);
    const double d_old = (1.0 - theta) * dt * kappa / (s_old * s_old * dy * dy);
    const double a_old = (1.0 - theta) * dt * sp / (s_old * dy);

    lower_[0] = 0.0;
    diag_[0] = 1.0;
    upper_[0] = 0.0;
    rhs_[0] = sp_data.boundary_value;

    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double y = static_cast<double>(i) * dy;
      const double e_new = a_new * y;
      const double e_old = a_old * y;
      double explicit_part = d_old * (w[i + 1] - 2.0 * w[i] + w[i - 1]);
      if (ctl_.upwind) {
        lower_[i] = -d_new;
        diag_[i] = 1.0 + 2.0 * d_new + e_new;
        upper_[i] = -(d_new + e_new);
        explicit_part += e_old * (w[i + 1] - w[i]);
      } else {
        lower_[i] = -(d_new - 0.5 * e_new);
        diag_[i] = 1.0 + 2.0 * d_new;
        upper_[i] = -(d_new + 0.5 * e_new);
        explicit_part += 0.5 * e_old * (w[i + 1] - w[i - 1]);
      }
      rhs_[i] = w[i] + explicit_part;
    }

    // Ghost node w_n = w_{n-2} + 2 dy w_y(1), with w_y(1) = -(s/kappa) B and
    // B = s' w + psi(w); the advection term at y = 1 uses w_y(1) directly.
    const std::size_t last = n - 1;
    const double flux_new =
        theta * dt * (2.0 / (s_new * dy) + sp / kappa);
    const double flux_old =
        (1.0 - theta) * dt * (2.0 / (s_old * dy) + sp / kappa);
    lower_[last] = -2.0 * d_new;
    diag_[last] = 1.0 + 2.0 * d_new + flux_new * (sp + psi_slope);
    upper_[last] = 0.0;
    const double b_old = sp * w[last] + psi_old;
    rhs_[last] = w[last] + 2.0 * d_old * (w[last - 1] - w[last]) - flux_old * b_old;
  }

  const ValidatedScenario& sc_;
  const StepControl& ctl_;
  std::vector<double> lower_, diag_, upper_, rhs_, scratch_;
  std::vector<double> f_old_, slope_;
  std::vector<double> u_it_, v_it_, u_new_, v_new_;
};

// Trapezoid weights on the uniform unit grid.
template <class F>
double trapezoid(std::size_t n, F&& integrand) {
  const double dy = 1.0 / static_cast<double>(n - 1);
  double acc = 0.5 * (integrand(0) + integrand(n - 1));
  for (std::size_t i = 1; i + 1 < n; ++i) acc += integrand(i);
  return acc * dy;
}

}  // namespace

State initialize(const ValidatedScenario& scenario, const FixedGrid& grid,
                 const StepControl& control) {
  control.validate();
  const Scenario& sc = scenario.scenario();
  State st;
  st.t = 0.0;
  st.s = sc.initial.s0;
  st.u_bar = to_fixed(sc.initial.u0_profile(), st.s, grid);
  st.v_bar = to_fixed(sc.initial.v0_profile(), st.s, grid);
  const auto [g0, h0] = boundary_eval(sc.boundary, 0.0);
  st.u_bar.front() = g0;
  st.v_bar.front() = h0;
  st.sdot = front_speed(st, scenario);
  return st;
}

State advance(const State& state, const ValidatedScenario& scenario,
              const StepControl& control) {
  control.validate();
  if (state.u_bar.size() < 3 || state.u_bar.size() != state.v_bar.size()) {
    throw InvalidState("state fields must share a grid of >= 3 nodes");
  }
  if (!(state.s > 0.0)) throw InvalidState("front position must be positive");
  return Stepper(scenario, control).step(state, control.dt);
}

double front_speed(const State& state, const ValidatedScenario& scenario) {
  return scenario.psi(state.u_bar.back());
}

RunningIntegrals integrand_rates(const ValidatedScenario& scenario,
                                 const State& st) {
  const Scenario& sc = scenario.scenario();
  const double gamma = sc.params.gamma;
  const double q = sc.phi.q;
  const std::size_t n = st.u_bar.size();
  const double dy = 1.0 / static_cast<double>(n - 1);
  const double s = st.s;
  const auto& u = st.u_bar;
  const auto& v = st.v_bar;
  const auto [g, h] = boundary_eval(sc.boundary, st.t);
  const double dg = sc.boundary.g.derivative(st.t);
  const double dh = sc.boundary.h.derivative(st.t);
  const double us = u[n - 1];
  const double vs = v[n - 1];

  RunningIntegrals r;
  r.u_front = us;
  r.v_front = vs;
  r.g = g;
  r.h = h;

  double gu = 0.0;
  double gv = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    gu += (u[i + 1] - u[i]) * (u[i + 1] - u[i]);
    gv += (v[i + 1] - v[i]) * (v[i + 1] - v[i]);
  }
  // int_0^s |u_x|^2 dx = (1/s) int_0^1 |u_y|^2 dy
  r.grad_u = gu / (dy * s);
  r.grad_v = gv / (dy * s);

  r.reaction = s * trapezoid(n, [&](std::size_t i) {
    return std::pow(std::abs(gamma * v[i] - u[i]), q + 1.0);
  });
  const double f_mean =
      s * trapezoid(n, [&](std::size_t i) { return scenario.f(u[i], v[i]); });
  r.coupling_g = (g - sc.boundary.g_star()) * f_mean;
  r.coupling_h = (h - sc.boundary.h_star()) * f_mean;
  r.forcing_g = dg == 0.0 ? 0.0
                          : dg * s * trapezoid(n, [&](std::size_t i) { return u[i] - g; });
  r.forcing_h = dh == 0.0 ? 0.0
                          : dh * s * trapezoid(n, [&](std::size_t i) { return v[i] - h; });

  r.psi_work = scenario.psi(us) * (us - g);
  r.front_jump =
      0.5 * st.sdot * ((us - g) * (us - g) + gamma * (vs - h) * (vs - h));
  r.front_work_g = st.sdot * g * (us - g);
  r.front_work_h = st.sdot * h * (vs - h);
  return r;
}

TrajectoryRecorder::TrajectoryRecorder(const ValidatedScenario& scenario,
                                       const State& initial, double theta)
    : scenario_(&scenario),
      theta_(theta),
      current_(initial),
      rates_(integrand_rates(scenario, initial)) {}

void TrajectoryRecorder::push(const State& next) {
  const RunningIntegrals r = integrand_rates(*scenario_, next);
  const double dt = next.t - current_.t;
  const double wa = (1.0 - theta_) * dt;
  const double wb = theta_ * dt;
  auto acc = [wa, wb](double& total, double a, double b) { total += wa * a + wb * b; };
  RunningIntegrals& T = totals_;
  const RunningIntegrals& a = rates_;
  acc(T.u_front, a.u_front, r.u_front);
  acc(T.v_front, a.v_front, r.v_front);
  acc(T.g, a.g, r.g);
  acc(T.h, a.h, r.h);
  acc(T.grad_u, a.grad_u, r.grad_u);
  acc(T.grad_v, a.grad_v, r.grad_v);
  acc(T.reaction, a.reaction, r.reaction);
  acc(T.psi_work, a.psi_work, r.psi_work);
  acc(T.front_jump, a.front_jump, r.front_jump);
  acc(T.forcing_g, a.forcing_g, r.forcing_g);
  acc(T.forcing_h, a.forcing_h, r.forcing_h);
  acc(T.coupling_g, a.coupling_g, r.coupling_g);
  acc(T.coupling_h, a.coupling_h, r.coupling_h);
  acc(T.front_work_g, a.front_work_g, r.front_work_g);
  acc(T.front_work_h, a.front_work_h, r.front_work_h);
  rates_ = r;
  current_ = next;
  ++traj_.steps;
}

void TrajectoryRecorder::checkpoint() {
  traj_.checkpoints.push_back(
      {current_.t, current_.s, current_.sdot, totals_});
  traj_.snapshots.push_back(current_);
}

Trajectory run(const ValidatedScenario& scenario, const FixedGrid& grid,
               const StepControl& control, double horizon,
               double checkpoint_every) {
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) {
    throw InvalidParameter("horizon must be nonnegative");
  }
  if (!(checkpoint_every > 0.0)) {
    throw InvalidParameter("checkpoint interval must be positive");
  }
  TrajectoryRecorder rec(scenario, initialize(scenario, grid, control), control.theta);
  rec.checkpoint();

  Stepper stepper(scenario, control);
  long k = 1;
  while (rec.current().t < horizon) {
    const double target = std::min(static_cast<double>(k) * checkpoint_every, horizon);
    const State& cur = rec.current();
    double dt = std::min(control.dt, target - cur.t);
    const bool lands = dt == target - cur.t;
    State next;
    int attempt = 0;
    for (;; ++attempt) {
      try {
        next = stepper.step(cur, dt);
        break;
      } catch (const StepFailure& e) {
        if (attempt >= control.retry_cap) {
          Trajectory partial = rec.take();
          partial.complete = false;
          partial.failure = std::string(e.what()) + " (residual " +
                            std::to_string(e.residual()) + ")";
          return partial;
        }
        dt *= 0.5;
        ++rec.trajectory().retries;
      } catch (const NumericalBlowup& e) {
        Trajectory partial = rec.take();
        partial.complete = false;
        partial.failure = e.what();
        throw RunAborted(e.what(), std::move(partial));
      }
    }
    // Snap onto the checkpoint time; the Dirichlet nodes follow the clock.
    if ((attempt == 0 && lands) || target - next.t < 1e-9 * control.dt) {
      next.t = target;
      const auto [g, h] = boundary_eval(scenario.scenario().boundary, target);
      next.u_bar.front() = g;
      next.v_bar.front() = h;
    }
    rec.push(next);
    if (next.t >= target) {
      rec.checkpoint();
      ++k;
    }
  }
  return rec.take();
}

}  // namespace carbofront
