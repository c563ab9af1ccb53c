#include "carbofront/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace carbofront {

RefinementResult refine_run(const ValidatedScenario& scenario, double horizon,
                            int levels, const RefinementOptions& options) {
  if (levels < 3) throw InvalidParameter("refinement needs at least 3 levels");
  if (!(horizon > 0.0)) throw InvalidParameter("horizon must be positive");
  if (options.base_nodes < 3) throw InvalidParameter("base grid needs >= 3 nodes");
  const double every =
      options.checkpoint_every > 0.0 ? options.checkpoint_every : horizon;

  RefinementResult out;
  std::optional<Trajectory> prev;
  std::size_t prev_nodes = 0;
  for (int k = 0; k < levels; ++k) {
    const bool refine_space = options.mode != RefineMode::temporal;
    const bool refine_time = options.mode != RefineMode::spatial;
    const std::size_t nodes =
        refine_space ? (options.base_nodes - 1) * (std::size_t{1} << k) + 1
                     : options.base_nodes;
    StepControl ctl = options.control;
    if (refine_time) ctl.dt = options.control.dt / std::ldexp(1.0, k);

    Trajectory traj = run(scenario, FixedGrid(nodes), ctl, horizon, every);
    if (!traj.complete) {
      throw StepFailure("refinement level " + std::to_string(k) +
                            " failed: " + traj.failure,
                        0.0);
    }
    RefinementLevel lvl;
    lvl.nodes = nodes;
    lvl.dt = ctl.dt;
    lvl.s_final = traj.checkpoints.back().s;
    if (prev) {
      const State& a = prev->snapshots.back();
      const State& b = traj.snapshots.back();
      const std::size_t stride = (nodes - 1) / (prev_nodes - 1);
      lvl.s_diff = std::abs(lvl.s_final - prev->checkpoints.back().s);
      for (std::size_t i = 0; i < prev_nodes; ++i) {
        lvl.field_diff = std::max({lvl.field_diff,
                                   std::abs(a.u_bar[i] - b.u_bar[i * stride]),
                                   std::abs(a.v_bar[i] - b.v_bar[i * stride])});
      }
      if (out.levels.size() >= 2 && lvl.s_diff > 0.0) {
        lvl.order = std::log2(out.levels.back().s_diff / lvl.s_diff);
      }
    }
    out.levels.push_back(lvl);
    prev = std::move(traj);
    prev_nodes = nodes;
  }

  const double scale = std::max(1.0, std::abs(out.levels.back().s_final));
  out.exact = std::all_of(out.levels.begin() + 1, out.levels.end(),
                          [&](const RefinementLevel& l) {
                            return l.s_diff <= 1e-13 * scale;
                          });
  out.estimated_order = out.exact ? 0.0 : out.levels.back().order;
  out.reliable = out.exact || out.estimated_order >= 0.5;
  if (out.reliable) out.reference = std::move(prev);
  return out;
}

namespace {

// Linear interpolation on the old physical grid, continued past the old
// front with the flux slope `edge_slope`.
void remap(std::vector<double>& field, double s_old, double s_new,
           double edge_slope, std::vector<double>& scratch) {
  const std::size_t n = field.size();
  scratch.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = s_new * static_cast<double>(i) / static_cast<double>(n - 1);
    if (x <= s_old) {
      scratch[i] = interpolate_unit(field, x / s_old);
    } else {
      scratch[i] = field[n - 1] + edge_slope * (x - s_old);
    }
  }
  field.swap(scratch);
}

}  // namespace

Trajectory alt_scheme_run(const ValidatedScenario& scenario, double horizon,
                          const AltSchemeControl& control) {
  if (!(horizon >= 0.0)) throw InvalidParameter("horizon must be nonnegative");
  if (control.nodes < 3) throw InvalidParameter("alt scheme needs >= 3 nodes");
  if (!(control.cfl > 0.0 && control.cfl <= 0.5)) {
    throw InvalidParameter("cfl must lie in (0, 0.5]");
  }
  if (!(control.checkpoint_every > 0.0) || !(control.dt_max > 0.0)) {
    throw InvalidParameter("checkpoint interval and dt_max must be positive");
  }
  const Scenario& sc = scenario.scenario();
  const double k1 = sc.params.kappa1;
  const double k2 = sc.params.kappa2;
  const double gamma = sc.params.gamma;
  const std::size_t n = control.nodes;

  StepControl init_ctl;
  TrajectoryRecorder rec(scenario, initialize(scenario, FixedGrid(n), init_ctl));
  rec.checkpoint();

  State st = rec.current();
  std::vector<double> un(n), vn(n), scratch;
  std::vector<double> f(n);
  long k = 1;
  while (st.t < horizon) {
    const double target =
        std::min(static_cast<double>(k) * control.checkpoint_every, horizon);
    const double dx = st.s / static_cast<double>(n - 1);

    double c_max = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      f[i] = scenario.f(st.u_bar[i], st.v_bar[i]);
      c_max = std::max(c_max, scenario.exchange_slope(st.u_bar[i], st.v_bar[i]));
    }
    double dt = std::min(control.dt_max, control.cfl * dx * dx / std::max(k1, k2));
    if (c_max > 0.0) dt = std::min(dt, 0.5 / (c_max * (1.0 + gamma)));
    bool lands = false;
    if (st.t + dt >= target) {
      dt = target - st.t;
      lands = true;
    }

    const auto& u = st.u_bar;
    const auto& v = st.v_bar;
    const double us = u[n - 1];
    const double sp = scenario.psi(us);
    const double lu = k1 / (dx * dx);
    const double lv = k2 / (dx * dx);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      un[i] = u[i] + dt * (lu * (u[i + 1] - 2.0 * u[i] + u[i - 1]) + f[i]);
      vn[i] = v[i] + dt * (lv * (v[i + 1] - 2.0 * v[i] + v[i - 1]) - f[i]);
    }
    // Ghost nodes from -kappa1 u_x = s' u + psi(u), -kappa2 v_x = s' v.
    const double u_ghost = u[n - 2] - 2.0 * dx * (sp * us + sp) / k1;
    const double v_ghost = v[n - 2] - 2.0 * dx * sp * v[n - 1] / k2;
    un[n - 1] = us + dt * (lu * (u_ghost - 2.0 * us + u[n - 2]) + f[n - 1]);
    vn[n - 1] =
        v[n - 1] + dt * (lv * (v_ghost - 2.0 * v[n - 1] + v[n - 2]) - f[n - 1]);
    const double t1 = lands ? target : st.t + dt;
    const auto [g1, h1] = boundary_eval(sc.boundary, t1);
    un[0] = g1;
    vn[0] = h1;

    const double s_new = st.s + dt * sp;
    if (!std::isfinite(s_new) ||
        !std::all_of(un.begin(), un.end(), [](double x) { return std::isfinite(x); }) ||
        !std::all_of(vn.begin(), vn.end(), [](double x) { return std::isfinite(x); })) {
      throw NumericalBlowup("alt scheme: non-finite value at t = " + std::to_string(t1));
    }
    if (s_new > st.s) {
      const double psi_new = scenario.psi(un[n - 1]);
      remap(un, st.s, s_new, -(psi_new * un[n - 1] + psi_new) / k1, scratch);
      remap(vn, st.s, s_new, -(psi_new * vn[n - 1]) / k2, scratch);
    }

    State next;
    next.t = t1;
    next.s = s_new;
    next.u_bar = un;
    next.v_bar = vn;
    next.sdot = scenario.psi(next.u_bar[n - 1]);
    rec.push(next);
    st = std::move(next);
    if (lands) {
      rec.checkpoint();
      ++k;
    }
  }
  return rec.take();
}

}  // namespace carbofront
