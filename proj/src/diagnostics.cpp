#include "carbofront/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace carbofront {

namespace {

template <class F>
double trapezoid(std::size_t n, F&& integrand) {
  const double dy = 1.0 / static_cast<double>(n - 1);
  double acc = 0.5 * (integrand(0) + integrand(n - 1));
  for (std::size_t i = 1; i + 1 < n; ++i) acc += integrand(i);
  return acc * dy;
}

// int_0^s x (u + v) dx = s^2 int_0^1 y (u + v) dy
double moment(const State& st) {
  const std::size_t n = st.u_bar.size();
  const double dy = 1.0 / static_cast<double>(n - 1);
  return st.s * st.s * trapezoid(n, [&](std::size_t i) {
           return static_cast<double>(i) * dy * (st.u_bar[i] + st.v_bar[i]);
         });
}

// 1/2 int |u - g|^2 + gamma/2 int |v - h|^2 over [0, s]
double energy(const ValidatedScenario& scenario, const State& st) {
  const Scenario& sc = scenario.scenario();
  const auto [g, h] = boundary_eval(sc.boundary, st.t);
  const double gamma = sc.params.gamma;
  const std::size_t n = st.u_bar.size();
  const double eu = trapezoid(n, [&](std::size_t i) {
    const double d = st.u_bar[i] - g;
    return d * d;
  });
  const double ev = trapezoid(n, [&](std::size_t i) {
    const double d = st.v_bar[i] - h;
    return d * d;
  });
  return 0.5 * st.s * (eu + gamma * ev);
}

}  // namespace

std::size_t snapshot_index(const Trajectory& traj, double t) {
  const double tol = 1e-9 * std::max(1.0, std::abs(t));
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    if (std::abs(traj.snapshots[k].t - t) <= tol) return k;
  }
  throw LookupError("no snapshot at t = " + std::to_string(t));
}

BoundsResult bounds_check(const Trajectory& traj, double u_star, double v_star,
                          double tol) {
  if (traj.snapshots.empty()) throw InsufficientData("trajectory has no snapshots");
  BoundsResult res;
  res.u_min = res.v_min = std::numeric_limits<double>::infinity();
  res.u_max = res.v_max = -std::numeric_limits<double>::infinity();
  res.worst = std::numeric_limits<double>::infinity();
  auto consider = [&](double margin, const char* field, std::size_t node, double t) {
    if (margin < res.worst) {
      res.worst = margin;
      res.field = field;
      res.node = node;
      res.time = t;
    }
  };
  for (const State& st : traj.snapshots) {
    for (std::size_t i = 0; i < st.u_bar.size(); ++i) {
      const double u = st.u_bar[i];
      const double v = st.v_bar[i];
      res.u_min = std::min(res.u_min, u);
      res.u_max = std::max(res.u_max, u);
      res.v_min = std::min(res.v_min, v);
      res.v_max = std::max(res.v_max, v);
      consider(u, "u", i, st.t);
      consider(u_star - u, "u", i, st.t);
      consider(v, "v", i, st.t);
      consider(v_star - v, "v", i, st.t);
    }
  }
  res.pass = res.u_min >= -tol && res.u_max <= u_star + tol &&
             res.v_min >= -tol && res.v_max <= v_star + tol;
  return res;
}

double mass_balance_residual(const ValidatedScenario& scenario,
                             const Trajectory& traj, double t) {
  const std::size_t k = snapshot_index(traj, t);
  const State& st = traj.snapshots[k];
  const State& st0 = traj.snapshots.front();
  const RunningIntegrals& I = traj.checkpoints[k].integrals;
  const double k1 = scenario.params().kappa1;
  const double k2 = scenario.params().kappa2;
  const double lhs = moment(st) + k1 * I.u_front + k2 * I.v_front + 0.5 * st.s * st.s;
  const double rhs = moment(st0) + k1 * I.g + k2 * I.h + 0.5 * st0.s * st0.s;
  return std::abs(lhs - rhs) / std::max(rhs, 1.0);
}

EnergyBalance energy_inequality_check(const ValidatedScenario& scenario,
                                      const Trajectory& traj, double t) {
  const std::size_t k = snapshot_index(traj, t);
  const RunningIntegrals& I = traj.checkpoints[k].integrals;
  const ModelParams& mp = scenario.params();
  const double gamma = mp.gamma;
  const double c_phi = scenario.scenario().phi.c_phi;

  EnergyBalance out;
  out.lhs = energy(scenario, traj.snapshots[k]) + mp.kappa1 * I.grad_u +
            mp.kappa2 * gamma * I.grad_v + I.psi_work + I.front_jump +
            c_phi * I.reaction;
  out.rhs = energy(scenario, traj.snapshots.front()) - I.forcing_g -
            gamma * I.forcing_h - I.coupling_g + gamma * I.coupling_h -
            I.front_work_g - gamma * I.front_work_h;
  out.slack = out.rhs - out.lhs;
  return out;
}

double dissipation_bound_check(const Trajectory& traj, double t) {
  const std::size_t k = snapshot_index(traj, t);
  const Checkpoint& cp = traj.checkpoints[k];
  return cp.integrals.grad_v / (cp.s + 1.0);
}

PowerLawFit sqrt_law_fit(const Trajectory& traj, double t_min, double t_max) {
  if (!(t_min >= 1.0) || !(t_max > t_min)) {
    throw InvalidParameter("fit window needs t_max > t_min >= 1");
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = 0;
  for (const Checkpoint& cp : traj.checkpoints) {
    if (cp.t < t_min || cp.t > t_max) continue;
    const double x = std::log(cp.t);
    const double y = std::log(cp.s);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 10) {
    throw InsufficientData("power-law fit needs >= 10 checkpoints in window, got " +
                           std::to_string(n));
  }
  const double nn = static_cast<double>(n);
  const double xm = sx / nn;
  const double ym = sy / nn;
  const double beta = (sxy - nn * xm * ym) / (sxx - nn * xm * xm);
  const double log_a = ym - beta * xm;

  PowerLawFit fit;
  fit.exponent = beta;
  fit.amplitude = std::exp(log_a);
  fit.t_min = t_min;
  fit.t_max = t_max;
  fit.points = n;
  double ss = 0.0;
  for (const Checkpoint& cp : traj.checkpoints) {
    if (cp.t < t_min || cp.t > t_max) continue;
    const double r = std::log(cp.s) - (log_a + beta * std::log(cp.t));
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / nn);
  return fit;
}

EmpiricalConstants empirical_constants(const Trajectory& traj, double t_min) {
  EmpiricalConstants out;
  out.c_star = std::numeric_limits<double>::infinity();
  bool any = false;
  for (const Checkpoint& cp : traj.checkpoints) {
    out.C_star = std::max(out.C_star, cp.s / std::sqrt(cp.t + 1.0));
    if (cp.t >= t_min && cp.t > 0.0) {
      out.c_star = std::min(out.c_star, cp.s / std::sqrt(cp.t));
      any = true;
    }
  }
  if (!any) {
    throw InsufficientData("no checkpoint at or beyond t_min = " + std::to_string(t_min));
  }
  return out;
}

DiagnosticsReport diagnose(const ValidatedScenario& scenario,
                           const Trajectory& traj,
                           const DiagnosticsOptions& opt) {
  DiagnosticsReport rep;
  const ComparisonBounds& star = scenario.bounds();
  rep.bounds = bounds_check(traj, star.u_star, star.v_star, opt.bounds_tol);
  rep.bounds_check = {rep.bounds.pass, rep.bounds.worst, opt.bounds_tol};

  rep.mass = {true, 0.0, opt.mass_tol};
  rep.energy = {true, std::numeric_limits<double>::infinity(), opt.energy_rel_tol};
  rep.dissipation = {true, 0.0, 0.0};
  for (const Checkpoint& cp : traj.checkpoints) {
    const double t = cp.t;
    rep.times.push_back(t);

    const double mr = mass_balance_residual(scenario, traj, t);
    rep.mass_residual.push_back(mr);
    rep.mass.worst = std::max(rep.mass.worst, mr);

    const EnergyBalance eb = energy_inequality_check(scenario, traj, t);
    rep.energy_slack.push_back(eb.slack);
    const double scale = std::abs(eb.rhs);
    if (eb.slack < -(opt.energy_rel_tol * scale + opt.energy_abs_floor)) {
      rep.energy.pass = false;
    }
    const double normalized = scale > 0.0 ? eb.slack / scale : eb.slack;
    rep.energy.worst = std::min(rep.energy.worst, normalized);

    const double dr = dissipation_bound_check(traj, t);
    rep.dissipation_ratio.push_back(dr);
    rep.dissipation.worst = std::max(rep.dissipation.worst, dr);
    if (!std::isfinite(dr) || dr < 0.0) rep.dissipation.pass = false;
  }
  rep.mass.pass = rep.mass.worst <= opt.mass_tol;
  if (!std::isfinite(rep.energy.worst)) rep.energy.worst = 0.0;

  if (!traj.checkpoints.empty()) {
    const double t_end = traj.checkpoints.back().t;
    const double t_lo = std::max(1.0, t_end / std::pow(10.0, opt.fit_decades));
    if (t_end > t_lo) {
      try {
        rep.fit = sqrt_law_fit(traj, t_lo, t_end);
        rep.fit_available = std::isfinite(rep.fit.exponent) &&
                            std::isfinite(rep.fit.amplitude);
      } catch (const InsufficientData&) {
        rep.fit_available = false;
      }
    }
    if (t_end > opt.constants_t_min) {
      rep.constants = empirical_constants(traj, opt.constants_t_min);
      rep.constants_available = true;
    }
  }
  return rep;
}

}  // namespace carbofront
