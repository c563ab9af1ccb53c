#include <doctest.h>

#include <cmath>
#include <vector>

#include "carbofront/oracle.hpp"
#include "carbofront/presets.hpp"
#include "carbofront/solver.hpp"

using namespace carbofront;
using doctest::Approx;

namespace {

StepControl control(double dt) {
  StepControl c;
  c.dt = dt;
  return c;
}

void check_trajectory_invariants(const ValidatedScenario& vs, const Trajectory& tr) {
  const auto& bd = vs.scenario().boundary;
  for (std::size_t k = 0; k < tr.checkpoints.size(); ++k) {
    const State& st = tr.snapshots[k];
    CHECK(st.t == tr.checkpoints[k].t);
    CHECK(st.s > 0.0);
    CHECK(st.sdot >= 0.0);
    CHECK(st.u_bar.front() == boundary_eval(bd, st.t).first);
    CHECK(st.v_bar.front() == boundary_eval(bd, st.t).second);
    if (k > 0) {
      CHECK(tr.checkpoints[k].t > tr.checkpoints[k - 1].t);
      CHECK(tr.checkpoints[k].s >= tr.checkpoints[k - 1].s);
    }
  }
}

}  // namespace

TEST_CASE("step control validation") {
  CHECK_NOTHROW(StepControl{}.validate());
  StepControl c;
  c.dt = 0.0;
  CHECK_THROWS_AS(c.validate(), InvalidParameter);
  c = {};
  c.picard_tol = 0.0;
  CHECK_THROWS_AS(c.validate(), InvalidParameter);
  c = {};
  c.picard_max = 0;
  CHECK_THROWS_AS(c.validate(), InvalidParameter);
  c = {};
  c.theta = 0.4;
  CHECK_THROWS_AS(c.validate(), InvalidParameter);
}

TEST_CASE("initialize") {
  const auto base = ValidatedScenario::create(baseline_scenario());
  const State st = initialize(base, FixedGrid(11), {});
  CHECK(st.t == 0.0);
  CHECK(st.s == 1.0);
  for (double u : st.u_bar) CHECK(u == 1.0);
  for (double v : st.v_bar) CHECK(v == 1.0);

  Scenario ramp = baseline_scenario();
  ramp.initial.u0 = {0.0, 1.0};  // u0(x) = x on [0, 1]
  const auto vr = ValidatedScenario::create(ramp);
  const FixedGrid grid(11);
  const State sr = initialize(vr, grid, {});
  CHECK(sr.u_bar[0] == 1.0);  // Dirichlet node pinned to g(0)
  for (std::size_t i = 1; i < grid.size(); ++i) CHECK(sr.u_bar[i] == Approx(grid.node(i)));

  Scenario fast = baseline_scenario();
  fast.params.kappa0 = 2.0;
  fast.p = 2.0;
  CHECK(initialize(ValidatedScenario::create(fast), grid, {}).sdot == Approx(2.0));
}

TEST_CASE("front_speed") {
  Scenario sc = baseline_scenario();
  State st = initialize(ValidatedScenario::create(sc), FixedGrid(5), {});
  st.u_bar.back() = 0.0;
  CHECK(front_speed(st, ValidatedScenario::create(sc)) == 0.0);
  st.u_bar.back() = 1.0;
  CHECK(front_speed(st, ValidatedScenario::create(sc)) == 1.0);
  sc.params.kappa0 = 0.5;
  sc.p = 3.0;
  st.u_bar.back() = 2.0;
  CHECK(front_speed(st, ValidatedScenario::create(sc)) == Approx(4.0));
}

TEST_CASE("advance keeps the front frozen when kappa0 = 0") {
  Scenario sc = baseline_scenario();
  sc.params.kappa0 = 0.0;
  const auto vs = ValidatedScenario::create(sc);
  State st = initialize(vs, FixedGrid(21), {});
  for (int i = 0; i < 20; ++i) {
    st = advance(st, vs, control(0.05));
    CHECK(st.s == 1.0);
    CHECK(st.sdot == 0.0);
  }
}

TEST_CASE("advance at equilibrium: no reaction, front grows by dt psi(g*)") {
  // The front flux s'(u + 1) is switched on at t = 0+, so u(s) dips by
  // O(sqrt(dt)) and the front lags dt psi(g*) by O(dt^1.5).
  const auto vs = ValidatedScenario::create(baseline_scenario());
  const State st0 = initialize(vs, FixedGrid(51), {});
  double prev_lag = 0.0;
  for (double dt : {1e-2, 1e-3, 1e-4}) {
    const State st = advance(st0, vs, control(dt));
    const double lag = (1.0 + dt) - st.s;
    CHECK(lag >= 0.0);
    CHECK(lag <= 2.0 * std::pow(dt, 1.5));
    if (prev_lag > 0.0) CHECK(prev_lag / lag > 10.0);  // faster than first order
    prev_lag = lag;
    CHECK(st.sdot == Approx(front_speed(st, vs)));
    CHECK(st.t == Approx(dt));
    // Deviations from equilibrium form a layer at y = 1 that decays inward.
    for (std::size_t i = 1; i < st.u_bar.size(); ++i) {
      CHECK(std::abs(st.u_bar[i] - 1.0) >= std::abs(st.u_bar[i - 1] - 1.0) - 1e-15);
      CHECK(std::abs(st.v_bar[i] - 1.0) >= std::abs(st.v_bar[i - 1] - 1.0) - 1e-15);
    }
    CHECK(std::abs(vs.f(st.u_bar[1], st.v_bar[1])) < 1e-5);
  }
}

TEST_CASE("run with horizon 0 returns only the initial checkpoint") {
  const auto vs = ValidatedScenario::create(baseline_scenario());
  const Trajectory tr = run(vs, FixedGrid(21), control(0.01), 0.0, 1.0);
  REQUIRE(tr.checkpoints.size() == 1);
  CHECK(tr.checkpoints[0].t == 0.0);
  CHECK(tr.complete);
  CHECK_THROWS_AS(run(vs, FixedGrid(21), control(0.01), -1.0, 1.0), InvalidParameter);
  CHECK_THROWS_AS(run(vs, FixedGrid(21), control(0.01), 1.0, 0.0), InvalidParameter);
}

TEST_CASE("checkpoints land exactly on the requested times") {
  const auto vs = ValidatedScenario::create(baseline_scenario());
  const Trajectory tr = run(vs, FixedGrid(21), control(0.03), 1.0, 0.25);
  REQUIRE(tr.checkpoints.size() == 5);
  for (std::size_t k = 0; k < 5; ++k) CHECK(tr.checkpoints[k].t == Approx(0.25 * k));
  CHECK(tr.checkpoints.back().t == 1.0);
}

TEST_CASE("every preset run: monotone front, exact Dirichlet nodes, bounds") {
  for (const auto& name : preset_names()) {
    for (bool upwind : {true, false}) {
      CAPTURE(name);
      CAPTURE(upwind);
      const auto vs = ValidatedScenario::create(preset_scenario(name));
      StepControl c = control(0.02);
      c.upwind = upwind;
      const Trajectory tr = run(vs, FixedGrid(81), c, 20.0, 0.5);
      CHECK(tr.complete);
      check_trajectory_invariants(vs, tr);
      if (!upwind) continue;  // the maximum principle is guaranteed for upwind
      const auto& b = vs.bounds();
      for (const State& st : tr.snapshots) {
        for (std::size_t i = 0; i < st.u_bar.size(); ++i) {
          CHECK(st.u_bar[i] >= -1e-8);
          CHECK(st.u_bar[i] <= b.u_star + 1e-8);
          CHECK(st.v_bar[i] >= -1e-8);
          CHECK(st.v_bar[i] <= b.v_star + 1e-8);
        }
      }
    }
  }
}

TEST_CASE("discrete maximum principle with rough initial data and gamma != 1") {
  Scenario sc = baseline_scenario();
  sc.params.gamma = 2.0;
  sc.params.kappa2 = 5.0;
  sc.boundary.g = {2.0, 1.0, 0.3};
  sc.boundary.h = {1.0, 0.0, 0.0};
  sc.initial.u0 = {0.0, 3.0, 0.0, 3.0, 0.0};
  sc.initial.v0 = {0.0, 0.0, 1.5, 0.0, 0.0};
  sc.phi = NonlinearityPhi::power_law(0.2, 1.0, 2.0);
  const auto vs = ValidatedScenario::create(sc);
  const Trajectory tr = run(vs, FixedGrid(101), control(0.01), 5.0, 0.1);
  CHECK(tr.complete);
  check_trajectory_invariants(vs, tr);
  const auto& b = vs.bounds();
  for (const State& st : tr.snapshots) {
    for (std::size_t i = 0; i < st.u_bar.size(); ++i) {
      CHECK(st.u_bar[i] >= -1e-8);
      CHECK(st.u_bar[i] <= b.u_star + 1e-8);
      CHECK(st.v_bar[i] >= -1e-8);
      CHECK(st.v_bar[i] <= b.v_star + 1e-8);
    }
  }
}

TEST_CASE("truncation above gamma v* + u* leaves the trajectory unchanged") {
  Scenario plain = preset_scenario("nonlinear");
  Scenario cut = plain;
  const auto b = comparison_bounds(plain);
  cut.truncation_m = plain.params.gamma * b.v_star + b.u_star;
  const auto vp = ValidatedScenario::create(plain);
  const auto vc = ValidatedScenario::create(cut);
  const Trajectory a = run(vp, FixedGrid(101), control(0.01), 10.0, 0.5);
  const Trajectory c = run(vc, FixedGrid(101), control(0.01), 10.0, 0.5);
  REQUIRE(a.checkpoints.size() == c.checkpoints.size());
  for (std::size_t k = 0; k < a.checkpoints.size(); ++k) {
    CHECK(std::abs(a.checkpoints[k].s - c.checkpoints[k].s) <= 1e-12);
  }
}

TEST_CASE("a tight truncation does change the trajectory") {
  Scenario sc = baseline_scenario();
  sc.initial.v0 = {0.0};  // strong initial exchange, |gamma v - u| up to 1
  Scenario cut = sc;
  cut.truncation_m = 0.05;
  const Trajectory a = run(ValidatedScenario::create(sc), FixedGrid(51), control(0.01), 2.0, 1.0);
  const Trajectory c = run(ValidatedScenario::create(cut), FixedGrid(51), control(0.01), 2.0, 1.0);
  CHECK(std::abs(a.checkpoints.back().s - c.checkpoints.back().s) > 1e-6);
}

TEST_CASE("halving dt halves the temporal error of s(1)") {
  const auto vs = ValidatedScenario::create(baseline_scenario());
  const FixedGrid grid(101);
  auto s1 = [&](double dt) { return run(vs, grid, control(dt), 1.0, 1.0).checkpoints.back().s; };
  // Reference on the same grid: Richardson extrapolation of the two finest runs.
  const double fine = s1(0.000625);
  const double finer = s1(0.0003125);
  const double ref = 2.0 * finer - fine;
  const double e1 = std::abs(s1(0.01) - ref);
  const double e2 = std::abs(s1(0.005) - ref);
  const double e3 = std::abs(s1(0.0025) - ref);
  CHECK(e1 / e2 >= 1.6);
  CHECK(e1 / e2 <= 2.4);
  CHECK(e2 / e3 >= 1.6);
  CHECK(e2 / e3 <= 2.4);
}

TEST_CASE("s / sqrt(t + 1) stabilizes between t = 100 and t = 400") {
  const auto vs = ValidatedScenario::create(baseline_scenario());
  const Trajectory tr = run(vs, FixedGrid(201), control(0.01), 400.0, 100.0);
  const double r100 = tr.checkpoints[1].s / std::sqrt(101.0);
  const double r400 = tr.checkpoints[4].s / std::sqrt(401.0);
  CHECK(std::abs(r100 / r400 - 1.0) <= 0.10);
}

TEST_CASE("exhausting the retry cap returns a partial trajectory") {
  const auto vs = ValidatedScenario::create(baseline_scenario());
  StepControl c = control(0.1);
  c.picard_max = 1;
  c.picard_tol = 1e-300;
  c.retry_cap = 2;
  const Trajectory tr = run(vs, FixedGrid(21), c, 1.0, 0.5);
  CHECK_FALSE(tr.complete);
  CHECK_FALSE(tr.failure.empty());
  CHECK(tr.checkpoints.size() == 1);
  CHECK_THROWS_AS(advance(initialize(vs, FixedGrid(21), c), vs, c), StepFailure);
}

TEST_CASE("theta = 1/2 runs and stays close to the implicit scheme") {
  const auto vs = ValidatedScenario::create(baseline_scenario());
  StepControl cn = control(0.01);
  cn.theta = 0.5;
  const double s_cn = run(vs, FixedGrid(101), cn, 1.0, 1.0).checkpoints.back().s;
  const double s_be = run(vs, FixedGrid(101), control(0.01), 1.0, 1.0).checkpoints.back().s;
  CHECK(s_cn == Approx(s_be).epsilon(1e-3));
}

TEST_CASE("recorder running integrals at t = 0 are zero") {
  const auto vs = ValidatedScenario::create(baseline_scenario());
  const Trajectory tr = run(vs, FixedGrid(21), control(0.1), 1.0, 1.0);
  const RunningIntegrals& I0 = tr.checkpoints.front().integrals;
  CHECK(I0.u_front == 0.0);
  CHECK(I0.grad_v == 0.0);
  const RunningIntegrals& I1 = tr.checkpoints.back().integrals;
  CHECK(I1.g == Approx(1.0));  // int_0^1 g = 1 for g = 1
  CHECK(I1.h == Approx(1.0));
  CHECK(I1.grad_u > 0.0);
}
