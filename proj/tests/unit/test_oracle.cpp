#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "carbofront/oracle.hpp"
#include "carbofront/presets.hpp"

using namespace carbofront;
using doctest::Approx;

namespace {

// s(1) of the baseline preset: combined refinement from 51 nodes and
// dt = 0.01 until successive levels differ by less than 1e-5 (1601 nodes,
// dt = 3.125e-4).
constexpr double kGoldenS1 = 1.445528048050449;

RefinementOptions options(std::size_t nodes, double dt, RefineMode mode, bool upwind = true) {
  RefinementOptions o;
  o.base_nodes = nodes;
  o.control.dt = dt;
  o.control.upwind = upwind;
  o.mode = mode;
  return o;
}

}  // namespace

TEST_CASE("refinement needs three levels") {
  const auto vs = ValidatedScenario::create(baseline_scenario());
  CHECK_THROWS_AS(refine_run(vs, 1.0, 2), InvalidParameter);
  CHECK_THROWS_AS(refine_run(vs, 0.0, 3), InvalidParameter);
}

TEST_CASE("frozen front: every level agrees exactly") {
  Scenario sc = baseline_scenario();
  sc.params.kappa0 = 0.0;
  const auto vs = ValidatedScenario::create(sc);
  const auto r = refine_run(vs, 1.0, 3, options(11, 0.05, RefineMode::combined));
  CHECK(r.exact);
  CHECK(r.reliable);
  for (const auto& l : r.levels) {
    CHECK(l.s_diff == 0.0);
    CHECK(l.s_final == 1.0);
    CHECK(l.field_diff <= 1e-12);  // equilibrium data: fields stay constant up to rounding
  }
  REQUIRE(r.reference);
}

TEST_CASE("baseline golden s(1) and first-order shrinking of the differences") {
  const auto vs = ValidatedScenario::create(baseline_scenario());
  const auto r = refine_run(vs, 1.0, 6, options(51, 0.01, RefineMode::combined));
  REQUIRE(r.levels.size() == 6);
  CHECK(r.levels[5].nodes == 1601);
  CHECK(r.levels[5].dt == Approx(0.0003125));
  CHECK(r.levels.back().s_diff < 1e-5);
  CHECK(std::abs(r.levels.back().s_final - kGoldenS1) <= 1e-9);
  for (std::size_t k = 2; k < r.levels.size(); ++k) {
    const double ratio = r.levels[k - 1].s_diff / r.levels[k].s_diff;
    CHECK(ratio >= 1.6);
    CHECK(ratio <= 2.4);
  }
  CHECK(r.reliable);
  CHECK_FALSE(r.exact);
  REQUIRE(r.reference);
  CHECK(r.reference->checkpoints.back().s == r.levels.back().s_final);
}

TEST_CASE("temporal order of the baseline is one") {
  const auto vs = ValidatedScenario::create(baseline_scenario());
  const auto r = refine_run(vs, 1.0, 3, options(201, 0.01, RefineMode::temporal));
  CHECK(r.estimated_order >= 0.8);
  CHECK(r.estimated_order <= 1.3);
  for (const auto& l : r.levels) CHECK(l.nodes == 201);
}

TEST_CASE("spatial order: one with upwind, two with centered advection") {
  const auto vs = ValidatedScenario::create(baseline_scenario());
  const auto up = refine_run(vs, 1.0, 4, options(21, 0.001, RefineMode::spatial, true));
  CHECK(up.estimated_order >= 0.8);
  CHECK(up.estimated_order <= 1.3);
  const auto ce = refine_run(vs, 1.0, 4, options(21, 0.001, RefineMode::spatial, false));
  CHECK(ce.estimated_order >= 1.7);
  CHECK(ce.estimated_order <= 2.3);
  for (const auto& l : ce.levels) CHECK(l.dt == 0.001);
  CHECK(ce.levels[3].nodes == 161);
}

TEST_CASE("alt scheme parameter checks") {
  const auto vs = ValidatedScenario::create(baseline_scenario());
  AltSchemeControl c;
  c.nodes = 2;
  CHECK_THROWS_AS(alt_scheme_run(vs, 1.0, c), InvalidParameter);
  c = {};
  c.cfl = 0.6;
  CHECK_THROWS_AS(alt_scheme_run(vs, 1.0, c), InvalidParameter);
  c = {};
  c.checkpoint_every = 0.0;
  CHECK_THROWS_AS(alt_scheme_run(vs, 1.0, c), InvalidParameter);
  CHECK_THROWS_AS(alt_scheme_run(vs, -1.0, {}), InvalidParameter);
}

TEST_CASE("alt scheme with a frozen front matches the main solver") {
  Scenario sc = baseline_scenario();
  sc.params.kappa0 = 0.0;
  sc.initial.u0 = {1.0, 0.0};
  sc.initial.v0 = {0.5, 1.0, 0.0};
  const auto vs = ValidatedScenario::create(sc);
  AltSchemeControl ac;
  ac.nodes = 51;
  const Trajectory alt = alt_scheme_run(vs, 1.0, ac);
  StepControl c;
  c.dt = 1e-4;
  const Trajectory main = run(vs, FixedGrid(51), c, 1.0, 1.0);
  CHECK(alt.checkpoints.back().s == 1.0);
  const State& a = alt.snapshots.back();
  const State& m = main.snapshots.back();
  for (std::size_t i = 0; i < a.u_bar.size(); ++i) {
    CHECK(a.u_bar[i] == Approx(m.u_bar[i]).epsilon(1e-3));
    CHECK(a.v_bar[i] == Approx(m.v_bar[i]).epsilon(1e-3));
  }
}

TEST_CASE("alt scheme agrees with the main solver on the baseline at t = 10") {
  const auto vs = ValidatedScenario::create(baseline_scenario());
  AltSchemeControl ac;
  ac.nodes = 101;
  ac.checkpoint_every = 5.0;
  const Trajectory alt = alt_scheme_run(vs, 10.0, ac);
  StepControl c;
  const Trajectory main = run(vs, FixedGrid(101), c, 10.0, 5.0);
  const double s_alt = alt.checkpoints.back().s;
  const double s_main = main.checkpoints.back().s;
  CHECK(std::abs(s_alt - s_main) / s_main <= 0.01);
  CHECK(alt.checkpoints.size() == 3);
  for (std::size_t k = 1; k < alt.checkpoints.size(); ++k) {
    CHECK(alt.checkpoints[k].s >= alt.checkpoints[k - 1].s);
  }
}

TEST_CASE("cross-scheme gap shrinks under simultaneous refinement") {
  const auto vs = ValidatedScenario::create(baseline_scenario());
  double prev = INFINITY;
  for (auto [n, dt] : {std::pair<std::size_t, double>{26, 0.04}, {51, 0.02}, {101, 0.01}}) {
    AltSchemeControl ac;
    ac.nodes = n;
    StepControl c;
    c.dt = dt;
    const double s_alt = alt_scheme_run(vs, 2.0, ac).checkpoints.back().s;
    const double s_main = run(vs, FixedGrid(n), c, 2.0, 1.0).checkpoints.back().s;
    const double gap = std::abs(s_alt - s_main);
    CHECK(gap < prev);
    prev = gap;
  }
}

TEST_CASE("both schemes keep equilibrium data inside the bounds") {
  const auto vs = ValidatedScenario::create(baseline_scenario());
  const Trajectory alt = alt_scheme_run(vs, 2.0, {});
  const auto& b = vs.bounds();
  for (const State& st : alt.snapshots) {
    for (std::size_t i = 0; i < st.u_bar.size(); ++i) {
      CHECK(st.u_bar[i] >= -1e-8);
      CHECK(st.u_bar[i] <= b.u_star + 1e-8);
      CHECK(st.v_bar[i] >= -1e-8);
      CHECK(st.v_bar[i] <= b.v_star + 1e-8);
    }
  }
}
