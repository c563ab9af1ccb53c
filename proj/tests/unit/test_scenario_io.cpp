#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "carbofront/presets.hpp"
#include "carbofront/scenario_io.hpp"

using namespace carbofront;

namespace {

bool same(const Scenario& a, const Scenario& b) {
  return a.params.kappa0 == b.params.kappa0 && a.params.kappa1 == b.params.kappa1 &&
         a.params.kappa2 == b.params.kappa2 && a.params.gamma == b.params.gamma &&
         a.p == b.p && a.phi.family == b.phi.family &&
         (a.phi.family == PhiFamily::tabulated ||
          (a.phi.a == b.phi.a && a.phi.b == b.phi.b)) &&
         a.phi.q == b.phi.q && a.phi.c_phi == b.phi.c_phi &&
         a.phi.table_r == b.phi.table_r && a.phi.table_phi == b.phi.table_phi &&
         a.boundary.g.cinf == b.boundary.g.cinf && a.boundary.g.amp == b.boundary.g.amp &&
         a.boundary.g.lambda == b.boundary.g.lambda &&
         a.boundary.h.cinf == b.boundary.h.cinf && a.boundary.h.amp == b.boundary.h.amp &&
         a.boundary.h.lambda == b.boundary.h.lambda && a.initial.s0 == b.initial.s0 &&
         a.initial.u0 == b.initial.u0 && a.initial.v0 == b.initial.v0 &&
         a.truncation_m == b.truncation_m;
}

}  // namespace

TEST_CASE("parse reads every documented key") {
  const Scenario sc = parse_scenario(R"(
# comment line
kappa0 = 2
kappa1 = 0.5
kappa2 = 3   # trailing comment
gamma = 2
p = 3
phi.a = 0.1
phi.b = 4
phi.q = 2
g.cinf = 2
g.amp = 0.5
g.lambda = 0.25
h.cinf = 1
h.amp = 0
h.lambda = 0
s0 = 0.5
u0[] = [1, 0.5, 0.25]
v0[] = 1 1
m = 7
)");
  CHECK(sc.params.kappa0 == 2.0);
  CHECK(sc.params.kappa1 == 0.5);
  CHECK(sc.params.kappa2 == 3.0);
  CHECK(sc.params.gamma == 2.0);
  CHECK(sc.p == 3.0);
  CHECK(sc.phi.a == 0.1);
  CHECK(sc.phi.b == 4.0);
  CHECK(sc.phi.q == 2.0);
  CHECK(sc.phi.c_phi == 4.0);
  CHECK(sc.boundary.g.lambda == 0.25);
  CHECK(sc.initial.s0 == 0.5);
  CHECK(sc.initial.u0 == std::vector<double>{1, 0.5, 0.25});
  CHECK(sc.initial.v0 == std::vector<double>{1, 1});
  REQUIRE(sc.truncation_m);
  CHECK(*sc.truncation_m == 7.0);
  CHECK(validate_scenario(sc).ok());
}

TEST_CASE("explicit phi.c overrides the default coercivity constant") {
  const Scenario sc = parse_scenario("phi.b = 4\nphi.c = 1\n");
  CHECK(sc.phi.c_phi == 1.0);
}

TEST_CASE("malformed input raises ParseError") {
  CHECK_THROWS_AS(parse_scenario("kappa9 = 1"), ParseError);
  CHECK_THROWS_AS(parse_scenario("kappa0 1"), ParseError);
  CHECK_THROWS_AS(parse_scenario("kappa0 = one"), ParseError);
  CHECK_THROWS_AS(parse_scenario("kappa0 ="), ParseError);
  CHECK_THROWS_AS(parse_scenario("u0[] = []"), ParseError);
  CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.txt"), ParseError);
}

TEST_CASE("format and parse round-trip exactly") {
  for (const auto& name : preset_names()) {
    const Scenario sc = preset_scenario(name);
    CHECK(same(parse_scenario(format_scenario(sc)), sc));
  }
  Scenario odd = baseline_scenario();
  odd.params.kappa1 = 0.1 + 0.2;  // not representable in short decimal
  odd.initial.u0 = {1.0 / 3.0, 2.0 / 7.0};
  odd.truncation_m = 1e-3 / 3.0;
  CHECK(same(parse_scenario(format_scenario(odd)), odd));

  Scenario tab = baseline_scenario();
  tab.phi = NonlinearityPhi::tabulated({-1, 0, 1}, {-1, 0, 1}, 1.0, 1.0);
  CHECK(same(parse_scenario(format_scenario(tab)), tab));
}

TEST_CASE("load_scenario reads a file") {
  const std::string path = "carbofront_io_test_scenario.txt";
  {
    std::ofstream out(path);
    out << format_scenario(preset_scenario("nonlinear"));
  }
  CHECK(same(load_scenario(path), preset_scenario("nonlinear")));
  std::remove(path.c_str());
}

TEST_CASE("overrides") {
  Scenario sc = baseline_scenario();
  apply_override(sc, "p", "2");
  CHECK(sc.p == 2.0);
  apply_override(sc, "phi.b", "3");
  CHECK(sc.phi.b == 3.0);
  CHECK(sc.phi.c_phi == 3.0);  // tracked b before the override
  apply_override(sc, "u0[]", "1, 0");
  CHECK(sc.initial.u0 == std::vector<double>{1, 0});
  CHECK_THROWS_AS(apply_override(sc, "nope", "1"), ParseError);
}

TEST_CASE("presets") {
  CHECK(preset_names() ==
        std::vector<std::string>{"baseline", "nonlinear", "decaying-dirichlet"});
  for (const auto& name : preset_names()) CHECK(validate_scenario(preset_scenario(name)).ok());
  const Scenario nl = preset_scenario("nonlinear");
  CHECK(nl.p == 2.0);
  CHECK(nl.phi.q == 2.0);
  CHECK(preset_scenario("decaying-dirichlet").boundary.g.lambda == 0.5);
  CHECK_THROWS_AS(preset_scenario("unknown"), LookupError);
}
