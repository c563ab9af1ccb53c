#include "carbofront/presets.hpp"

namespace carbofront {

Scenario baseline_scenario() {
  Scenario sc;
  sc.params = {.kappa0 = 1.0, .kappa1 = 1.0, .kappa2 = 1.0, .gamma = 1.0};
  sc.p = 1.0;
  sc.phi = NonlinearityPhi::power_law(0.0, 1.0, 1.0);
  sc.boundary.g = {.cinf = 1.0, .amp = 0.0, .lambda = 0.0};
  sc.boundary.h = {.cinf = 1.0, .amp = 0.0, .lambda = 0.0};
  sc.initial = {.s0 = 1.0, .u0 = {1.0}, .v0 = {1.0}};
  return sc;
}

Scenario preset_scenario(std::string_view name) {
  Scenario sc = baseline_scenario();
  if (name == "baseline") return sc;
  if (name == "nonlinear") {
    sc.p = 2.0;
    sc.phi = NonlinearityPhi::power_law(0.0, 1.0, 2.0);
    return sc;
  }
  if (name == "decaying-dirichlet") {
    sc.boundary.g = {.cinf = 1.0, .amp = 0.5, .lambda = 0.5};
    return sc;
  }
  throw LookupError("unknown preset '" + std::string(name) + "'");
}

std::vector<std::string> preset_names() {
  return {"baseline", "nonlinear", "decaying-dirichlet"};
}

}  // namespace carbofront
