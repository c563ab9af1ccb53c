#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "carbofront/model.hpp"

namespace carbofront {

/// Linear Henry law with constant data: gamma = kappa0 = kappa1 = kappa2 = 1,
/// p = q = 1, phi(r) = r, g = h = 1, s0 = 1, u0 = v0 = 1.
Scenario baseline_scenario();

/// Looks up "baseline", "nonlinear" (p = q = 2) or "decaying-dirichlet"
/// (g = 1 + 0.5 exp(-0.5 t)). Throws InvalidParameter for unknown names.
Scenario preset_scenario(std::string_view name);

std::vector<std::string> preset_names();

}  // namespace carbofront
