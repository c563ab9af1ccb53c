#pragma once

// Flat key-value scenario files:
//
//   # comment
//   kappa0 = 1
//   phi.q  = 2
//   u0[]   = 1, 1, 0.5
//
// Recognized keys: kappa0 kappa1 kappa2 gamma p phi.a phi.b phi.q phi.c
// phi.table.r[] phi.table.phi[] g.cinf g.amp g.lambda h.cinf h.amp h.lambda
// s0 u0[] v0[] m. Keys omitted from a file keep their default value.

#include <iosfwd>
#include <string>
#include <string_view>

#include "carbofront/model.hpp"

namespace carbofront {

Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::string& path);

/// Inverse of parse_scenario; doubles are written with round-trip precision.
std::string format_scenario(const Scenario& scenario);

/// Sets one key (same names and value syntax as the file format).
void apply_override(Scenario& scenario, std::string_view key,
                    std::string_view value);

}  // namespace carbofront
