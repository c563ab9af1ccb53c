#pragma once

// Independent references for the front-fixed solver: successive grid
// refinement of the solver itself, and a structurally different explicit
// scheme that tracks the front on the physical moving domain.

#include <cstddef>
#include <optional>
#include <vector>

#include "carbofront/model.hpp"
#include "carbofront/solver.hpp"

namespace carbofront {

enum class RefineMode {
  combined,  ///< halve dt and dy together
  temporal,  ///< halve dt, fixed grid
  spatial,   ///< halve dy, fixed dt
};

struct RefinementOptions {
  std::size_t base_nodes = 51;
  StepControl control;  ///< control.dt is the coarsest time step
  RefineMode mode = RefineMode::combined;
  double checkpoint_every = 0.0;  ///< 0: only the horizon
};

struct RefinementLevel {
  std::size_t nodes = 0;
  double dt = 0.0;
  double s_final = 0.0;
  double s_diff = 0.0;      ///< |s_k - s_{k-1}| at the horizon (0 for k = 0)
  double field_diff = 0.0;  ///< max nodal |u_k - u_{k-1}|, |v_k - v_{k-1}|
  double order = 0.0;       ///< log2(s_diff_{k-1} / s_diff_k), k >= 2
};

struct RefinementResult {
  std::vector<RefinementLevel> levels;
  double estimated_order = 0.0;
  bool exact = false;     ///< all differences at rounding level
  bool reliable = false;  ///< exact, or estimated order >= 0.5
  std::optional<Trajectory> reference;  ///< finest run; withheld if unreliable
};

/// Level k uses (base_nodes - 1) 2^k + 1 nodes and/or dt / 2^k, so coarse
/// nodes are a subset of fine ones. Throws InvalidParameter if levels < 3.
RefinementResult refine_run(const ValidatedScenario& scenario, double horizon,
                            int levels, const RefinementOptions& options = {});

struct AltSchemeControl {
  std::size_t nodes = 201;
  double cfl = 0.4;  ///< dt <= cfl dx^2 / max(kappa1, kappa2)
  double dt_max = 1e-3;
  double checkpoint_every = 1.0;
};

/// Explicit Euler on a uniform grid over the physical interval [0, s(t)];
/// after each front move the fields are re-interpolated onto the new grid
/// (linearly, extended past the old front with the boundary-flux slope).
Trajectory alt_scheme_run(const ValidatedScenario& scenario, double horizon,
                          const AltSchemeControl& control = {});

}  // namespace carbofront
