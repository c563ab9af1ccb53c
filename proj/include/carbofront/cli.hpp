#pragma once

// Command-line front end: scenario loading, single runs with full
// diagnostics, parameter sweeps, refinement studies and a cross-scheme
// verification mode. Every command writes its files under RunConfig::out_dir
// and returns one of the exit codes below.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "carbofront/diagnostics.hpp"
#include "carbofront/model.hpp"
#include "carbofront/oracle.hpp"
#include "carbofront/solver.hpp"

namespace carbofront::cli {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int checks_failed = 1;
inline constexpr int invalid_scenario = 2;  ///< parse, lookup or assumption failure
inline constexpr int numerical_failure = 3;
inline constexpr int unreliable_convergence = 4;
inline constexpr int io_error = 5;
inline constexpr int usage = 64;
}  // namespace exit_code

enum class Mode { run, sweep, convergence, verify };

struct SweepAxis {
  std::string key;
  std::vector<std::string> values;
};

struct RunConfig {
  std::optional<std::string> config_path;  ///< overrides `preset` when set
  std::string preset = "baseline";
  std::vector<std::pair<std::string, std::string>> overrides;
  double horizon = 100.0;
  std::size_t nodes = 201;
  double dt = 0.01;
  double checkpoint_every = 1.0;
  std::string out_dir = "out";
  Mode mode = Mode::run;
  unsigned workers = 1;
  int levels = 3;
  RefineMode refine = RefineMode::temporal;
  bool upwind = true;
  double theta = 1.0;
  std::vector<SweepAxis> vary;
  double cross_check_horizon = 10.0;  ///< verify: alt-scheme horizon cap
  double cross_check_tol = 0.01;

  /// Throws InvalidParameter.
  void validate() const;
  StepControl step_control() const;
};

/// Parses argv (mode positional, then flags). Throws CLI::ParseError
/// subclasses for malformed input; --help surfaces as CLI::CallForHelp.
RunConfig parse_args(int argc, const char* const* argv);

/// Preset or config file plus --set overrides. Throws ParseError/LookupError.
Scenario build_scenario(const RunConfig& config);

/// Cartesian product of the axes in declaration order (last axis fastest).
std::vector<std::vector<std::pair<std::string, std::string>>> expand_grid(
    const std::vector<SweepAxis>& axes);

/// Columns: t, s, sdot, u_min, u_max, v_min, v_max, mass_residual,
/// dissipation_ratio; one row per checkpoint.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj,
                          const DiagnosticsReport& report);

/// Flat `key = value` document. Unavailable numbers are written as `na`.
void write_summary(std::ostream& out, const DiagnosticsReport& report);

void write_convergence_csv(std::ostream& out, const RefinementResult& result);

int cmd_run(const RunConfig& config, std::ostream& log);
int cmd_sweep(const RunConfig& config, std::ostream& log);
int cmd_convergence(const RunConfig& config, std::ostream& log);
int cmd_verify(const RunConfig& config, std::ostream& log);

/// Full entry point: parse, dispatch, map exceptions to exit codes.
int main_entry(int argc, const char* const* argv, std::ostream& out,
               std::ostream& err);

}  // namespace carbofront::cli
