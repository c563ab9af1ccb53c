#include "carbofront/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "carbofront/presets.hpp"
#include "carbofront/scenario_io.hpp"

namespace carbofront::cli {

namespace fs = std::filesystem;

namespace {

std::string num(double x) {
  if (!std::isfinite(x)) return "na";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::pair<std::string, std::string> split_assignment(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw InvalidParameter("expected KEY=VALUE, got '" + text + "'");
  }
  return {text.substr(0, eq), text.substr(eq + 1)};
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  return out;
}

void prepare_out_dir(const RunConfig& config) {
  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  if (ec) throw Error("cannot create output directory '" + config.out_dir + "': " + ec.message());
}

const char* pass_word(bool pass) { return pass ? "true" : "false"; }

// Shared exception-to-exit-code mapping for the command bodies.
template <class Body>
int guarded(std::ostream& log, Body&& body) {
  try {
    return body();
  } catch (const ValidationError& e) {
    log << e.what();
    return exit_code::invalid_scenario;
  } catch (const ParseError& e) {
    log << "error: " << e.what() << '\n';
    return exit_code::invalid_scenario;
  } catch (const LookupError& e) {
    log << "error: " << e.what() << '\n';
    return exit_code::invalid_scenario;
  } catch (const InvalidParameter& e) {
    log << "error: " << e.what() << '\n';
    return exit_code::usage;
  } catch (const NumericalBlowup& e) {
    log << "numerical failure: " << e.what() << '\n';
    return exit_code::numerical_failure;
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return exit_code::io_error;
  }
}

struct RunOutcome {
  Trajectory traj;
  DiagnosticsReport report;
};

// Runs and diagnoses, writing trajectory.csv and summary.txt even when the
// run stops early. Returns the numerical-failure code in that case.
int run_and_report(const RunConfig& config, const ValidatedScenario& vs,
                   std::ostream& log, RunOutcome& outcome) {
  int status = exit_code::ok;
  try {
    outcome.traj = run(vs, FixedGrid(config.nodes), config.step_control(),
                       config.horizon, config.checkpoint_every);
  } catch (const RunAborted& e) {
    outcome.traj = e.partial();
  }
  if (!outcome.traj.complete) {
    log << "numerical failure: " << outcome.traj.failure << '\n';
    status = exit_code::numerical_failure;
  }
  outcome.report = diagnose(vs, outcome.traj);

  prepare_out_dir(config);
  const fs::path dir(config.out_dir);
  {
    auto csv = open_output(dir / "trajectory.csv");
    write_trajectory_csv(csv, outcome.traj, outcome.report);
  }
  {
    auto sum = open_output(dir / "summary.txt");
    write_summary(sum, outcome.report);
    if (!outcome.traj.complete) sum << "failure = " << outcome.traj.failure << '\n';
  }
  return status;
}

void log_report(std::ostream& log, const Trajectory& traj, const DiagnosticsReport& r) {
  if (!traj.checkpoints.empty()) {
    const Checkpoint& last = traj.checkpoints.back();
    log << "t = " << num(last.t) << "  s = " << num(last.s) << "  steps = " << traj.steps
        << "  retries = " << traj.retries << '\n';
  }
  log << "bounds " << pass_word(r.bounds_check.pass) << " (worst " << num(r.bounds_check.worst)
      << ")\nmass " << pass_word(r.mass.pass) << " (worst " << num(r.mass.worst)
      << ")\nenergy " << pass_word(r.energy.pass) << " (worst " << num(r.energy.worst)
      << ")\ndissipation " << pass_word(r.dissipation.pass) << " (sup "
      << num(r.dissipation.worst) << ")\n";
  if (r.fit_available) log << "beta = " << num(r.fit.exponent) << '\n';
}

}  // namespace

void RunConfig::validate() const {
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) {
    throw InvalidParameter("horizon must be a nonnegative number");
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidParameter("dt must be positive");
  if (!(checkpoint_every > 0.0) || !std::isfinite(checkpoint_every)) {
    throw InvalidParameter("checkpoint interval must be positive");
  }
  if (nodes < 3) throw InvalidParameter("need at least 3 nodes");
  if (workers == 0) throw InvalidParameter("need at least one worker");
  if (levels < 3) throw InvalidParameter("convergence needs at least 3 levels");
  if (out_dir.empty()) throw InvalidParameter("output directory must be set");
  if (!(cross_check_horizon > 0.0) || !(cross_check_tol > 0.0)) {
    throw InvalidParameter("cross-check horizon and tolerance must be positive");
  }
  for (const SweepAxis& axis : vary) {
    if (axis.values.empty()) throw InvalidParameter("sweep axis '" + axis.key + "' has no values");
  }
  step_control().validate();
}

StepControl RunConfig::step_control() const {
  StepControl ctl;
  ctl.dt = dt;
  ctl.upwind = upwind;
  ctl.theta = theta;
  return ctl;
}

namespace {

// Raw flag values bound to a CLI11 app; converted into a RunConfig after
// parsing.
struct ArgBinding {
  CLI::App app{"Free-boundary carbonation simulator"};
  RunConfig cfg;
  std::string mode = "run";
  std::string config_path;
  std::string refine = "temporal";
  std::string advection = "upwind";
  std::vector<std::string> sets;
  std::vector<std::string> varies;

  ArgBinding() {
    app.set_version_flag("--version", "carbofront 0.1.0");
    app.add_option("mode", mode, "run, sweep, convergence or verify")
        ->check(CLI::IsMember({"run", "sweep", "convergence", "verify"}));
    app.add_option("--config", config_path, "scenario file (key = value lines)")
        ->check(CLI::ExistingFile);
    app.add_option("--preset", cfg.preset, "built-in scenario")
        ->check(CLI::IsMember(preset_names()));
    app.add_option("--set", sets, "scenario override KEY=VALUE (repeatable)");
    app.add_option("--vary", varies, "sweep axis KEY=v1,v2,... (repeatable)");
    app.add_option("--out", cfg.out_dir, "output directory");
    app.add_option("--horizon", cfg.horizon, "final time");
    app.add_option("--dt", cfg.dt, "time step");
    app.add_option("--nodes", cfg.nodes, "grid nodes on [0, 1]");
    app.add_option("--checkpoint-every", cfg.checkpoint_every, "checkpoint interval");
    app.add_option("--workers", cfg.workers, "parallel sweep workers");
    app.add_option("--levels", cfg.levels, "refinement levels");
    app.add_option("--refine", refine, "refinement: combined, temporal or spatial")
        ->check(CLI::IsMember({"combined", "temporal", "spatial"}));
    app.add_option("--advection", advection, "upwind or centered")
        ->check(CLI::IsMember({"upwind", "centered"}));
    app.add_option("--theta", cfg.theta, "time weighting in [0.5, 1]");
    app.add_option("--cross-check-horizon", cfg.cross_check_horizon,
                   "verify: horizon cap for the explicit reference scheme");
  }
};

}  // namespace

RunConfig parse_args(int argc, const char* const* argv) {
  ArgBinding b;
  b.app.parse(argc, argv);
  RunConfig cfg = b.cfg;
  const std::string& mode = b.mode;
  const std::string& config_path = b.config_path;
  const std::string& refine = b.refine;
  const std::string& advection = b.advection;
  const auto& sets = b.sets;
  const auto& varies = b.varies;

  if (mode == "sweep") cfg.mode = Mode::sweep;
  else if (mode == "convergence") cfg.mode = Mode::convergence;
  else if (mode == "verify") cfg.mode = Mode::verify;
  if (!config_path.empty()) cfg.config_path = config_path;
  if (refine == "combined") cfg.refine = RefineMode::combined;
  else if (refine == "spatial") cfg.refine = RefineMode::spatial;
  cfg.upwind = advection == "upwind";
  for (const auto& s : sets) cfg.overrides.push_back(split_assignment(s));
  for (const auto& s : varies) {
    auto [key, list] = split_assignment(s);
    SweepAxis axis{key, {}};
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) axis.values.push_back(item);
    }
    cfg.vary.push_back(std::move(axis));
  }
  return cfg;
}

Scenario build_scenario(const RunConfig& config) {
  Scenario sc = config.config_path ? load_scenario(*config.config_path)
                                   : preset_scenario(config.preset);
  for (const auto& [key, value] : config.overrides) apply_override(sc, key, value);
  return sc;
}

std::vector<std::vector<std::pair<std::string, std::string>>> expand_grid(
    const std::vector<SweepAxis>& axes) {
  std::vector<std::vector<std::pair<std::string, std::string>>> cells(1);
  for (const SweepAxis& axis : axes) {
    std::vector<std::vector<std::pair<std::string, std::string>>> next;
    next.reserve(cells.size() * axis.values.size());
    for (const auto& cell : cells) {
      for (const std::string& v : axis.values) {
        next.push_back(cell);
        next.back().emplace_back(axis.key, v);
      }
    }
    cells = std::move(next);
  }
  return cells;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj,
                          const DiagnosticsReport& report) {
  out << "t,s,sdot,u_min,u_max,v_min,v_max,mass_residual,dissipation_ratio\n";
  for (std::size_t k = 0; k < traj.checkpoints.size(); ++k) {
    const Checkpoint& cp = traj.checkpoints[k];
    const State& st = traj.snapshots[k];
    const auto [umin, umax] = std::minmax_element(st.u_bar.begin(), st.u_bar.end());
    const auto [vmin, vmax] = std::minmax_element(st.v_bar.begin(), st.v_bar.end());
    const double mr = k < report.mass_residual.size() ? report.mass_residual[k] : NAN;
    const double dr = k < report.dissipation_ratio.size() ? report.dissipation_ratio[k] : NAN;
    out << num(cp.t) << ',' << num(cp.s) << ',' << num(cp.sdot) << ',' << num(*umin) << ','
        << num(*umax) << ',' << num(*vmin) << ',' << num(*vmax) << ',' << num(mr) << ','
        << num(dr) << '\n';
  }
}

void write_summary(std::ostream& out, const DiagnosticsReport& r) {
  const double nan = NAN;
  out << "beta = " << num(r.fit_available ? r.fit.exponent : nan) << '\n'
      << "amplitude = " << num(r.fit_available ? r.fit.amplitude : nan) << '\n'
      << "c_star_emp = " << num(r.constants_available ? r.constants.c_star : nan) << '\n'
      << "C_star_emp = " << num(r.constants_available ? r.constants.C_star : nan) << '\n';
  auto check = [&](const char* name, const CheckResult& c) {
    out << "checks." << name << ".pass = " << pass_word(c.pass) << '\n'
        << "checks." << name << ".worst = " << num(c.worst) << '\n';
  };
  check("bounds", r.bounds_check);
  check("mass", r.mass);
  check("energy", r.energy);
  check("dissipation", r.dissipation);
}

void write_convergence_csv(std::ostream& out, const RefinementResult& result) {
  out << "level,nodes,dt,s_final,s_diff,field_diff,order\n";
  for (std::size_t k = 0; k < result.levels.size(); ++k) {
    const RefinementLevel& l = result.levels[k];
    out << k << ',' << l.nodes << ',' << num(l.dt) << ',' << num(l.s_final) << ','
        << (k == 0 ? "na" : num(l.s_diff)) << ',' << (k == 0 ? "na" : num(l.field_diff))
        << ',' << (k < 2 ? "na" : num(l.order)) << '\n';
  }
}

int cmd_run(const RunConfig& config, std::ostream& log) {
  return guarded(log, [&] {
    config.validate();
    const auto vs = ValidatedScenario::create(build_scenario(config));
    for (const auto& w : vs.warnings()) log << "warning: " << w << '\n';
    RunOutcome outcome;
    const int status = run_and_report(config, vs, log, outcome);
    log_report(log, outcome.traj, outcome.report);
    if (status != exit_code::ok) return status;
    return outcome.report.all_pass() ? exit_code::ok : exit_code::checks_failed;
  });
}

int cmd_verify(const RunConfig& config, std::ostream& log) {
  return guarded(log, [&] {
    config.validate();
    const auto vs = ValidatedScenario::create(build_scenario(config));
    RunOutcome outcome;
    const int status = run_and_report(config, vs, log, outcome);
    log_report(log, outcome.traj, outcome.report);
    if (status != exit_code::ok) return status;

    // The explicit scheme is costly, so it is compared at the earlier of the
    // horizon and the cap, at matched grid resolution.
    const double t_ref = std::min(config.horizon, config.cross_check_horizon);
    double gap = 0.0;
    bool cross_ok = true;
    if (t_ref > 0.0) {
      AltSchemeControl alt_ctl;
      alt_ctl.nodes = config.nodes;
      alt_ctl.checkpoint_every = t_ref;
      const Trajectory alt = alt_scheme_run(vs, t_ref, alt_ctl);
      const double s_main = outcome.traj.snapshots[snapshot_index(outcome.traj, t_ref)].s;
      gap = std::abs(alt.checkpoints.back().s - s_main) / s_main;
      cross_ok = gap <= config.cross_check_tol;
    }
    {
      std::ofstream sum(fs::path(config.out_dir) / "summary.txt", std::ios::app);
      sum << "cross_check.horizon = " << num(t_ref) << '\n'
          << "cross_check.rel_gap = " << num(gap) << '\n'
          << "cross_check.pass = " << pass_word(cross_ok) << '\n';
    }
    log << "cross-check at t = " << num(t_ref) << ": relative gap " << num(gap) << ' '
        << pass_word(cross_ok) << '\n';
    return outcome.report.all_pass() && cross_ok ? exit_code::ok : exit_code::checks_failed;
  });
}

int cmd_sweep(const RunConfig& config, std::ostream& log) {
  return guarded(log, [&] {
    config.validate();
    const Scenario base = build_scenario(config);
    const auto cells = expand_grid(config.vary);

    struct CellResult {
      std::string status = "pending";
      std::string message;
      DiagnosticsReport report;
    };
    std::vector<CellResult> results(cells.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= cells.size()) return;
        CellResult& res = results[i];
        try {
          Scenario sc = base;
          for (const auto& [key, value] : cells[i]) apply_override(sc, key, value);
          const auto vs = ValidatedScenario::create(std::move(sc));
          Trajectory traj;
          try {
            traj = run(vs, FixedGrid(config.nodes), config.step_control(), config.horizon,
                       config.checkpoint_every);
          } catch (const RunAborted& e) {
            traj = e.partial();
          }
          res.report = diagnose(vs, traj);
          res.status = traj.complete ? "ok" : "numerical";
          res.message = traj.failure;
        } catch (const ValidationError& e) {
          res.status = "invalid";
          std::string msg;
          for (const auto& f : e.report().failures) msg += f.assumption + ' ';
          res.message = msg;
        } catch (const Error& e) {
          res.status = "invalid";
          res.message = e.what();
        }
      }
    };
    const unsigned n_threads =
        static_cast<unsigned>(std::min<std::size_t>(config.workers, cells.size()));
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < n_threads; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    prepare_out_dir(config);
    auto csv = open_output(fs::path(config.out_dir) / "sweep.csv");
    csv << "cell";
    for (const SweepAxis& axis : config.vary) csv << ',' << axis.key;
    csv << ",status,beta,amplitude,c_star_emp,C_star_emp,bounds_pass,mass_pass,"
           "energy_pass,dissipation_pass,message\n";
    bool all_complete = true;
    bool any_invalid = false;
    const double nan = NAN;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const CellResult& res = results[i];
      const DiagnosticsReport& r = res.report;
      const bool have = res.status == "ok" || res.status == "numerical";
      csv << i;
      for (const auto& kv : cells[i]) csv << ',' << kv.second;
      csv << ',' << res.status << ',' << num(have && r.fit_available ? r.fit.exponent : nan)
          << ',' << num(have && r.fit_available ? r.fit.amplitude : nan) << ','
          << num(have && r.constants_available ? r.constants.c_star : nan) << ','
          << num(have && r.constants_available ? r.constants.C_star : nan);
      for (const CheckResult* c : {&r.bounds_check, &r.mass, &r.energy, &r.dissipation}) {
        csv << ',' << (have ? pass_word(c->pass) : "na");
      }
      std::string msg = res.message;
      std::replace(msg.begin(), msg.end(), ',', ';');
      std::replace(msg.begin(), msg.end(), '\n', ' ');
      csv << ',' << msg << '\n';
      log << "cell " << i << ": " << res.status;
      if (have && r.fit_available) log << "  beta = " << num(r.fit.exponent);
      if (!res.message.empty()) log << "  (" << msg << ')';
      log << '\n';
      all_complete = all_complete && res.status == "ok";
      any_invalid = any_invalid || res.status == "invalid";
    }
    if (all_complete) return exit_code::ok;
    return any_invalid ? exit_code::invalid_scenario : exit_code::numerical_failure;
  });
}

int cmd_convergence(const RunConfig& config, std::ostream& log) {
  return guarded(log, [&] {
    config.validate();
    if (!(config.horizon > 0.0)) throw InvalidParameter("convergence needs a positive horizon");
    const auto vs = ValidatedScenario::create(build_scenario(config));
    RefinementOptions opts;
    opts.base_nodes = config.nodes;
    opts.control = config.step_control();
    opts.mode = config.refine;
    RefinementResult res;
    try {
      res = refine_run(vs, config.horizon, config.levels, opts);
    } catch (const StepFailure& e) {
      log << "numerical failure: " << e.what() << '\n';
      return exit_code::numerical_failure;
    }
    prepare_out_dir(config);
    {
      auto csv = open_output(fs::path(config.out_dir) / "convergence.csv");
      write_convergence_csv(csv, res);
    }
    {
      auto sum = open_output(fs::path(config.out_dir) / "summary.txt");
      sum << "order = " << num(res.estimated_order) << '\n'
          << "exact = " << pass_word(res.exact) << '\n'
          << "reliable = " << pass_word(res.reliable) << '\n';
    }
    for (const RefinementLevel& l : res.levels) {
      log << l.nodes << " nodes, dt " << num(l.dt) << ": s = " << num(l.s_final) << '\n';
    }
    if (res.exact) {
      log << "all levels agree to rounding (exact)\n";
      return exit_code::ok;
    }
    log << "estimated order " << num(res.estimated_order) << '\n';
    if (!res.reliable) return exit_code::unreliable_convergence;
    return res.estimated_order >= 0.8 ? exit_code::ok : exit_code::checks_failed;
  });
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  // CARBOFRONT_SEEDLESS is reserved: runs are deterministic and nothing is seeded.
  RunConfig cfg;
  try {
    cfg = parse_args(argc, argv);
  } catch (const CLI::CallForHelp&) {
    ArgBinding b;
    out << b.app.help();
    return exit_code::ok;
  } catch (const CLI::CallForVersion&) {
    out << "carbofront 0.1.0\n";
    return exit_code::ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::usage;
  } catch (const InvalidParameter& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::usage;
  }
  switch (cfg.mode) {
    case Mode::sweep: return cmd_sweep(cfg, out);
    case Mode::convergence: return cmd_convergence(cfg, out);
    case Mode::verify: return cmd_verify(cfg, out);
    case Mode::run: break;
  }
  return cmd_run(cfg, out);
}

}  // namespace carbofront::cli
