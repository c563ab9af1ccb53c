#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include "carbofront/cli.hpp"
#include "carbofront/diagnostics.hpp"
#include "carbofront/model.hpp"
#include "carbofront/oracle.hpp"
#include "carbofront/presets.hpp"
#include "carbofront/scenario_io.hpp"
#include "carbofront/solver.hpp"

namespace py = pybind11;
using namespace carbofront;

namespace {

py::dict report_to_dict(const DiagnosticsReport& r) {
  py::dict d;
  auto check = [](const CheckResult& c) {
    py::dict x;
    x["pass"] = c.pass;
    x["worst"] = c.worst;
    x["tolerance"] = c.tolerance;
    return x;
  };
  d["bounds"] = check(r.bounds_check);
  d["mass"] = check(r.mass);
  d["energy"] = check(r.energy);
  d["dissipation"] = check(r.dissipation);
  d["times"] = r.times;
  d["mass_residual"] = r.mass_residual;
  d["energy_slack"] = r.energy_slack;
  d["dissipation_ratio"] = r.dissipation_ratio;
  if (r.fit_available) {
    d["beta"] = r.fit.exponent;
    d["amplitude"] = r.fit.amplitude;
  } else {
    d["beta"] = py::none();
    d["amplitude"] = py::none();
  }
  if (r.constants_available) {
    d["c_star_emp"] = r.constants.c_star;
    d["C_star_emp"] = r.constants.C_star;
  } else {
    d["c_star_emp"] = py::none();
    d["C_star_emp"] = py::none();
  }
  d["all_pass"] = r.all_pass();
  return d;
}

RefineMode refine_mode(const std::string& name) {
  if (name == "combined") return RefineMode::combined;
  if (name == "temporal") return RefineMode::temporal;
  if (name == "spatial") return RefineMode::spatial;
  throw InvalidParameter("unknown refinement mode '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Free-boundary carbonation simulator core";

  static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
  static py::exception<ValidationError> validation_error(m, "ValidationError",
                                                         error.ptr());
  static py::exception<NumericalBlowup> numerical_error(m, "NumericalError",
                                                        error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ValidationError& e) {
      py::set_error(validation_error, e.what());
    } catch (const NumericalBlowup& e) {
      py::set_error(numerical_error, e.what());
    } catch (const InvalidParameter& e) {
      py::set_error(PyExc_ValueError, e.what());
    } catch (const DomainError& e) {
      py::set_error(PyExc_ValueError, e.what());
    } catch (const LookupError& e) {
      py::set_error(PyExc_KeyError, e.what());
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  py::class_<Scenario>(m, "Scenario")
      .def_static("preset", [](const std::string& name) { return preset_scenario(name); },
                  py::arg("name"))
      .def_static("parse", [](const std::string& text) { return parse_scenario(text); },
                  py::arg("text"))
      .def_static("load", &load_scenario, py::arg("path"))
      .def("to_text", &format_scenario)
      .def("set",
           [](Scenario& sc, const std::string& key, const std::string& value) {
             apply_override(sc, key, value);
             return sc;
           },
           py::arg("key"), py::arg("value"),
           "Apply one key = value override in place; returns the scenario.")
      .def("__repr__", [](const Scenario& sc) {
        return "<Scenario p=" + std::to_string(sc.p) +
               " q=" + std::to_string(sc.phi.q) + ">";
      });

  m.def("preset_names", &preset_names);

  m.def(
      "validate",
      [](const Scenario& sc) {
        const ValidationReport rep = validate_scenario(sc);
        py::list failures;
        for (const auto& f : rep.failures) {
          failures.append(py::make_tuple(f.assumption, f.message, f.value));
        }
        py::dict d;
        d["ok"] = rep.ok();
        d["failures"] = failures;
        d["warnings"] = rep.warnings;
        return d;
      },
      py::arg("scenario"));

  m.def(
      "comparison_bounds",
      [](const Scenario& sc) {
        const ComparisonBounds b = comparison_bounds(sc);
        return py::make_tuple(b.u_star, b.v_star);
      },
      py::arg("scenario"));

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("complete", &Trajectory::complete)
      .def_readonly("failure", &Trajectory::failure)
      .def_readonly("steps", &Trajectory::steps)
      .def_property_readonly("times",
                             [](const Trajectory& t) {
                               std::vector<double> out;
                               for (const auto& cp : t.checkpoints) out.push_back(cp.t);
                               return out;
                             })
      .def_property_readonly("fronts",
                             [](const Trajectory& t) {
                               std::vector<double> out;
                               for (const auto& cp : t.checkpoints) out.push_back(cp.s);
                               return out;
                             })
      .def_property_readonly("speeds",
                             [](const Trajectory& t) {
                               std::vector<double> out;
                               for (const auto& cp : t.checkpoints) out.push_back(cp.sdot);
                               return out;
                             })
      .def(
          "fields",
          [](const Trajectory& t, std::size_t k) {
            if (k >= t.snapshots.size()) throw py::index_error("snapshot index out of range");
            return py::make_tuple(t.snapshots[k].u_bar, t.snapshots[k].v_bar);
          },
          py::arg("index"), "(u_bar, v_bar) on the fixed grid at checkpoint `index`.")
      .def("__len__", [](const Trajectory& t) { return t.checkpoints.size(); });

  m.def(
      "run",
      [](const Scenario& sc, double horizon, std::size_t nodes, double dt,
         double checkpoint_every, bool upwind, double theta) {
        const auto vs = ValidatedScenario::create(sc);
        StepControl ctl;
        ctl.dt = dt;
        ctl.upwind = upwind;
        ctl.theta = theta;
        py::gil_scoped_release release;
        return run(vs, FixedGrid(nodes), ctl, horizon, checkpoint_every);
      },
      py::arg("scenario"), py::arg("horizon"), py::arg("nodes") = 201,
      py::arg("dt") = 0.01, py::arg("checkpoint_every") = 1.0,
      py::arg("upwind") = true, py::arg("theta") = 1.0);

  m.def(
      "diagnose",
      [](const Scenario& sc, const Trajectory& traj) {
        const auto vs = ValidatedScenario::create(sc);
        return report_to_dict(diagnose(vs, traj));
      },
      py::arg("scenario"), py::arg("trajectory"));

  m.def(
      "sqrt_law_fit",
      [](const Trajectory& traj, double t_min, double t_max) {
        const PowerLawFit fit = sqrt_law_fit(traj, t_min, t_max);
        return py::make_tuple(fit.amplitude, fit.exponent);
      },
      py::arg("trajectory"), py::arg("t_min"), py::arg("t_max"),
      "Least-squares (amplitude, exponent) of s = a t^beta.");

  m.def(
      "refine",
      [](const Scenario& sc, double horizon, int levels, std::size_t base_nodes,
         double dt, const std::string& mode, bool upwind) {
        const auto vs = ValidatedScenario::create(sc);
        RefinementOptions opt;
        opt.base_nodes = base_nodes;
        opt.control.dt = dt;
        opt.control.upwind = upwind;
        opt.mode = refine_mode(mode);
        RefinementResult res;
        {
          py::gil_scoped_release release;
          res = refine_run(vs, horizon, levels, opt);
        }
        py::list rows;
        for (const auto& l : res.levels) {
          py::dict row;
          row["nodes"] = l.nodes;
          row["dt"] = l.dt;
          row["s_final"] = l.s_final;
          row["s_diff"] = l.s_diff;
          row["field_diff"] = l.field_diff;
          row["order"] = l.order;
          rows.append(row);
        }
        py::dict d;
        d["levels"] = rows;
        d["order"] = res.estimated_order;
        d["exact"] = res.exact;
        d["reliable"] = res.reliable;
        return d;
      },
      py::arg("scenario"), py::arg("horizon"), py::arg("levels") = 3,
      py::arg("base_nodes") = 51, py::arg("dt") = 0.01,
      py::arg("mode") = "combined", py::arg("upwind") = true);

  m.def(
      "alt_scheme_run",
      [](const Scenario& sc, double horizon, std::size_t nodes, double checkpoint_every) {
        const auto vs = ValidatedScenario::create(sc);
        AltSchemeControl ctl;
        ctl.nodes = nodes;
        ctl.checkpoint_every = checkpoint_every;
        py::gil_scoped_release release;
        return alt_scheme_run(vs, horizon, ctl);
      },
      py::arg("scenario"), py::arg("horizon"), py::arg("nodes") = 201,
      py::arg("checkpoint_every") = 1.0);

  m.def(
      "cli_main",
      [](const std::vector<std::string>& args) {
        std::vector<const char*> argv{"carbofront"};
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        const int code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run the command-line tool in-process; returns (exit_code, stdout, stderr).");
}
