import math

import pytest

import carbofront as cf


def test_presets_and_round_trip():
    assert set(cf.preset_names()) == {"baseline", "nonlinear", "decaying-dirichlet"}
    sc = cf.Scenario.preset("nonlinear")
    again = cf.Scenario.parse(sc.to_text())
    assert again.to_text() == sc.to_text()
    assert "p=2" in repr(sc)


def test_unknown_preset_and_key():
    with pytest.raises(KeyError):
        cf.Scenario.preset("nope")
    with pytest.raises(cf.Error):
        cf.Scenario.preset("baseline").set("no_such_key", "1")


def test_validation_names_the_assumption():
    sc = cf.Scenario.preset("baseline").set("h.cinf", "2")
    rep = cf.validate(sc)
    assert not rep["ok"]
    assert any(tag == "(A2)" for tag, _, _ in rep["failures"])
    with pytest.raises(cf.ValidationError):
        cf.run(sc, 1.0)


def test_comparison_bounds():
    assert cf.comparison_bounds(cf.Scenario.preset("baseline")) == (1.0, 1.0)


def test_run_and_diagnose():
    sc = cf.Scenario.preset("baseline")
    traj = cf.run(sc, 20.0, nodes=101, dt=0.02)
    assert traj.complete
    assert len(traj) == 21
    assert traj.times[0] == 0.0 and traj.times[-1] == 20.0
    fronts = traj.fronts
    assert fronts[0] == 1.0
    assert all(b >= a for a, b in zip(fronts, fronts[1:]))
    u, v = traj.fields(len(traj) - 1)
    assert len(u) == 101 and len(v) == 101
    with pytest.raises(IndexError):
        traj.fields(len(traj))

    rep = cf.diagnose(sc, traj)
    assert rep["all_pass"]
    assert rep["bounds"]["pass"]
    assert rep["mass"]["worst"] < 1e-2
    assert len(rep["mass_residual"]) == len(traj)
    a, beta = cf.sqrt_law_fit(traj, 2.0, 20.0)
    assert a > 0 and 0.4 < beta < 0.7


def test_refine_frozen_front_is_exact():
    sc = cf.Scenario.preset("baseline").set("kappa0", "0")
    res = cf.refine(sc, 1.0, levels=3, base_nodes=11, dt=0.05)
    assert res["exact"]
    assert all(row["s_final"] == 1.0 for row in res["levels"])


def test_alt_scheme_agrees():
    sc = cf.Scenario.preset("baseline")
    alt = cf.alt_scheme_run(sc, 2.0, nodes=51)
    main = cf.run(sc, 2.0, nodes=51, dt=0.01)
    assert math.isclose(alt.fronts[-1], main.fronts[-1], rel_tol=1e-2)


def test_cli_in_process(tmp_path):
    code, out, _ = cf.cli_main(
        ["run", "--horizon", "2", "--nodes", "51", "--dt", "0.02", "--out", str(tmp_path)]
    )
    assert code == 0
    assert (tmp_path / "trajectory.csv").read_text().startswith("t,s,sdot,")
    assert "beta" in (tmp_path / "summary.txt").read_text()
    code, _, _ = cf.cli_main(["bogus"])
    assert code == 64
