import math

import numpy as np
import pytest

import tpmpm


def test_scenarios_round_trip():
    assert tpmpm.scenario_names() == ["consolidation", "impact", "footing"]
    for name in tpmpm.scenario_names():
        config = tpmpm.load_scenario(name)
        assert config["name"] == name
        assert tpmpm.validate(config) == config


def test_invalid_config_names_the_field():
    config = tpmpm.load_scenario("impact")
    config["regions"][0]["material"] = "sand"
    with pytest.raises(tpmpm.ConfigError, match=r"regions\[0\]\.material"):
        tpmpm.validate(config)
    with pytest.raises(tpmpm.Error):
        tpmpm.Simulation("{not json")


def test_oracles():
    assert abs(tpmpm.terzaghi_average_consolidation(0.197) - 0.5) < 1e-3
    assert tpmpm.gimp_1d(0.0, 1.0, 0.25)[0] == pytest.approx(0.875)
    c = tpmpm.pressure_laplacian_coefficient(1e-3, 0.3, 1000.0, 2190.0, 1e-4)
    assert c == pytest.approx(-1.0105e-7, rel=1e-4)
    cv = 1e-3 * (10e6 * 0.8 / 0.72) / 9810.0
    assert tpmpm.terzaghi_pressure(0.0, 0.1, 1.0, cv, 1e4) == pytest.approx(0.0)


def test_consolidation_steps():
    sim = tpmpm.Simulation(tpmpm.load_scenario("consolidation"))
    assert sim.num_particles == 200
    mass0 = sim.solid_mass()
    sim.step(20)
    assert sim.steps_taken == 20
    assert sim.time == pytest.approx(2e-3)
    x = sim.positions()
    p = sim.pore_pressure()
    s = sim.effective_stress()
    assert x.shape == (200, 2) and p.shape == (200,) and s.shape == (200, 4)
    assert np.all(np.isfinite(p))
    # the column compresses under the cap
    assert sim.rigid_state()["displacement"][1] < 0.0
    np.testing.assert_allclose(sim.solid_mass(), mass0, rtol=1e-12)
    stats = sim.last_stats
    assert stats["cg_iterations"] > 0


def test_explicit_warning():
    config = tpmpm.load_scenario("consolidation")
    config["scheme"] = "explicit"
    sim = tpmpm.Simulation(config)
    assert sim.warnings and "stability" in sim.warnings[0]
    assert sim.explicit_stable_dt() < 1e-4


def test_impact_run_reports_contact(tmp_path):
    config = tpmpm.load_scenario("impact")
    config["end_time"] = 0.016
    result = tpmpm.run(config, str(tmp_path))
    assert result["steps"] == 800
    assert result["first_contact_time"] == pytest.approx(0.0147, abs=4e-5)
    assert (tmp_path / "probes.csv").exists()
    fields = {(probe, field) for _, probe, field, _ in result["probes"]}
    assert ("block", "velocity_x") in fields
    speed = [v for _, probe, field, v in result["probes"]
             if probe == "block" and field == "velocity_x"]
    assert math.isfinite(speed[-1])
