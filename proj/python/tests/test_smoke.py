import json
import math

import pytest

import nsflab

# Frozen from tools/oracles/frozen_values.py.
BALLISTIC_PG_2_1 = 4.386294361119891
REL_ENERGY_PG_2_VS_1 = 0.38629436111989063


def test_perfect_gas_eval():
    m = nsflab.ThermoModel.perfect_gas(1.5)
    v = nsflab.eval(m, 2.0, 1.0)
    assert v["p"] == pytest.approx(2.0)
    assert v["e"] == pytest.approx(1.5)
    assert v["s"] == pytest.approx(-math.log(2.0))


def test_frozen_values():
    m = nsflab.ThermoModel.perfect_gas(1.5)
    assert nsflab.ballistic_energy(m, 2.0, 1.0, 1.0) == pytest.approx(BALLISTIC_PG_2_1, rel=1e-14)
    assert nsflab.rel_energy_density(m, 2.0, 1.0, [0.0], 1.0, 1.0, [0.0]) == pytest.approx(
        REL_ENERGY_PG_2_VS_1, rel=1e-14
    )


def test_gibbs():
    m = nsflab.ThermoModel.molecular_radiation("log_tail", 0.1)
    r_rho, r_theta = nsflab.gibbs_residual(m, 0.8, 1.7)
    assert abs(r_rho) < 1e-12 and abs(r_theta) < 1e-12
    report = json.loads(nsflab.gibbs_suite(m, 1000, 3))
    assert report["max_r_rho"] <= 1e-8


def test_gate_and_errors():
    ok, _ = nsflab.theorem_gate(2, "[model]\nkind = perfect_gas\nc_v = 1.5\n")
    assert ok
    ok, reason = nsflab.theorem_gate(
        3, "[model]\nkind = molecular_radiation\na = 0.1\n[transport]\nkind = power_kappa\nbeta = 3\n"
    )
    assert not ok and "does not allow us to prove" in reason
    with pytest.raises(nsflab.ConfigError, match="transport.viscocity"):
        nsflab.parse_config("[transport]\nviscocity = 1\n")
    with pytest.raises(nsflab.GateError):
        nsflab.ThermoModel.from_config("[model]\nkind = perfect_gas\nc_v = 1.0\n")


def test_simulate():
    out = nsflab.simulate("[grid]\nnx = 16\n[solver]\nt_end = 0.02\n")
    series = out["series"]
    assert series["mass"][0] == pytest.approx(series["mass"][-1], rel=1e-12)
    assert out["final"]["rho"].shape == (16,)
    assert (out["final"]["theta"] > 0).all()
