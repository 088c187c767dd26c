import json
import math
import os

import pytest

import helmkit

CONFIGS = os.environ.get("HELMKIT_CONFIG_DIR", os.path.join(os.path.dirname(__file__), "..", "..", "configs"))


def ledger(**overrides):
    values = dict(C_int_tilde=0.254, C_DtN_tilde=1.178, C_H2=0.666, L_ray=4.0, k0=2.0, s=0.0)
    values.update(A_min=1.0, A_max=1.0, nu_min=1.0, nu_max=1.0)
    values.update(overrides)
    # identity coefficients: the derived constants equal the tilde ones
    values.update(C_int=values["C_int_tilde"], C_DtN=values["C_DtN_tilde"], C_cont=1 + values["C_DtN_tilde"])
    return json.dumps(values)


def test_volterra_constant():
    sigma, _, converged = helmkit.volterra_discrete(1.0, 2000)
    assert converged
    assert abs(sigma - 2 / math.pi) < 1e-3


def test_config_round_trip():
    c = helmkit.Config.from_file(os.path.join(CONFIGS, "disk.cfg"))
    assert c.R == 2.0
    assert helmkit.Config.from_text(c.serialize()) == c
    assert len(c.hash()) == 16
    with pytest.raises(helmkit.ConfigError):
        helmkit.Config.from_text("[wave]\nfrequency = 3\n")


def test_longest_ray_in_disk_exterior():
    c = helmkit.Config.from_file(os.path.join(CONFIGS, "disk.cfg"))
    assert helmkit.longest_ray_length(c, 1.0, jobs=2) == pytest.approx(math.sqrt(3) / 2, abs=2e-3)


def test_dtn_signs():
    t = helmkit.dtn_coefficients(5.0, 1.0)
    assert len(t) == helmkit.default_nmax(5.0, 1.0) + 1
    assert all(z.real <= 0 for z in t)


def test_threshold_flag_matches_rhs():
    r = helmkit.mesh_threshold(ledger(), 10.0, 0.01)
    assert r["admissible"] == (r["rhs"] <= 1)
    assert helmkit.mesh_threshold(ledger(), 10.0, 0.99 * r["h_max"])["admissible"]
    with pytest.raises(helmkit.ConfigError):
        helmkit.mesh_threshold(ledger(L_ray=1.0), 10.0, 0.01)


def test_quasimode_ratio():
    ratio, bound = helmkit.quasimode_lower_bound(1.0, 0.1, 0.01)
    assert ratio >= bound >= 50.9


def test_sound_soft_disk_vanishes_on_boundary():
    for theta in (0.0, 1.0, 2.5):
        u = helmkit.sound_soft_disk(3.0, 1.0, 0.0, math.cos(theta), math.sin(theta))
        assert abs(u) < 1e-10


def test_small_convergence_table():
    c = helmkit.Config.from_file(os.path.join(CONFIGS, "scattering.cfg"))
    rows = helmkit.quasioptimality_study(c, [2.0], [0.2, 0.1], ledger(L_ray=3.873))
    assert [r["h_target"] for r in rows] == [0.2, 0.1]
    for r in rows:
        assert r["ratio"] >= 1 - 1e-9
        assert not r["failed"]
