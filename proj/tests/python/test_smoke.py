import math
import os
import subprocess

import numpy as np
import pytest

import wiretap


def test_db_round_trip():
    assert wiretap.to_db(100.0) == pytest.approx(20.0)
    assert wiretap.from_db(wiretap.to_db(3.7)) == pytest.approx(3.7)


def test_perfect_csi_hits_target():
    h_ba, h_ea = wiretap.generate_channels(4, 4, 4, seed=3)
    assert h_ba.shape == (4, 4) and h_ba.dtype == np.complex128
    rep = wiretap.evaluate_perfect_csi(h_ba, h_ea, 100.0)
    assert rep["sinr_b"] == pytest.approx(100.0, rel=1e-9)
    assert rep["secrecy_capacity"] >= 0.0


def test_design_diagonal_channel():
    d = wiretap.design_artificial_noise(np.diag([2.0, 1.0]).astype(complex), 100.0)
    assert d["rho"] == pytest.approx(0.25)
    assert d["q_z"][1, 1].real == pytest.approx(75.0)
    assert not d["outage"]


def test_svd_and_moments():
    h, _ = wiretap.generate_channels(4, 2, 1, seed=7)
    s = wiretap.partition_svd(h)
    assert np.allclose(s["u"][:, :2] @ np.diag(s["sigma"]) @ s["v"][:, :2].conj().T, h)
    m = wiretap.compute_moments(h, 0.01)
    assert np.allclose(m["g"], 0.01 * np.eye(2))
    zero = wiretap.compute_moments(h, 0.0)
    assert zero["e_dsigma1"] == 0.0


def test_prediction_without_error_is_target():
    h, _ = wiretap.generate_channels(5, 5, 5, seed=4)
    assert wiretap.predict_naive_sinr(h, 0.0, 100.0) == pytest.approx(100.0, rel=1e-12)
    assert wiretap.predict_naive_sinr(h, 0.01, 100.0) <= 100.0


def test_run_small_experiment():
    out = wiretap.run("na = 3\ntrials = 40\nsigma_h_db = -20,-10", {"threads": 1})
    assert out["axis_name"] == "sigma_h_db"
    assert len(out["records"]) == 2 * 4
    naive = [r for r in out["records"] if r["scheme"] == "naive"]
    assert naive[0]["sinr_b_roe"] > naive[1]["sinr_b_roe"]
    again = wiretap.run(out["config"], {"threads": 2})
    assert again["records"] == out["records"]


def test_preset_and_config_errors():
    cfg = wiretap.preset("fig3")
    assert cfg["sigma_h_db"] == [-10.0]
    with pytest.raises(ValueError, match="trials must be"):
        wiretap.run(None, {"trials": 0})


def test_quick_validate_reports_nine_checks():
    checks = wiretap.validate(quick=True)
    assert [c["id"] for c in checks] == list(range(1, 10))
    by_id = {c["id"]: c for c in checks}
    assert by_id[1]["passed"] and by_id[2]["passed"] and by_id[9]["passed"]


@pytest.mark.skipif("WIRETAP_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_zero_trials_exit_code():
    r = subprocess.run([os.environ["WIRETAP_CLI"], "run", "--trials", "0"], capture_output=True, text=True)
    assert r.returncode == 1
    assert "trials must be" in r.stderr
