import csv
import math
from pathlib import Path

import numpy as np
import pytest

import risrsma as rr

ROOT = Path(__file__).resolve().parents[2]


def test_pathloss():
    assert rr.pathloss_amplitude(10.0, 2.0, 1e-3) == pytest.approx(math.sqrt(1e-3 / 100.0))


def test_ris_unitary():
    arch = rr.RisArchitecture.parse("group:2,2,2,2", 8)
    ris = rr.random_ris(arch, 1, 7)
    theta = ris.full()
    assert theta.shape == (8, 8)
    assert np.allclose(theta.conj().T @ theta, np.eye(8), atol=1e-9)
    assert np.allclose(theta, theta.T, atol=1e-9)
    ok, residual = rr.validate_ris(ris)
    assert ok and residual < 1e-9


def test_rates_hand_example():
    h = np.array([[1.0 + 0j], [0.0]])
    pre = rr.Precoder(rr.SchemeSpec.sdma(), np.array([[1.0 + 0j], [0.0]]))
    res = rr.compute_rates(h, pre, 1.0)
    assert res.user_totals[0] == pytest.approx(1.0)


def test_wmmse_and_alternating():
    dims = rr.Dimensions()
    dims.n_elements = 4
    geo = rr.Geometry.from_default_rule(50.0, 10.0)
    ch = rr.generate_channels(dims, geo, rr.FadingParams(), 3)
    tx = rr.TransmitSetup(2, np.array([1.0]), 1e-10)
    w = np.array([1.0, 1.0])
    h = rr.effective_channels(ch, rr.random_ris(rr.RisArchitecture.single(4), 1, 1))
    out = rr.wmmse_precoder(h, w, tx, rr.SchemeSpec.rs1())
    assert np.all(np.diff(out.wsr_trace) >= -1e-8)
    st = rr.OptimizerSettings()
    st.restarts = 1
    d = rr.alternating_optimize(ch, tx, w, rr.SchemeSpec.rs1(), rr.RisArchitecture.single(4), st, 5)
    assert d.wsr > 0
    assert rr.validate_ris(d.ris)[0]


def test_config_roundtrip(tmp_path):
    cfg = rr.load_config(ROOT / "configs" / "fig2a.json")
    assert cfg.dims.n_elements == 20
    cfg.dims.n_elements = 4
    cfg.mc_runs = 1
    cfg.n_weights = 3
    cfg.schemes = ["sdma"]
    cfg.archs = ["single"]
    cfg.optimizer.restarts = 1
    out = tmp_path / "r.csv"
    rr.run_experiment(cfg, out)
    with open(out) as f:
        rows = list(csv.DictReader(f))
    assert ",".join(rows[0].keys()) == rr.CSV_HEADER
    assert len(rows) == 5
    summary = tmp_path / "s.csv"
    rr.summarize_file(out, summary)
    assert summary.read_text().splitlines()[0] == rr.SUMMARY_HEADER


def test_config_errors():
    with pytest.raises(rr.ConfigError):
        rr.parse_config('{"bogus": 1}')
