import math

import pytest

import vbdiag


def test_gm1_coeffs():
    phi, q = vbdiag.gm1_discrete_coeffs(vbdiag.Gm1Params(1.5, 100.0), 1.0)
    assert phi == pytest.approx(math.exp(-0.01), abs=1e-15)
    assert q == pytest.approx(1.5 * (1 - phi * phi), rel=1e-12)


def test_bad_tau_raises():
    with pytest.raises(ValueError):
        vbdiag.gm1_discrete_coeffs(vbdiag.Gm1Params(1.0, 0.0), 1.0)


def test_elevation_models():
    assert vbdiag.tropo_sigma(90.0) == pytest.approx(0.12, abs=1e-12)
    assert vbdiag.iono_sigma(90.0) == pytest.approx(0.4, abs=1e-12)
    assert vbdiag.tropo_sigma(10.0) > vbdiag.tropo_sigma(45.0)


def test_skyplots_and_solution():
    sats = vbdiag.skyplot("dual54")
    assert any(s[0] == "G08" for s in sats)
    rows = []
    for sid, az, el in sats:
        e = vbdiag.line_of_sight(az, el)
        rows.append([-e[0], -e[1], -e[2], 1.0, 1.0 if sid.startswith("E") else 0.0])
    import numpy as np

    g = np.array(rows)
    s = vbdiag.solution_matrix(g, np.ones(len(rows)))
    assert np.allclose(s @ g, np.eye(5), atol=1e-10)


def test_ewma_and_threshold():
    assert vbdiag.ewma_update(1.0, 3.0, 0.5) == pytest.approx(2.0)
    assert vbdiag.threshold_factor(0.0027) == pytest.approx(3.0, abs=1e-3)
    with pytest.raises(ValueError):
        vbdiag.ewma_update(0.0, 1.0, 0.0)


def test_fault_and_hazard():
    assert vbdiag.fault_bias(5100.0) == pytest.approx(10.0)
    assert vbdiag.classify_hazard([0.0, 25.0]) == "VB1B"
    assert vbdiag.classify_hazard([0.0, 1.0, 2.0]) == "none"


def test_scenario_roundtrip_and_errors():
    text = vbdiag.validate_scenario("reps = 7\nfault.rate = 0.5\n")
    assert "reps = 7" in text
    with pytest.raises(ValueError, match=":1"):
        vbdiag.validate_scenario("reps = 0\n")


def test_small_campaign_is_deterministic():
    kw = dict(skyplot="gps24", rate=1.0, reps=3, headings=[0.0], seed=11)
    a = vbdiag.run_monte_carlo(**kw)
    b = vbdiag.run_monte_carlo(**kw, workers=2)
    assert a == b
    assert len(a) == 3
    assert all(r["t_detect"] is not None for r in a)
    summary, pmd = vbdiag.campaign_summary(**kw)
    assert summary[0]["runs"] == 3
    assert pmd is not None
    grid, values = pmd
    assert all(x >= y for x, y in zip(values, values[1:]))
