import json
import math

import numpy as np
import pytest

from atomphoton.core import make_params
from atomphoton.sweeps import Table, log_grid, r_sweep, uncertainty_sweep, width_sweep


def test_table_csv_layout(tmp_path):
    tab = Table(("a", "b"), [(1.0, 1 / 3), (2.0, 0.1)])
    text = tab.to_csv(header={"z": 1, "a": [1, 2]})
    lines = text.splitlines()
    assert lines[0] == "# config: " + json.dumps({"a": [1, 2], "z": 1})
    assert lines[1] == "a,b"
    assert float(lines[2].split(",")[1]) == 1 / 3
    path = tmp_path / "t.csv"
    tab.to_csv(path, header=["plain"])
    assert path.read_text().startswith("# plain\na,b\n")
    back = np.loadtxt(path, delimiter=",", comments="#", skiprows=2)
    np.testing.assert_array_equal(back, tab.data)


def test_empty_table():
    tab = Table(("x",), [])
    assert len(tab) == 0 and tab.to_csv() == "x\n"
    with pytest.raises(ValueError):
        Table(("x",), [(1.0, 2.0)])


@pytest.mark.parametrize("lo, hi, n", [(1, 0, 5), (1, 1, 5), (0, 1, 0)])
def test_log_grid_rejects_empty(lo, hi, n):
    with pytest.raises(ValueError):
        log_grid(lo, hi, n)


def test_log_grid_single_point():
    np.testing.assert_array_equal(log_grid(2, 2, 1), [2.0])


def test_width_sweep_limits():
    tab = width_sweep(1e-8, log_grid(-20, 6, 261))
    le = tab.column("log10_eta")
    assert le[0] == -20 and le[-1] == 6
    eta, b = 10.0**le, 1e-8
    np.testing.assert_allclose(tab.column("rel_coinc_ph"), eta / np.hypot(eta, b), rtol=1e-12)
    np.testing.assert_allclose(tab.column("rel_single_ph"), np.hypot(1, eta), rtol=1e-12)
    np.testing.assert_allclose(tab.column("rel_coinc_at"), 1 / np.hypot(1, eta), rtol=1e-12)
    np.testing.assert_allclose(tab.column("rel_single_at"), np.hypot(eta, b) / eta, rtol=1e-12)
    # photon coincidence width collapses once eta drops below beta
    i = np.searchsorted(le, -8)
    assert tab.column("rel_coinc_ph")[i] == pytest.approx(1 / math.sqrt(2), rel=1e-12)
    assert tab.column("rel_coinc_ph")[0] < 1e-11


def test_width_sweep_beta_one_mirror():
    # with beta = 1 the two parties swap roles under eta -> 1/eta
    tab = width_sweep(1.0, log_grid(-4, 4, 81))
    for a, b in (("rel_coinc_ph", "rel_coinc_at"), ("rel_single_ph", "rel_single_at")):
        np.testing.assert_allclose(tab.column(a), tab.column(b)[::-1], rtol=1e-12)


def test_r_sweep_examples():
    tab = r_sweep(1.0, [1.0, 1e-3, 1e3])
    np.testing.assert_allclose(tab.column("R"), [2.0, 1000.001, 1000.001], rtol=1e-12)
    p = make_params(0.05, 0.1, 100.0)
    tt = r_sweep(p.beta, p=p, times=[0.0, 100.0])
    np.testing.assert_allclose(tt.column("eta"), [0.05, 0.05 * math.sqrt(2)], rtol=1e-15)
    with pytest.raises(ValueError):
        r_sweep(0.1, times=[0.0])


def test_uncertainty_sweep(recoil_params):
    tab, violations = uncertainty_sweep(recoil_params, np.linspace(0, 1000, 101))
    assert violations == []
    row0 = tab.data[0]
    assert row0[0] == 0.0
    assert tab.column("cond_ph")[0] * tab.column("K")[0] == pytest.approx(1.0, rel=1e-12)
    assert np.all(tab.column("cond_ph")[1:] >= tab.column("lower_bound")[1:])
