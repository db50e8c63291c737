import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from atomphoton.coordinate import default_grid, gaussian_model_precision, sample_gaussian_amplitude
from atomphoton.core import make_params
from atomphoton.entanglement import (bound_margins, conditional_products, gaussian_schmidt_report,
                                     hidden_entanglement_scan, r_of_eta, r_parameter,
                                     schmidt_number_svd, uncertainty_products)
from atomphoton.exceptions import DegenerateGridError
from atomphoton.grid import AmplitudeGrid, symmetric_grid
from atomphoton.widths import analytic_coord_widths

etas = st.floats(1e-8, 1e6)
betas = st.floats(1e-9, 1.0)


# -- R ---------------------------------------------------------------------------

def test_r_examples():
    assert r_of_eta(1.0, 1.0) == pytest.approx(2.0, rel=1e-15)
    # (eta + beta^2/eta)(eta + 1/eta) = 2e-8 * (1e8 + 1e-8) = 2 + 2e-16
    assert r_of_eta(1e-8, 1e-8) == pytest.approx(math.sqrt(2), rel=1e-15)


@given(etas)
def test_r_down_conversion(eta):
    assert r_of_eta(eta, 1.0) == pytest.approx(eta + 1 / eta, rel=1e-12)


@given(etas, betas)
def test_r_bounded_below(eta, beta):
    assert r_of_eta(eta, beta) >= (1 + beta) * (1 - 1e-15)


@given(betas, st.floats(-3, 3))
def test_r_minimum_and_symmetry(beta, s):
    # R^2 = 1 + beta^2 + 2 beta cosh(2 s) with eta = sqrt(beta) e^s
    eta = math.sqrt(beta) * math.exp(s)
    assert r_of_eta(eta, beta) ** 2 == pytest.approx(1 + beta**2 + 2 * beta * math.cosh(2 * s),
                                                     rel=1e-12)
    assert r_of_eta(eta, beta) == pytest.approx(r_of_eta(beta / eta, beta), rel=1e-12)
    assert r_of_eta(math.sqrt(beta), beta) == pytest.approx(1 + beta, rel=1e-14)


@given(etas, betas, st.floats(0, 1e6))
def test_r_matches_width_ratios(eta0, beta, t):
    p = make_params(eta0, beta, 10.0)
    w = analytic_coord_widths(p, t)
    R = r_parameter(p, t)
    assert w.ratio_ph == pytest.approx(R, rel=1e-12)
    assert w.ratio_at == pytest.approx(R, rel=1e-12)


# -- Schmidt number --------------------------------------------------------------------

def _gauss_amp(eta, beta, n=256, argument="exact"):
    p = make_params(eta, beta, 1.0)
    return p, sample_gaussian_amplitude(default_grid(p, 0.0, "gaussian_1d", n=n,
                                                     argument=argument), 0.0, p,
                                        argument=argument)


def test_factorized_has_k_one():
    g = symmetric_grid(128, 6.0, 6.0)
    X, Y = g.mesh()
    res = schmidt_number_svd(AmplitudeGrid(g, np.exp(-X**2 - (Y - 1) ** 2 / 3)))
    assert res.K == pytest.approx(1.0, abs=1e-6)
    assert res.spectrum[0] == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("eta, beta", [(0.05, 0.01), (0.3, 0.5), (1.0, 1.0)])
def test_k_matches_gaussian_closed_form(eta, beta):
    # for a two-mode Gaussian K = marginal / conditional width of either party
    _, a = _gauss_amp(eta, beta, n=512)
    k_expected = math.hypot(eta, beta) * math.hypot(eta, 1 - beta) / eta
    assert schmidt_number_svd(a).K == pytest.approx(k_expected, rel=1e-6)


def test_k_linear_argument_closed_form():
    p, a = _gauss_amp(0.2, 0.3, n=512, argument="linear")
    Q = gaussian_model_precision(p, 0.0, argument="linear")
    k_cov = math.sqrt(Q[0, 0] * Q[1, 1] / np.linalg.det(Q))
    assert schmidt_number_svd(a).K == pytest.approx(k_cov, rel=1e-6)
    assert k_cov == pytest.approx(r_parameter(p, 0.0) / 1.3, rel=1e-12)


def test_spectrum_properties():
    _, a = _gauss_amp(0.3, 0.5)
    res = schmidt_number_svd(a)
    assert np.all(np.diff(res.spectrum) <= 0)
    assert res.spectrum.sum() == pytest.approx(1.0, abs=1e-6)
    assert res.spectrum.min() >= 1e-8
    full = schmidt_number_svd(a, full_spectrum=True)
    assert full.spectrum.size == 256 and full.K == res.K
    assert res.K == pytest.approx(1 / np.sum(full.spectrum**2), rel=1e-12)
    assert res.coverage_ok


def test_swap_and_phase_invariance():
    _, a = _gauss_amp(0.3, 0.2)
    k = schmidt_number_svd(a).K
    assert schmidt_number_svd(a.transpose()).K == pytest.approx(k, abs=1e-10)
    rotated = AmplitudeGrid(a.grid, a.values * np.exp(0.77j))
    assert schmidt_number_svd(rotated).K == pytest.approx(k, abs=1e-10)


def test_refinement_invariance():
    p = make_params(0.05, 0.01, 1.0)
    rep = gaussian_schmidt_report(p, n=512)
    assert not any("converged" in w for w in rep.warnings)
    coarse = gaussian_schmidt_report(p, n=256)
    assert abs(coarse.K / rep.K - 1) < 5e-3


def test_coarse_grid_warns():
    rep = gaussian_schmidt_report(make_params(1.0, 1.0, 1.0), n=16)
    assert any("halved" in w for w in rep.warnings)


def test_truncated_grid_flags_coverage():
    p = make_params(1.0, 0.5, 1.0)
    g = symmetric_grid(64, 1.0, 1.0)
    a = sample_gaussian_amplitude(g, 0.0, p)
    assert not schmidt_number_svd(a).coverage_ok


def test_degenerate_grid():
    g = symmetric_grid(8, 1.0, 1.0)
    with pytest.raises(DegenerateGridError):
        schmidt_number_svd(AmplitudeGrid(g, np.zeros((8, 8))))


def test_schmidt_report_json():
    rep = gaussian_schmidt_report(make_params(0.05, 0.01, 1.0), n=128)
    d = rep.to_dict()
    assert d["K_source"] == "svd:gaussian_1d:128x128"
    assert d["K_R0_rel_diff"] == pytest.approx(abs(rep.K - rep.R0) / rep.R0)
    assert len(d["singular_spectrum"]) >= 1 and d["margins"] is None


# -- uncertainty products -----------------------------------------------------------------

def test_t0_products_equal_inverse_k():
    for eta0, beta in ((0.05, 0.1), (1.0, 1.0), (1e-6, 1e-3)):
        rep = uncertainty_products(make_params(eta0, beta, 1.0), 0.0)
        assert rep.products["cond_ph"] * rep.K == pytest.approx(1.0, rel=1e-12)
        assert rep.products["cond_at"] * rep.K == pytest.approx(1.0, rel=1e-12)
        assert rep.violations() == []


def test_half_at_beta_one():
    rep = uncertainty_products(make_params(1.0, 1.0, 1.0), 0.0)
    assert rep.products["cond_ph"] == pytest.approx(0.5, rel=1e-15)


def test_heisenberg_products_equal_k():
    p = make_params(0.05, 0.1, 100.0)
    rep = uncertainty_products(p, 3.0)
    assert rep.products["heis_ph"] == pytest.approx(rep.K, rel=1e-14)
    assert rep.products["heis_at"] == pytest.approx(rep.K, rel=1e-14)


def test_long_time_limits():
    p = make_params(0.05, 0.1, 100.0)
    ts = np.array([0, 1e3, 1e4, 1e5, 1e6])
    ph, at = conditional_products(p, ts)
    assert np.all(np.diff(ph) > 0) and np.all(np.diff(at) < 0)
    assert 1 - ph[-1] < 2e-3 and at[-1] < 1e-3


def test_cond_ph_alternative_form():
    p = make_params(0.3, 0.2, 5.0)
    t = 7.0
    rep = uncertainty_products(p, t)
    eta = rep.eta_t
    assert rep.products["cond_ph"] == pytest.approx(
        math.sqrt((eta**2 + 1) / (0.09 + 1)) / rep.R_t, rel=1e-14)


def _margins_mp(eta0, beta, tau, t):
    mpmath.mp.dps = 60
    e0, b = mpmath.mpf(eta0), mpmath.mpf(beta)
    eta = e0 * mpmath.sqrt(1 + (mpmath.mpf(t) / tau) ** 2)
    K = mpmath.sqrt(1 + e0**2) * mpmath.sqrt(e0**2 + b**2) / e0
    R = mpmath.sqrt((eta + b**2 / eta) * (eta + 1 / eta))
    ph = eta / mpmath.sqrt(eta**2 + b**2) / mpmath.sqrt(1 + e0**2)
    at = e0 / mpmath.sqrt(e0**2 + b**2) / mpmath.sqrt(1 + eta**2)
    return {"ph_over_R": ph**2 * R**2 - 1, "ph_over_K": ph**2 * K**2 - 1,
            "ph_below_1": 1 - ph**2, "at_below_K": 1 - at**2 * K**2, "K_above_1": K**2 - 1}


@settings(max_examples=60, deadline=None)
@given(st.floats(1e-10, 1e3), betas, st.floats(0.1, 1e3), st.floats(0, 1e4))
def test_margins_against_high_precision(eta0, beta, tau, t):
    got = bound_margins(make_params(eta0, beta, tau), t)
    want = _margins_mp(eta0, beta, tau, t)
    for key, value in want.items():
        assert got[key] == pytest.approx(float(value), rel=1e-9, abs=1e-40)


@settings(max_examples=60, deadline=None)
@given(st.floats(1e-10, 1e3), betas, st.floats(0.1, 1e3), st.floats(1e-3, 1e4))
def test_no_violations_for_positive_t(eta0, beta, tau, t):
    assert uncertainty_products(make_params(eta0, beta, tau), t).violations() == []


def test_numeric_k_is_compared_directly():
    p = make_params(0.05, 0.1, 100.0)
    bad = uncertainty_products(p, 10.0, K=0.5, K_source="test")
    assert bad.violations()


# -- hidden entanglement ------------------------------------------------------------------

def test_hidden_interval_around_sqrt_beta():
    beta = 0.01
    p = make_params(1e-4, beta, 100.0)
    intervals = hidden_entanglement_scan(p, (0.0, 1e6))
    assert len(intervals) == 1
    iv = intervals[0]
    assert iv.eta_start < math.sqrt(beta) < iv.eta_end
    # edges solve |R - 1| = 0.1
    assert r_of_eta(iv.eta_start, beta) == pytest.approx(1.1, rel=1e-10)
    assert r_of_eta(iv.eta_end, beta) == pytest.approx(1.1, rel=1e-10)
    assert iv.t_start < iv.t_end


def test_hidden_empty_when_beta_large():
    # R(sqrt(beta)) = 1 + beta >= 1.1
    p = make_params(1e-4, 0.15, 100.0)
    assert hidden_entanglement_scan(p, (0.0, 1e6)) == []


def test_hidden_empty_for_large_eta0():
    assert hidden_entanglement_scan(make_params(1.0, 1.0, 1.0), (0.0, 1e3)) == []


def test_hidden_precondition():
    p = make_params(1e-3, 1e-6, 1.0)
    assert r_parameter(p, 0.0) == pytest.approx(1 + 1e-6, rel=1e-9)
    with pytest.raises(ValueError, match="threshold"):
        hidden_entanglement_scan(p, (0.0, 10.0))
    with pytest.raises(ValueError):
        hidden_entanglement_scan(make_params(1e-4, 0.01, 1.0), (5.0, 1.0))


@pytest.mark.parametrize("beta", [0.1, 0.5])
def test_gaussian_model_product_point(beta):
    # K^2 - 1 = (eta^2 - beta(1 - beta))^2 / eta^2 for the sampled Gaussian
    eta = math.sqrt(beta * (1 - beta))
    _, a = _gauss_amp(eta, beta, n=512)
    assert schmidt_number_svd(a).K == pytest.approx(1.0, abs=1e-8)
    assert r_of_eta(eta, beta) > 1 + beta
