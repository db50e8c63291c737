import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from atomphoton.coordinate import default_grid, sample_density
from atomphoton.core import make_params
from atomphoton.exceptions import EmptySliceError, NonConvergenceError
from atomphoton.grid import DensityGrid, Grid2D, symmetric_grid
from atomphoton.widths import (WidthReport, analytic_coord_widths, analytic_momentum_widths,
                               check_reciprocity, conditional_width, conditional_widths, fwhm,
                               marginal_width, numeric_widths, standardized_width,
                               tail_mass_fraction)

etas = st.floats(1e-8, 1e4)
betas = st.floats(1e-9, 1.0)


# -- 1D estimators -----------------------------------------------------------------

def test_gaussian_calibration():
    x = np.linspace(-0.5, 0.5, 2001)
    assert standardized_width(x, np.exp(-x**2 / 0.05**2)) == pytest.approx(0.05, rel=1e-6)


def test_exponential_packet():
    t = 20.0
    u = np.linspace(0, t, 20001)
    d = np.exp(u - t)
    d[0] *= 0.5
    d[-1] *= 0.5
    assert standardized_width(u, d) == pytest.approx(math.sqrt(2), abs=1e-3)


def test_uniform():
    x = np.linspace(0, 1, 100001)
    assert standardized_width(x, np.ones_like(x)) == pytest.approx(math.sqrt(2 / 12), rel=1e-4)


def test_lorentzian_not_convergent():
    x = np.linspace(-50, 50, 4001)
    d = 1 / (x**2 + 0.25)
    assert tail_mass_fraction(x, d) > 1e-3
    with pytest.raises(NonConvergenceError):
        standardized_width(x, d)
    # the estimate is still available on request
    assert standardized_width(x, d, check_tails=False) > 1


def test_zero_mass():
    with pytest.raises(EmptySliceError):
        standardized_width(np.linspace(0, 1, 5), np.zeros(5))
    with pytest.raises(ValueError):
        standardized_width(np.linspace(0, 1, 3), [1, -1, 1])


def test_fwhm():
    x = np.linspace(-10, 10, 20001)
    assert fwhm(x, 1 / (x**2 + 0.25)) == pytest.approx(1.0, abs=1e-6)
    assert fwhm(x, np.exp(-x**2)) == pytest.approx(2 * math.sqrt(math.log(2)), abs=1e-6)
    with pytest.raises(NonConvergenceError):
        fwhm(x, np.ones_like(x))


# -- sampled densities ---------------------------------------------------------------

def _gauss(eta, beta, n=512, t=0.0):
    p = make_params(eta, beta, 1.0)
    return p, sample_density(default_grid(p, t, "gaussian_1d", n=n), t, p, "gaussian_1d")


def test_conditional_photon_width_example():
    _, d = _gauss(0.05, 0.1)
    # 1/w^2 = 1/A^2 + beta^2/a^2 = 1 + 4
    assert conditional_width(d, "x_ph") == pytest.approx(1 / math.sqrt(5), abs=1e-4)


@pytest.mark.parametrize("eta, beta", [(0.05, 0.1), (1.0, 0.5), (20.0, 0.01)])
def test_conditional_atom_width_oracle(eta, beta):
    _, d = _gauss(eta, beta, n=1024)
    expected = eta / math.sqrt(eta**2 + (1 - beta) ** 2)
    assert conditional_width(d, "x_at") == pytest.approx(expected, abs=1e-4)


def test_slices_have_equal_width_for_gaussian():
    _, d = _gauss(0.3, 0.2)
    nodes, widths = conditional_widths(d, "x_ph")
    assert len(nodes) == 9
    np.testing.assert_allclose(widths, widths[0], rtol=1e-9)


def test_product_density_conditional_equals_marginal():
    g = symmetric_grid(256, 8.0, 8.0)
    X, Y = g.mesh()
    d = DensityGrid(g, np.exp(-X**2 / 1.5**2 - Y**2 / 0.7**2))
    assert conditional_width(d, "x_ph") == pytest.approx(marginal_width(d, "x_ph"), rel=1e-12)
    assert conditional_width(d, "x_at") == pytest.approx(marginal_width(d, "x_at"), rel=1e-12)


def test_empty_slice():
    g = Grid2D(5, 5, 0, 4, 0, 4)
    v = np.zeros((5, 5))
    v[2, 2] = 1.0
    d = DensityGrid(g, v)
    with pytest.raises(EmptySliceError):
        conditional_width(d, "x_ph", fixed_values=[0.0])


def test_under_resolved_slice_warns():
    g = symmetric_grid(9, 4.0, 4.0)
    X, Y = g.mesh()
    d = DensityGrid(g, np.exp(-(X - Y) ** 2 / 0.5**2 - (X + Y) ** 2 / 4.0))
    with pytest.warns(RuntimeWarning, match="under-resolved"):
        conditional_width(d, "x_ph", check_tails=False)


def test_marginal_width_examples():
    _, d = _gauss(0.05, 0.1)
    assert marginal_width(d, "x_ph") == pytest.approx(0.9014, abs=1e-3)
    _, d = _gauss(0.05, 0.001)
    assert marginal_width(d, "x_ph") == pytest.approx(math.hypot(1, 0.05), abs=1e-3)


def test_full_1d_photon_marginal_small_eta():
    t = 20.0
    p = make_params(0.05, 0.01, 100.0)
    d = sample_density(default_grid(p, t, "full_1d", n=1024), t, p)
    assert marginal_width(d, "x_ph") == pytest.approx(math.sqrt(2), abs=5e-2)


def test_full_1d_photon_marginal_oracle(recoil_params):
    # x_ph = X + (1 - beta) u with independent u (truncated exponential) and X (Gaussian)
    from scipy import integrate
    t, p = 20.0, recoil_params
    norm = -math.expm1(-t)
    m1 = integrate.quad(lambda u: u * math.exp(u - t) / norm, 0, t)[0]
    m2 = integrate.quad(lambda u: u * u * math.exp(u - t) / norm, 0, t)[0]
    a = 0.05 * math.hypot(1, t / 100.0)
    expected = math.sqrt(2 * (1 - p.beta) ** 2 * (m2 - m1**2) + a**2)
    d = sample_density(default_grid(p, t, "full_1d", n=1024), t, p)
    assert marginal_width(d, "x_ph") == pytest.approx(expected, rel=1e-4)


def test_numeric_converges_under_refinement():
    exact = 1 / math.sqrt(1 + 0.1**2 / 0.2**2)
    errs = []
    for n in (64, 128, 256):
        _, d = _gauss(0.2, 0.1, n=n)
        errs.append(abs(conditional_width(d, "x_ph") - exact))
    assert errs[-1] <= max(errs[0], 1e-13)
    assert errs[-1] < 1e-10


# -- closed forms --------------------------------------------------------------------

def test_analytic_examples():
    p = make_params(1e-3, 1e-3, 1.0)
    assert analytic_coord_widths(p, 0.0).rel_coinc_ph == pytest.approx(1 / math.sqrt(2))
    r = analytic_coord_widths(make_params(1e-10, 1e-8, 1.0), 0.0)
    assert r.rel_coinc_ph == pytest.approx(1e-2 / math.sqrt(1 + 1e-4), rel=1e-12)
    r = analytic_coord_widths(make_params(100.0, 0.1, 1.0), 0.0)
    assert r.rel_single_ph == pytest.approx(100.0, rel=1e-4)


def test_analytic_uses_a_of_t():
    p = make_params(0.05, 0.1, 100.0)
    r = analytic_coord_widths(p, 100.0)
    a = 0.05 * math.sqrt(2)
    assert r.natural_at == pytest.approx(a)
    assert r.coinc_at == pytest.approx(a / math.sqrt(1 + a**2))
    assert r.single_at == pytest.approx(math.sqrt(a**2 + 0.01))


def test_momentum_examples():
    r = analytic_momentum_widths(make_params(1.0, 1.0, 1.0))
    for v in (r.rel_coinc_ph, r.rel_single_ph, r.rel_coinc_at, r.rel_single_at):
        assert min(abs(v - 1 / math.sqrt(2)), abs(v - math.sqrt(2))) < 1e-15


@given(etas, betas, st.floats(0.1, 1e3), st.floats(0, 1e4))
def test_identities_and_reciprocity(eta0, beta, tau, t):
    p = make_params(eta0, beta, tau)
    mom = analytic_momentum_widths(p)
    crd0 = analytic_coord_widths(p, 0.0)
    assert mom.coinc_at == pytest.approx(crd0.rel_coinc_ph, rel=1e-14)
    assert mom.single_at == pytest.approx(crd0.rel_single_ph, rel=1e-14)
    assert mom.coinc_ph == pytest.approx(crd0.rel_coinc_at, rel=1e-14)
    assert mom.single_ph == pytest.approx(crd0.rel_single_at, rel=1e-14)
    assert mom.coinc_ph * mom.single_at == pytest.approx(1.0, rel=1e-14)
    res = check_reciprocity(analytic_coord_widths(p, t))
    assert res.coinc_at_single_ph < 1e-14 and res.coinc_ph_single_at < 1e-14
    assert res.aspect_ratio < 1e-14


@given(etas, betas)
def test_single_at_least_coincidence(eta, beta):
    r = analytic_coord_widths(make_params(eta, beta, 1.0), 0.0)
    assert r.single_ph >= r.coinc_ph and r.single_at >= r.coinc_at


@settings(max_examples=50)
@given(betas, st.floats(-8, 4), st.floats(0.01, 1.0))
def test_curve_monotonicity(beta, le, step):
    lo = analytic_coord_widths(make_params(10**le, beta, 1.0), 0.0)
    hi = analytic_coord_widths(make_params(10 ** (le + step), beta, 1.0), 0.0)
    slack = 1e-15
    assert hi.rel_coinc_ph >= lo.rel_coinc_ph * (1 - slack)
    assert hi.rel_single_ph >= lo.rel_single_ph * (1 - slack)
    assert hi.rel_coinc_at <= lo.rel_coinc_at * (1 + slack)
    assert hi.rel_single_at <= lo.rel_single_at * (1 + slack)
    assert lo.rel_coinc_ph <= 1 and lo.rel_single_ph >= 1
    assert lo.rel_coinc_at <= 1 and lo.rel_single_at >= 1 - slack


def test_numeric_reciprocity_gaussian():
    for eta in (0.05, 1.0, 20.0):
        p, d = _gauss(eta, 0.01, n=1024)
        r = check_reciprocity(numeric_widths(d, p, 0.0))
        assert r.coinc_at_single_ph < 1e-2 and r.coinc_ph_single_at < 1e-2


def test_numeric_reciprocity_full_1d(recoil_params):
    t = 5.0
    d = sample_density(default_grid(recoil_params, t, "full_1d", n=1024), t, recoil_params)
    r = check_reciprocity(numeric_widths(d, recoil_params, t))
    assert r.coinc_at_single_ph < 1 and r.coinc_ph_single_at < 1


def test_report_validation_and_json():
    p = make_params(0.05, 0.1, 1.0)
    with pytest.raises(ValueError):
        WidthReport(0.0, 1, 1, 1, 1, 1, "analytic", "coordinate", p)
    with pytest.raises(ValueError):
        WidthReport(1, 1, 1, 1, 1, 1, "analytic", "phase", p)
    r = analytic_coord_widths(p, 5.0)
    assert '"space": "coordinate"' in r.to_json()
    assert r.to_dict()["long_time_valid"] is True
    assert r.to_dict()["params"]["beta"] == 0.1


def test_numeric_source_tag():
    p, d = _gauss(0.5, 0.1, n=128)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        r = numeric_widths(d, p, 0.0)
    assert r.source == "numeric:gaussian_1d:128x128"
