"""Schmidt number, the width-ratio parameter R and conditional uncertainty products."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq

from .coordinate import default_grid, sample_gaussian_amplitude
from .core import Params, eta_at, in_validity_domain, time_at_eta
from .exceptions import DegenerateGridError
from .grid import AmplitudeGrid

SPECTRUM_CUTOFF = 1e-8
# relative change of K under grid halving above which a report is flagged
REFINEMENT_TOLERANCE = 5e-3
COVERAGE_TOLERANCE = 1e-6
# relative slack for the equalities that hold at t = 0
EQUALITY_RTOL = 1e-12


def r_of_eta(eta, beta):
    """``R = sqrt(eta + beta^2/eta) * sqrt(eta + 1/eta)`` for scalar or array ``eta``."""
    eta = np.asarray(eta, dtype=float)
    return (np.hypot(eta, beta) * np.hypot(1.0, eta) / eta)[()]


def r_parameter(p: Params, t):
    """Ratio of single-particle to coincidence widths at time ``t``.

    Its minimum over ``eta`` is ``1 + beta``, reached at ``eta = sqrt(beta)``.
    """
    return r_of_eta(eta_at(p, t), p.beta)


# -- Schmidt decomposition -----------------------------------------------------

class SchmidtResult(NamedTuple):
    K: float
    spectrum: np.ndarray
    coverage_ok: bool


def schmidt_number_svd(a: AmplitudeGrid, cutoff=SPECTRUM_CUTOFF, full_spectrum=False):
    """Schmidt number of a sampled two-particle amplitude.

    The amplitude matrix ``psi(x_i, y_j) sqrt(dx dy)`` is decomposed by SVD;
    ``p_n = s_n^2 / sum(s^2)`` are the Schmidt probabilities and
    ``K = 1 / sum(p_n^2)``.  The returned spectrum is non-increasing and cut at
    ``cutoff`` unless ``full_spectrum``; ``K`` always uses the full spectrum.
    ``coverage_ok`` is False when the amplitude on the grid border exceeds
    ``1e-6`` of its peak, i.e. the grid truncates the state.

    Raises
    ------
    DegenerateGridError
        If the sampled norm is below ``1e-12``.
    """
    M = a.values * math.sqrt(a.grid.cell_area)
    s = np.linalg.svd(M, compute_uv=False)
    norm = float(np.sum(s**2))
    if norm < 1e-12:
        raise DegenerateGridError(f"sampled amplitude norm {norm:.3g} is below 1e-12")
    probs = s**2 / norm
    K = 1.0 / float(np.sum(probs**2))
    mag = np.abs(a.values)
    border = max(mag[0].max(), mag[-1].max(), mag[:, 0].max(), mag[:, -1].max())
    coverage_ok = bool(border <= COVERAGE_TOLERANCE * mag.max())
    if not full_spectrum:
        probs = probs[probs >= cutoff]
    return SchmidtResult(K, probs, coverage_ok)


# -- uncertainty products ----------------------------------------------------------

@dataclass(frozen=True)
class EntanglementReport:
    """Degree of entanglement and coordinate-momentum uncertainty products at time ``t``.

    ``products`` holds the single-particle (``heis_*``) and conditional
    (``cond_*``) uncertainty products; ``bounds`` holds
    ``lower = max(1/K, 1/R_t)`` and ``upper = 1``.
    """

    K: float
    R0: float
    R_t: float
    t: float
    eta_t: float
    products: dict
    bounds: dict
    params: Params
    K_source: str = "analytic"
    singular_spectrum: tuple | None = None
    warnings: tuple = field(default_factory=tuple)
    margins: dict | None = None

    def violations(self):
        """Bound violations as human readable strings (empty when consistent).

        With the analytic ``K`` the inequalities are decided on the exact
        ``margins`` (see :func:`bound_margins`), because near ``t = 0`` the
        products differ from their bounds by less than the float resolution.
        A numerically supplied ``K`` is compared directly.
        """
        if self.margins is not None:
            return _margin_violations(self.margins, self.t)
        out = []
        cond_ph = self.products["cond_ph"]
        cond_at = self.products["cond_at"]
        inv_k = 1.0 / self.K
        lower = self.bounds["lower"]
        if not lower <= cond_ph < 1.0:
            out.append(f"t={self.t!r}: cond_ph={cond_ph!r} outside [{lower!r}, 1)")
        if not cond_at <= inv_k * (1 + EQUALITY_RTOL) or inv_k > 1.0:
            out.append(f"t={self.t!r}: cond_at={cond_at!r}, 1/K={inv_k!r} not ordered below 1")
        return out

    @property
    def k_r0_rel_diff(self):
        """``|K - R0| / R0``."""
        return abs(self.K - self.R0) / self.R0

    def to_dict(self):
        return {
            "K": self.K, "K_source": self.K_source, "R0": self.R0, "R_t": self.R_t,
            "K_R0_rel_diff": self.k_r0_rel_diff,
            "t": self.t, "eta_t": self.eta_t, "params": self.params.as_dict(),
            "products": dict(self.products), "bounds": dict(self.bounds),
            "long_time_valid": bool(in_validity_domain(self.t)),
            "singular_spectrum": None if self.singular_spectrum is None
            else [float(x) for x in self.singular_spectrum],
            "warnings": list(self.warnings),
            "margins": None if self.margins is None else dict(self.margins),
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)


def conditional_products(p: Params, t):
    """``(cond_ph, cond_at)``: coincidence coordinate width times coincidence momentum width.

    ``cond_ph = eta/sqrt(eta^2+beta^2) / sqrt(1+eta0^2)`` and
    ``cond_at = eta0/sqrt(eta0^2+beta^2) / sqrt(1+eta^2)`` with ``eta = eta(t)``.
    """
    eta = eta_at(p, t)
    e0, b = p.eta0, p.beta
    cond_ph = (eta / np.hypot(eta, b)) / math.hypot(1.0, e0)
    cond_at = (e0 / math.hypot(e0, b)) / np.hypot(1.0, eta)
    return cond_ph, cond_at


def bound_margins(p: Params, t):
    """Relative excesses of the uncertainty bounds, free of cancellation.

    With ``D = eta(t)^2 - eta0^2 >= 0`` (computed without subtraction):

    ``ph_over_R``  ``cond_ph^2 R_t^2 - 1 = D / (1 + eta0^2)``
    ``ph_over_K``  ``cond_ph^2 K^2 - 1 = beta^2 D / (eta0^2 (eta^2 + beta^2))``
    ``ph_below_1`` ``1 - cond_ph^2``
    ``at_below_K`` ``1 - cond_at^2 K^2 = D / (1 + eta^2)``
    ``K_above_1``  ``K^2 - 1``

    All are positive for ``t > 0``; the first, second and fourth vanish at ``t = 0``.
    """
    e0, b = p.eta0, p.beta
    s = np.asarray(t, dtype=float) / p.tau_spr
    eta = e0 * np.hypot(1.0, s)
    D = e0 * s**2 / (np.hypot(1.0, s) + 1.0) * (eta + e0)
    e2, b2, e02 = eta**2, b**2, e0**2
    return {
        "ph_over_R": float(D / (1.0 + e02)),
        "ph_over_K": float(b2 * D / (e02 * (e2 + b2))),
        "ph_below_1": float((b2 + e02 * e2 + e02 * b2) / ((e2 + b2) * (1.0 + e02))),
        "at_below_K": float(D / (1.0 + e2)),
        "K_above_1": float((b2 + e02**2 + e02 * b2) / e02),
    }


def _margin_violations(m, t):
    out = []
    positive = ("ph_below_1", "K_above_1")
    vanishing = ("ph_over_R", "ph_over_K", "at_below_K")
    for name in positive:
        if not m[name] > 0:
            out.append(f"t={t!r}: bound margin {name}={m[name]!r} is not positive")
    for name in vanishing:
        if t > 0 and not m[name] > 0:
            out.append(f"t={t!r}: bound margin {name}={m[name]!r} is not positive")
        if t == 0 and m[name] != 0:
            out.append(f"t=0: bound margin {name}={m[name]!r} should vanish")
    return out


def uncertainty_products(p: Params, t, K=None, K_source="analytic") -> EntanglementReport:
    """Uncertainty products and their bounds at time ``t``.

    ``K`` defaults to ``R(t=0)``, the Schmidt number of the Gaussian model;
    pass a numerically obtained value together with ``K_source`` to compare.
    """
    eta = float(eta_at(p, t))
    R0 = float(r_parameter(p, 0.0))
    R_t = float(r_of_eta(eta, p.beta))
    K = R0 if K is None else float(K)
    e0, b = p.eta0, p.beta
    # single-particle widths at t=0 times single-particle momentum widths
    heis_ph = math.hypot(1.0, e0) * math.hypot(e0, b) / e0
    heis_at = math.hypot(e0, b) / e0 * math.hypot(1.0, e0)
    cond_ph, cond_at = conditional_products(p, t)
    products = {"heis_ph": heis_ph, "heis_at": heis_at,
                "cond_ph": float(cond_ph), "cond_at": float(cond_at)}
    bounds = {"lower": max(1.0 / K, 1.0 / R_t), "upper": 1.0}
    warns = () if in_validity_domain(t) or t == 0 else (
        f"t={t!r} is shorter than the long-time validity limit",)
    margins = bound_margins(p, t) if K_source == "analytic" else None
    return EntanglementReport(K=K, R0=R0, R_t=R_t, t=float(t), eta_t=eta, products=products,
                              bounds=bounds, params=p, K_source=K_source, warnings=warns,
                              margins=margins)


def gaussian_schmidt_report(p: Params, t=0.0, n=1024, extent_sigmas=8.0, A=1.0,
                            argument="exact", full_spectrum=False):
    """Schmidt number of the Gaussian-model amplitude from a grid SVD.

    The same extents are also sampled with half the points; if ``K`` moves by
    more than 0.5 % between the two the report carries a convergence warning.
    """
    grid = default_grid(p, t, "gaussian_1d", n=n, extent_sigmas=extent_sigmas, A=A,
                        argument=argument)
    fine = schmidt_number_svd(sample_gaussian_amplitude(grid, t, p, A, argument),
                              full_spectrum=full_spectrum)
    coarse = schmidt_number_svd(sample_gaussian_amplitude(grid.halved(), t, p, A, argument))
    warns = []
    if not fine.coverage_ok:
        warns.append("amplitude is not negligible on the grid border; widen --extent-sigmas")
    shift = abs(fine.K - coarse.K) / fine.K
    if shift > REFINEMENT_TOLERANCE:
        warns.append(f"K changes by {shift:.3%} when the grid is halved; not converged")
    base = uncertainty_products(p, t, K=fine.K, K_source=f"svd:gaussian_1d:{n}x{n}")
    return EntanglementReport(
        K=base.K, R0=base.R0, R_t=base.R_t, t=base.t, eta_t=base.eta_t,
        products=base.products, bounds=base.bounds, params=p, K_source=base.K_source,
        singular_spectrum=tuple(float(x) for x in fine.spectrum),
        warnings=base.warnings + tuple(warns),
    )


# -- hidden entanglement -------------------------------------------------------------

class Interval(NamedTuple):
    t_start: float
    t_end: float
    eta_start: float
    eta_end: float


def hidden_entanglement_scan(p: Params, t_range, r_tol=0.1, k_min=1.1, n=2001):
    """Time intervals in which ``|R(t) - 1| < r_tol`` although ``K = R0 > k_min``.

    The range is sampled uniformly in ``log(eta)``, where ``R`` varies
    smoothly, and the interval edges are refined by root finding.  Intervals
    narrower than one sampling step can be missed.

    Raises
    ------
    ValueError
        If ``R0 <= k_min``: the state is not entangled enough for the question
        to make sense.
    """
    R0 = float(r_parameter(p, 0.0))
    if not R0 > k_min:
        raise ValueError(f"R0={R0!r} does not exceed the entanglement threshold k_min={k_min!r}")
    t0, t1 = (float(v) for v in t_range)
    if not 0 <= t0 < t1:
        raise ValueError("t_range must satisfy 0 <= t_start < t_end")
    e0, e1 = float(eta_at(p, t0)), float(eta_at(p, t1))
    etas = np.geomspace(e0, e1, n)

    def excess(eta):
        return abs(float(r_of_eta(eta, p.beta)) - 1.0) - r_tol

    inside = np.abs(r_of_eta(etas, p.beta) - 1.0) < r_tol
    intervals = []
    k = 0
    while k < n:
        if not inside[k]:
            k += 1
            continue
        start = k
        while k + 1 < n and inside[k + 1]:
            k += 1
        stop = k
        lo = e0 if start == 0 else brentq(excess, etas[start - 1], etas[start], xtol=1e-14 * etas[start])
        hi = e1 if stop == n - 1 else brentq(excess, etas[stop], etas[stop + 1], xtol=1e-14 * etas[stop])
        t_lo = t0 if start == 0 else float(time_at_eta(p, lo))
        t_hi = t1 if stop == n - 1 else float(time_at_eta(p, hi))
        intervals.append(Interval(t_lo, t_hi, float(lo), float(hi)))
        k += 1
    return intervals
