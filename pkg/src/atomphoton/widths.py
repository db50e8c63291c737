"""Wave-packet widths: numeric estimators, closed forms and reciprocity checks.

All widths use the *standardized* convention ``w = sqrt(2) * sigma``, which
returns exactly ``a`` for a density proportional to ``exp(-x^2 / a^2)``.
Coincidence (conditional) widths are taken at a fixed value of the partner
coordinate and maximized over a set of such values; single-particle
(marginal) widths are taken after integrating the partner out.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .core import Params, eta_at, in_validity_domain, packet_width_a
from .exceptions import EmptySliceError, NonConvergenceError
from .grid import DensityGrid

TAIL_TOLERANCE = 1e-3
N_SLICES = 9
SLICE_SPAN = 2.0

# which grid axis carries each particle, per representation
_PARTICLE_AXES = {
    "coordinate": {"at": "x_at", "ph": "x_ph"},
    "momentum": {"at": "u", "ph": "kappa"},
}


# -- 1D estimators ---------------------------------------------------------

def _edge_tail(x, d, side, center, band):
    """Mass beyond one grid edge, extrapolating the local power-law decay."""
    edge, inner = (-1, -1 - band) if side == "right" else (0, band)
    d_e, d_i = d[edge], d[inner]
    if d_e <= 0.0:
        return 0.0
    if d_i <= d_e:
        # density does not decay towards the edge: a hard support boundary
        return 0.0
    r_e = abs(x[edge] - center)
    r_i = abs(x[inner] - center)
    if r_i <= 0.0 or r_e <= r_i:
        return d_e * r_e
    power = math.log(d_i / d_e) / math.log(r_e / r_i)
    if power <= 1.0:
        return math.inf
    return d_e * r_e / (power - 1.0)


def tail_mass_fraction(x, density):
    """Estimated fraction of the mass lying beyond both ends of the grid.

    Near each edge the density is modelled as a power law in the distance
    from the peak, with the exponent read off from the outermost 5 % of the
    grid; the extrapolated tail is then integrated analytically.  Gaussian
    and exponential tails give a tiny estimate, Lorentzian (``1/x^2``) tails
    a large one.  Edges where the density does not decay are treated as hard
    boundaries of the support.
    """
    x = np.asarray(x, dtype=float)
    d = np.asarray(density, dtype=float)
    total = d.sum() * (x[1] - x[0])
    if total <= 0:
        return math.inf
    band = max(1, x.size // 20)
    center = x[int(np.argmax(d))]
    tail = _edge_tail(x, d, "left", center, band) + _edge_tail(x, d, "right", center, band)
    return tail / total


def standardized_width(x, density, check_tails=True, tail_tolerance=TAIL_TOLERANCE):
    """``sqrt(2)`` times the standard deviation of a density sampled on uniform ``x``.

    Parameters
    ----------
    x : array_like
        Uniformly spaced sample points.
    density : array_like
        Non-negative samples (need not be normalized).
    check_tails : bool
        Refuse to answer when :func:`tail_mass_fraction` exceeds
        ``tail_tolerance``.

    Raises
    ------
    NonConvergenceError
        The second moment depends on mass outside the grid.
    EmptySliceError
        The samples carry no mass.
    """
    x = np.asarray(x, dtype=float)
    d = np.asarray(density, dtype=float)
    if np.any(d < 0) or not np.all(np.isfinite(d)):
        raise ValueError("density samples must be finite and non-negative")
    mass = d.sum()
    if not mass > 0:
        raise EmptySliceError("density has zero total mass")
    if check_tails:
        tail = tail_mass_fraction(x, d)
        if tail > tail_tolerance:
            raise NonConvergenceError(
                f"estimated tail mass beyond the grid {tail:.3g} exceeds {tail_tolerance:g}")
    mean = np.dot(x, d) / mass
    var = np.dot((x - mean) ** 2, d) / mass
    return math.sqrt(2.0 * var)


def fwhm(x, density):
    """Full width at half maximum with linear interpolation of the crossings."""
    x = np.asarray(x, dtype=float)
    d = np.asarray(density, dtype=float)
    k = int(np.argmax(d))
    half = 0.5 * d[k]
    if not half > 0:
        raise EmptySliceError("density has no maximum")
    left = np.nonzero(d[:k] < half)[0]
    right = np.nonzero(d[k:] < half)[0]
    if left.size == 0 or right.size == 0:
        raise NonConvergenceError("half maximum not reached inside the grid")
    i = left[-1]
    j = k + right[0]
    x_l = x[i] + (half - d[i]) * (x[i + 1] - x[i]) / (d[i + 1] - d[i])
    x_r = x[j - 1] + (half - d[j - 1]) * (x[j] - x[j - 1]) / (d[j] - d[j - 1])
    return float(x_r - x_l)


# -- widths of sampled 2D densities -------------------------------------------

def _other(d: DensityGrid, axis):
    names = d.axes
    if isinstance(axis, str):
        if axis not in names:
            raise ValueError(f"unknown axis {axis!r}; grid axes are {names}")
        return names[1 - names.index(axis)]
    return names[1 - int(axis)]


def default_fixed_values(d: DensityGrid, fixed_axis, n_slices=N_SLICES, span=SLICE_SPAN):
    """Slice positions spanning ``+-span`` marginal widths around the marginal peak.

    Positions are clipped to the region where the marginal exceeds ``1e-6`` of
    its maximum, so every slice carries mass.
    """
    c, m = d.marginal(fixed_axis)
    peak = c[int(np.argmax(m))]
    w = standardized_width(c, m, check_tails=False)
    support = c[m >= 1e-6 * m.max()]
    values = peak + span * w * np.linspace(-1.0, 1.0, n_slices)
    return np.clip(values, support.min(), support.max())


def conditional_widths(d: DensityGrid, vary_axis, fixed_values=None, check_tails=True):
    """Per-slice widths along ``vary_axis``; returns ``(fixed_nodes, widths)``."""
    fixed_axis = _other(d, vary_axis)
    if fixed_values is None:
        fixed_values = default_fixed_values(d, fixed_axis)
    spacing = d.grid.dy if d.axes.index(fixed_axis) == 0 else d.grid.dx
    nodes, widths = [], []
    for value in np.atleast_1d(fixed_values):
        coords, profile, node = d.slice_at(fixed_axis, value)
        if not profile.sum() > 0:
            raise EmptySliceError(f"slice at {fixed_axis}={node:.6g} has zero mass")
        w = standardized_width(coords, profile, check_tails=check_tails)
        if w < 2.0 * spacing:
            warnings.warn(f"conditional width {w:.3g} is under-resolved by grid spacing "
                          f"{spacing:.3g}", RuntimeWarning, stacklevel=2)
        nodes.append(node)
        widths.append(w)
    return np.array(nodes), np.array(widths)


def conditional_width(d: DensityGrid, vary_axis, fixed_values=None, check_tails=True):
    """Coincidence width along ``vary_axis``, maximized over the fixed values.

    ``fixed_values`` defaults to :func:`default_fixed_values` (nine slices).

    Raises
    ------
    EmptySliceError
        A requested slice has zero mass.
    """
    return float(conditional_widths(d, vary_axis, fixed_values, check_tails)[1].max())


def marginal_width(d: DensityGrid, keep_axis, check_tails=True):
    """Single-particle width of ``keep_axis`` after integrating the other axis out."""
    coords, m = d.marginal(keep_axis)
    return standardized_width(coords, m, check_tails=check_tails)


# -- reports -------------------------------------------------------------------

@dataclass(frozen=True)
class WidthReport:
    """Coincidence and single-particle widths of both particles.

    ``natural_ph`` and ``natural_at`` are the unentangled reference widths
    used to form the relative widths (``c/gamma`` and ``a(t)`` in coordinate
    space, ``gamma/c`` and ``1/a0`` in momentum space).
    """

    coinc_ph: float
    single_ph: float
    coinc_at: float
    single_at: float
    natural_ph: float
    natural_at: float
    source: str
    space: str
    params: Params
    t: float | None = None
    notes: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.space not in _PARTICLE_AXES:
            raise ValueError(f"space must be one of {tuple(_PARTICLE_AXES)}")
        for name in ("coinc_ph", "single_ph", "coinc_at", "single_at", "natural_ph", "natural_at"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")

    @property
    def rel_coinc_ph(self):
        return self.coinc_ph / self.natural_ph

    @property
    def rel_single_ph(self):
        return self.single_ph / self.natural_ph

    @property
    def rel_coinc_at(self):
        return self.coinc_at / self.natural_at

    @property
    def rel_single_at(self):
        return self.single_at / self.natural_at

    @property
    def ratio_ph(self):
        """Single-particle over coincidence width of the photon."""
        return self.single_ph / self.coinc_ph

    @property
    def ratio_at(self):
        return self.single_at / self.coinc_at

    def to_dict(self):
        return {
            "space": self.space, "source": self.source, "t": self.t,
            "params": self.params.as_dict(),
            "coinc_ph": self.coinc_ph, "single_ph": self.single_ph,
            "coinc_at": self.coinc_at, "single_at": self.single_at,
            "natural_ph": self.natural_ph, "natural_at": self.natural_at,
            "rel_coinc_ph": self.rel_coinc_ph, "rel_single_ph": self.rel_single_ph,
            "rel_coinc_at": self.rel_coinc_at, "rel_single_at": self.rel_single_at,
            "long_time_valid": None if self.t is None else bool(in_validity_domain(self.t)),
            "notes": list(self.notes),
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)


def analytic_coord_widths(p: Params, t) -> WidthReport:
    """Closed-form coordinate-space widths at time ``t`` (units ``c/gamma``)."""
    eta = eta_at(p, t)
    a = packet_width_a(p, t)
    b = p.beta
    return WidthReport(
        coinc_ph=eta / math.hypot(eta, b),
        single_ph=math.hypot(1.0, eta),
        coinc_at=a / math.hypot(1.0, eta),
        single_at=a * math.hypot(eta, b) / eta,
        natural_ph=1.0, natural_at=a,
        source="analytic", space="coordinate", params=p, t=float(t),
    )


def analytic_momentum_widths(p: Params) -> WidthReport:
    """Closed-form momentum widths; time independent.

    The photon entries are detuning widths in units of ``gamma/c`` and the atom
    entries recoil-momentum widths in units of ``1/a0``; relative and absolute
    widths therefore coincide in these units.
    """
    e0, b = p.eta0, p.beta
    return WidthReport(
        coinc_ph=1.0 / math.hypot(1.0, e0),
        single_ph=math.hypot(e0, b) / e0,
        coinc_at=e0 / math.hypot(e0, b),
        single_at=math.hypot(1.0, e0),
        natural_ph=1.0, natural_at=1.0,
        source="analytic", space="momentum", params=p,
    )


def numeric_widths(d: DensityGrid, p: Params, t=None, space="coordinate",
                   natural_ph=None, natural_at=None, fixed_values=None) -> WidthReport:
    """Measure all four widths on a sampled density.

    Natural widths default to ``A`` (metadata, else 1) and ``a(t)`` in
    coordinate space and to 1 in momentum space.
    """
    axes = _PARTICLE_AXES[space]
    if natural_ph is None:
        natural_ph = float(d.metadata.get("A", 1.0)) if space == "coordinate" else 1.0
    if natural_at is None:
        natural_at = float(packet_width_a(p, t)) if space == "coordinate" else 1.0
    fv = fixed_values or {}
    report = WidthReport(
        coinc_ph=conditional_width(d, axes["ph"], fv.get("ph")),
        single_ph=marginal_width(d, axes["ph"]),
        coinc_at=conditional_width(d, axes["at"], fv.get("at")),
        single_at=marginal_width(d, axes["at"]),
        natural_ph=natural_ph, natural_at=natural_at,
        source=f"numeric:{d.metadata.get('model', 'grid')}:{d.grid.n_x}x{d.grid.n_y}",
        space=space, params=p, t=None if t is None else float(t),
    )
    return report


@dataclass(frozen=True)
class ReciprocityResiduals:
    """Deviations from the two reciprocity relations and the aspect-ratio identity."""

    coinc_at_single_ph: float
    coinc_ph_single_at: float
    aspect_ratio: float

    def max(self):
        return max(self.coinc_at_single_ph, self.coinc_ph_single_at, self.aspect_ratio)

    def to_dict(self):
        return {"coinc_at_single_ph": self.coinc_at_single_ph,
                "coinc_ph_single_at": self.coinc_ph_single_at,
                "aspect_ratio": self.aspect_ratio}


def check_reciprocity(r: WidthReport) -> ReciprocityResiduals:
    """Residuals of ``rel_coinc_at * rel_single_ph = 1`` and ``rel_coinc_ph * rel_single_at = 1``.

    In momentum space the same field pairs express ``dk_c * dq_s = 1`` and
    ``dq_c * dk_s = 1``.  ``aspect_ratio`` compares the absolute product
    ``coinc_at * single_ph`` with ``natural_at * natural_ph``
    (``a(t) * c/gamma`` in coordinate space).
    """
    return ReciprocityResiduals(
        coinc_at_single_ph=abs(r.rel_coinc_at * r.rel_single_ph - 1.0),
        coinc_ph_single_at=abs(r.rel_coinc_ph * r.rel_single_at - 1.0),
        aspect_ratio=abs(r.coinc_at * r.single_ph / (r.natural_at * r.natural_ph) - 1.0),
    )
