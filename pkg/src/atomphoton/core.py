"""Dimensionless parameters and the time-dependent control quantities.

Units are fixed once for the whole package: ``c = gamma = 1``, so lengths are
measured in ``c/gamma`` (the photon packet length), times in ``1/gamma`` and
photon wave numbers in ``gamma/c``.  Atom momenta are measured in ``1/a0``.
With these units the model depends on three numbers only:

``eta0``
    initial control parameter ``gamma * a0 / c`` (the initial atomic packet
    size in units of the photon packet length),
``beta``
    velocity ratio ``v_rec / c``,
``tau_spr``
    spreading time ``M a0**2`` in units of ``1/gamma``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .exceptions import DomainError

#: Times below this (in units of 1/gamma) are outside the long-time solution.
LONG_TIME_VALIDITY = 3.0


@dataclass(frozen=True)
class Params:
    """Validated physical configuration. Build with :func:`make_params`."""

    eta0: float
    beta: float
    tau_spr: float

    def __post_init__(self):
        for name in ("eta0", "beta", "tau_spr"):
            value = getattr(self, name)
            if not isinstance(value, (int, float, np.floating, np.integer)):
                raise DomainError(name, value, "a real number")
            if not math.isfinite(value):
                raise DomainError(name, value, "finiteness")
            object.__setattr__(self, name, float(value))
        if self.eta0 <= 0:
            raise DomainError("eta0", self.eta0, "eta0 > 0")
        if self.tau_spr <= 0:
            raise DomainError("tau_spr", self.tau_spr, "tau_spr > 0")
        if not 0 < self.beta <= 1:
            raise DomainError("beta", self.beta, "0 < beta <= 1")

    def as_dict(self):
        return asdict(self)


def make_params(eta0, beta, tau_spr):
    """Return validated :class:`Params`.

    Raises
    ------
    DomainError
        If ``eta0 <= 0``, ``tau_spr <= 0``, ``beta`` is not in ``(0, 1]`` or
        any value is not finite.  ``err.field`` names the offending input.
    """
    return Params(eta0=eta0, beta=beta, tau_spr=tau_spr)


def check_time(t):
    """Validate a time argument (scalar or array) and return it as float(s)."""
    t_arr = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(t_arr)) or np.any(t_arr < 0):
        raise DomainError("t", t, "finite t >= 0")
    return float(t_arr) if t_arr.ndim == 0 else t_arr


def in_validity_domain(t):
    """True where ``t`` is long enough for the asymptotic solution to apply."""
    return np.asarray(t) >= LONG_TIME_VALIDITY


def packet_width_a(p: Params, t):
    """Width ``a(t)`` of the freely spreading atomic packet.

    ``a(t) = eta0 * sqrt(1 + (t / tau_spr)**2)`` in units of ``c/gamma``.
    Accepts scalar or array ``t``.
    """
    t = check_time(t)
    return p.eta0 * np.hypot(1.0, np.asarray(t) / p.tau_spr)[()]


def eta_at(p: Params, t):
    """Control parameter ``eta(t) = gamma a(t) / c``.

    In the package units this coincides with :func:`packet_width_a`; the two
    names are kept apart because they play different roles in the formulas.
    """
    return packet_width_a(p, t)


def time_at_eta(p: Params, eta):
    """Inverse of :func:`eta_at`: the time at which ``eta(t) = eta``.

    Returns ``nan`` for ``eta < eta0`` (never reached).
    """
    ratio = np.asarray(eta, dtype=float) / p.eta0
    with np.errstate(invalid="ignore"):
        t = p.tau_spr * np.sqrt(ratio**2 - 1.0)
    return t[()]
