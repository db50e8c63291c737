"""Two-particle momentum amplitude in the collinear geometry.

Momenta are dimensionless: ``u = a0 (q + k0)`` for the atom (recoil shifted)
and ``kappa = (k - k0) c / gamma`` for the photon detuning.  In these variables
the amplitude is a Lorentzian resonance on the Doppler line
``kappa = beta u / eta0`` times the Gaussian initial-state factor
``exp(-(u + eta0 kappa)^2 / 2)``.  The constant recoil shift of the resonance
and the slowly varying ``sin(theta_k) / sqrt(omega_k)`` prefactor are absorbed
into the origin of ``kappa`` and into the normalization.
"""

from __future__ import annotations

import math

import numpy as np

from .core import Params
from .grid import AmplitudeGrid, Grid2D

FORMS = ("gauss", "lorentz")


def lorentz_norm(p: Params):
    """Normalization making ``|psi_lorentz|^2`` integrate to one.

    Integrating first along the Doppler direction at fixed ``u + eta0 kappa``
    gives ``2 pi / (1 + beta)`` from the Lorentzian and ``sqrt(pi)`` from the
    Gaussian.
    """
    return math.sqrt((1.0 + p.beta) / (2.0 * math.pi**1.5))


def gauss_norm(p: Params):
    """Normalization of the Gaussian-substituted form (``det Q = (1 + beta)^2``)."""
    return math.sqrt((1.0 + p.beta) / math.pi)


def doppler_detuning(u, p: Params):
    """Resonant photon detuning ``beta u / eta0`` seen by an atom at momentum ``u``."""
    return p.beta * np.asarray(u, dtype=float) / p.eta0


def momentum_amplitude_lorentz(u, kappa, p: Params):
    """``N / (kappa - beta u / eta0 + i/2) * exp(-(u + eta0 kappa)^2 / 2)``."""
    u = np.asarray(u, dtype=float)
    kappa = np.asarray(kappa, dtype=float)
    detuning = kappa - doppler_detuning(u, p)
    return (lorentz_norm(p) / (detuning + 0.5j) * np.exp(-0.5 * (u + p.eta0 * kappa) ** 2))[()]


def momentum_amplitude_gauss(u, kappa, p: Params):
    """Gaussian substitute ``N' exp(-(kappa - beta u/eta0)^2/2 - (u + eta0 kappa)^2/2)``."""
    u = np.asarray(u, dtype=float)
    kappa = np.asarray(kappa, dtype=float)
    detuning = kappa - doppler_detuning(u, p)
    return (gauss_norm(p) * np.exp(-0.5 * detuning**2 - 0.5 * (u + p.eta0 * kappa) ** 2))[()]


def gauss_precision(p: Params):
    """``Q`` with ``|psi_gauss|^2 ~ exp(-v^T Q v)``, ``v = (u, kappa)``."""
    r = p.beta / p.eta0
    L = np.array([[-r, 1.0], [1.0, p.eta0]])
    return L.T @ L


def default_momentum_grid(p: Params, n=512, extent_sigmas=8.0):
    """Grid spanning ``extent_sigmas`` marginal widths of the Gaussian form."""
    Q = gauss_precision(p)
    det = np.linalg.det(Q)
    w_u = math.sqrt(Q[1, 1] / det)
    w_k = math.sqrt(Q[0, 0] / det)
    return Grid2D(n, n, -extent_sigmas * w_u, extent_sigmas * w_u,
                  -extent_sigmas * w_k, extent_sigmas * w_k)


def _amplitude(form):
    if form == "gauss":
        return momentum_amplitude_gauss
    if form == "lorentz":
        return momentum_amplitude_lorentz
    raise ValueError(f"unknown momentum form {form!r}; choose from {FORMS}")


def sample_momentum_amplitude(grid: Grid2D, p: Params, form="gauss"):
    U, K = grid.mesh()
    meta = {"model": f"momentum_{form}", "eta0": p.eta0, "beta": p.beta, "tau_spr": p.tau_spr}
    return AmplitudeGrid(grid, _amplitude(form)(U, K, p), ("u", "kappa"), meta)


def sample_momentum_density(grid: Grid2D, p: Params, form="gauss"):
    """``|psi|^2`` of the chosen form on ``grid`` (axes ``u``, ``kappa``)."""
    return sample_momentum_amplitude(grid, p, form).density()

