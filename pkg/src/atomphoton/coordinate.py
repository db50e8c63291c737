"""Coordinate-space atom-photon packets.

The joint density of the emitted photon and the recoiling atom is the product
of two proto-packets with entangled arguments:

* the photon (relative-motion) packet, a function of ``rho = r_ph - r_at``
  with a sharp causal edge at ``|rho| = t`` and an exponential tail behind it;
* the atomic packet, a spreading Gaussian of width ``a(t)`` in the argument
  ``R = (1 - beta) r_at + beta r_ph``.

Besides the 3D closed forms this module provides two 1D models on a plane
``(x_at, x_ph)``: the exponential-times-Gaussian analog (``full_1d``) and the
exactly solvable double-Gaussian model (``gaussian_1d``).
"""

from __future__ import annotations

import math

import numpy as np

from .core import Params, check_time, packet_width_a
from .exceptions import DomainError, SingularityError
from .grid import AmplitudeGrid, DensityGrid, Grid2D

SINGULARITY_FLOOR = 1e-12
# relative distance to a support edge below which a point counts as on the edge
EDGE_TOLERANCE = 1e-12

MODELS = ("full_1d", "two_sided_1d", "gaussian_1d")


# -- 3D closed forms -------------------------------------------------------

def photon_proto_density_3d(rho, t, p: Params | None = None, floor=SINGULARITY_FLOOR):
    """Dipole-emission photon packet ``3 sin^2(theta) / (8 pi rho^2) * exp(rho - t)``.

    ``rho`` has shape ``(..., 3)``; the dipole axis is ``z``.  The packet is
    zero beyond the light cone ``|rho| > t``.  ``p`` is accepted for a uniform
    call signature; the photon packet does not depend on the atom.

    Raises
    ------
    SingularityError
        If any ``|rho|`` is below ``floor``.
    """
    t = check_time(t)
    rho = np.asarray(rho, dtype=float)
    r2 = np.sum(rho**2, axis=-1)
    r = np.sqrt(r2)
    if np.any(r < floor):
        raise SingularityError(f"|rho| below singularity floor {floor:g}")
    sin2 = (rho[..., 0] ** 2 + rho[..., 1] ** 2) / r2
    inside = r <= t
    out = np.where(inside, 3.0 * sin2 / (8.0 * np.pi * r2) * np.exp(np.minimum(r - t, 0.0)), 0.0)
    return out[()]


def atom_proto_density_3d(R, t, p: Params):
    """Spreading atomic packet ``(sqrt(pi) a)^-3 exp(-|R|^2 / a^2)`` with ``a = a(t)``."""
    a = packet_width_a(p, t)
    R = np.asarray(R, dtype=float)
    r2 = np.sum(R**2, axis=-1)
    return ((math.sqrt(math.pi) * a) ** -3 * np.exp(-r2 / a**2))[()]


def entangled_argument(r_at, r_ph, p: Params):
    """Argument of the atomic packet, ``(1 - beta) r_at + beta r_ph``.

    Identical to ``r_at + beta (r_ph - r_at)``; works for scalars, 1D
    coordinates and 3-vectors alike.
    """
    r_at = np.asarray(r_at, dtype=float)
    r_ph = np.asarray(r_ph, dtype=float)
    return ((1.0 - p.beta) * r_at + p.beta * r_ph)[()]


def joint_density_3d(r_at, r_ph, t, p: Params, floor=SINGULARITY_FLOOR):
    """Squared joint atom-photon wave function in 3D (units ``(gamma/c)^6``)."""
    r_at = np.asarray(r_at, dtype=float)
    r_ph = np.asarray(r_ph, dtype=float)
    return (photon_proto_density_3d(r_ph - r_at, t, p, floor)
            * atom_proto_density_3d(entangled_argument(r_at, r_ph, p), t, p))


def integrate_joint_density_3d(t, p: Params, n_hermite=6, n_radial=48, n_polar=8, n_azimuth=4):
    """Integrate :func:`joint_density_3d` over both position vectors.

    The six-dimensional integral is evaluated on a tensor rule in the variables
    ``R`` (Gauss-Hermite, scaled by ``a(t)``) and ``rho`` (Gauss-Legendre in
    radius on ``(0, t)`` and in ``cos(theta)``, uniform in azimuth).  Each
    node is mapped back to ``r_at = R - beta rho`` and ``r_ph = R + (1-beta) rho``
    and the joint density is evaluated there; the map has unit Jacobian.
    """
    t = check_time(t)
    if t <= 0:
        return 0.0
    a = packet_width_a(p, t)
    z, wz = np.polynomial.hermite.hermgauss(n_hermite)
    Z = np.stack(np.meshgrid(z, z, z, indexing="ij"), axis=-1).reshape(-1, 3)
    WZ = np.einsum("i,j,k->ijk", wz, wz, wz).ravel()
    R_nodes = a * Z
    R_weights = a**3 * WZ * np.exp(np.sum(Z**2, axis=1))

    xr, wr = np.polynomial.legendre.leggauss(n_radial)
    r = 0.5 * t * (xr + 1.0)
    w_r = 0.5 * t * wr * r**2
    mu, w_mu = np.polynomial.legendre.leggauss(n_polar)
    phi = 2.0 * np.pi * (np.arange(n_azimuth) + 0.5) / n_azimuth
    w_phi = np.full(n_azimuth, 2.0 * np.pi / n_azimuth)
    rr, mm, pp = np.meshgrid(r, mu, phi, indexing="ij")
    st = np.sqrt(1.0 - mm**2)
    rho_nodes = np.stack([rr * st * np.cos(pp), rr * st * np.sin(pp), rr * mm], axis=-1).reshape(-1, 3)
    rho_weights = np.einsum("i,j,k->ijk", w_r, w_mu, w_phi).ravel()

    total = 0.0
    for R, wR in zip(R_nodes, R_weights):
        r_at = R - p.beta * rho_nodes
        r_ph = R + (1.0 - p.beta) * rho_nodes
        total += wR * np.dot(rho_weights, joint_density_3d(r_at, r_ph, t, p))
    return float(total)


# -- 1D models -------------------------------------------------------------

def _check_positive_time(t):
    t = check_time(t)
    if np.any(np.asarray(t) <= 0):
        raise DomainError("t", t, "t > 0 for the 1D analog (normalization 1 - exp(-t))")
    return t


def _step(x, tol):
    # Heaviside with value 1/2 within tol of the jump
    return np.where(np.abs(x) <= tol, 0.5, (x > 0).astype(float))


def joint_density_1d(x_at, x_ph, t, p: Params, two_sided=False):
    """1D analog of the joint density (units ``(gamma/c)^2``).

    ``f(u) g(X)`` with ``u = x_ph - x_at`` and ``X = (1-beta) x_at + beta x_ph``.
    ``f`` is the truncated exponential ``exp(u - t) / (1 - exp(-t))`` on
    ``0 <= u <= t`` (photon emitted towards ``+x``), or its symmetric version
    on ``|u| <= t`` when ``two_sided``; ``g`` is the normalized Gaussian of
    width ``a(t)``.  The step functions take the value 1/2 exactly on the
    support edges, which keeps grid quadratures second order when grid nodes
    fall on the edges (see :func:`default_grid`).
    """
    t = _check_positive_time(t)
    x_at = np.asarray(x_at, dtype=float)
    x_ph = np.asarray(x_ph, dtype=float)
    a = packet_width_a(p, t)
    u = x_ph - x_at
    X = entangled_argument(x_at, x_ph, p)
    norm = -math.expm1(-t)
    tol = EDGE_TOLERANCE * max(1.0, t)
    if two_sided:
        s = np.abs(u)
        f = _step(t - s, tol) * np.exp(np.minimum(s - t, 0.0)) / (2.0 * norm)
    else:
        f = _step(u, tol) * _step(t - u, tol) * np.exp(np.minimum(u - t, 0.0)) / norm
    g = np.exp(-(X**2) / a**2) / (math.sqrt(math.pi) * a)
    return (f * g)[()]


def gaussian_model_argument(x_at, x_ph, p: Params, argument="exact"):
    """Atomic-packet argument used by the Gaussian model.

    ``"exact"`` is the entangled argument ``(1-beta) x_at + beta x_ph``;
    ``"linear"`` is the small-beta form ``x_at + beta x_ph``.
    """
    if argument == "exact":
        return entangled_argument(x_at, x_ph, p)
    if argument == "linear":
        return np.asarray(x_at, dtype=float) + p.beta * np.asarray(x_ph, dtype=float)
    raise ValueError(f"argument must be 'exact' or 'linear', got {argument!r}")


def _linear_map(p, argument):
    # coefficients of (u, X) in terms of (x_at, x_ph)
    alpha = 1.0 - p.beta if argument == "exact" else 1.0
    return np.array([[-1.0, 1.0], [alpha, p.beta]])


def gaussian_model_amplitude_1d(x_at, x_ph, t, p: Params, A=1.0, argument="exact"):
    """Real double-Gaussian amplitude of the exactly solvable 1D model.

    ``|psi|^2 = exp(-u^2/A^2) exp(-X^2/a^2) / (pi A a) * |J|`` where ``A`` is
    the photon packet width (``c/gamma`` = 1 by default), ``a = a(t)`` and
    ``|J|`` is the Jacobian of ``(x_at, x_ph) -> (u, X)`` (1 for the exact
    argument, ``1 + beta`` for the linear one), so that the density is
    normalized on the plane.
    """
    if not A > 0:
        raise DomainError("A", A, "A > 0")
    a = packet_width_a(p, t)
    u = np.asarray(x_ph, dtype=float) - np.asarray(x_at, dtype=float)
    X = gaussian_model_argument(x_at, x_ph, p, argument)
    jac = abs(np.linalg.det(_linear_map(p, argument)))
    amp = np.sqrt(jac / (math.pi * A * a)) * np.exp(-(u**2) / (2 * A**2) - X**2 / (2 * a**2))
    return amp[()]


def gaussian_model_precision(p: Params, t, A=1.0, argument="exact"):
    """Matrix ``Q`` with ``|psi|^2 ~ exp(-v^T Q v)``, ``v = (x_at, x_ph)``."""
    a = packet_width_a(p, t)
    L = _linear_map(p, argument)
    return L.T @ np.diag([1.0 / A**2, 1.0 / a**2]) @ L


def gaussian_model_marginal_widths(p: Params, t, A=1.0, argument="exact"):
    """Standardized marginal widths ``(w_at, w_ph)`` of the Gaussian model."""
    Q = gaussian_model_precision(p, t, A, argument)
    det = np.linalg.det(Q)
    return math.sqrt(Q[1, 1] / det), math.sqrt(Q[0, 0] / det)


# -- sampling --------------------------------------------------------------

def default_grid(p: Params, t, model="full_1d", n=512, extent_sigmas=8.0, A=1.0, argument="exact"):
    """Grid covering ``extent_sigmas`` widths beyond the support on every side.

    For the exponential models the spacing is equal on both axes and chosen
    so that the support edges ``u = 0`` and ``u = +-t`` run through grid
    nodes.
    """
    if model == "gaussian_1d":
        w_at, w_ph = gaussian_model_marginal_widths(p, t, A, argument)
        return Grid2D(n, n, -extent_sigmas * w_at, extent_sigmas * w_at,
                      -extent_sigmas * w_ph, extent_sigmas * w_ph)
    if model not in ("full_1d", "two_sided_1d"):
        raise ValueError(f"unknown model {model!r}; choose from {MODELS}")
    t = _check_positive_time(t)
    if n < 8:
        raise ValueError("exponential models need n >= 8")
    a = packet_width_a(p, t)
    pad = extent_sigmas * a
    # x_at = X - beta u, x_ph = X + (1 - beta) u with |X| <~ a
    if model == "full_1d":
        x_lo, x_hi = -p.beta * t - pad, pad
        y_lo, y_hi = -pad, (1.0 - p.beta) * t + pad
    else:
        x_lo, x_hi = -p.beta * t - pad, p.beta * t + pad
        y_lo, y_hi = -(1.0 - p.beta) * t - pad, (1.0 - p.beta) * t + pad
    span = max(x_hi - x_lo, y_hi - y_lo)
    # smallest spacing that still covers the span, rounded so t/h is an integer
    h = t / max(1, math.floor(t * (n - 2) / span))
    i0 = math.floor(x_lo / h)
    j0 = math.floor(y_lo / h)
    return Grid2D(n, n, i0 * h, (i0 + n - 1) * h, j0 * h, (j0 + n - 1) * h)


def sample_density(grid: Grid2D, t, p: Params, model="full_1d", A=1.0, argument="exact"):
    """Evaluate a 1D model on ``grid`` (axes ``x_at``, ``x_ph``)."""
    X, Y = grid.mesh()
    meta = {"model": model, "eta0": p.eta0, "beta": p.beta, "tau_spr": p.tau_spr, "t": float(t)}
    if model == "full_1d":
        values = joint_density_1d(X, Y, t, p)
    elif model == "two_sided_1d":
        values = joint_density_1d(X, Y, t, p, two_sided=True)
    elif model == "gaussian_1d":
        values = np.abs(gaussian_model_amplitude_1d(X, Y, t, p, A, argument)) ** 2
        meta.update(A=float(A), argument=argument)
    else:
        raise ValueError(f"unknown model {model!r}; choose from {MODELS}")
    meta["a_t"] = float(packet_width_a(p, t))
    return DensityGrid(grid, values, ("x_at", "x_ph"), meta)


def sample_gaussian_amplitude(grid: Grid2D, t, p: Params, A=1.0, argument="exact"):
    """Gaussian-model amplitude on ``grid`` as an :class:`AmplitudeGrid`."""
    X, Y = grid.mesh()
    values = gaussian_model_amplitude_1d(X, Y, t, p, A, argument)
    meta = {"model": "gaussian_1d", "eta0": p.eta0, "beta": p.beta, "tau_spr": p.tau_spr,
            "t": float(t), "A": float(A), "argument": argument}
    return AmplitudeGrid(grid, values, ("x_at", "x_ph"), meta)
