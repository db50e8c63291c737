"""Parameter sweeps producing the tabular data behind the width and R plots."""

from __future__ import annotations

import io
import json
from dataclasses import dataclass

import numpy as np

from .core import Params, eta_at, make_params
from .entanglement import r_of_eta, uncertainty_products
from .grid import CSV_FLOAT, _emit
from .widths import analytic_coord_widths


@dataclass(frozen=True)
class Table:
    """Named float columns; rows are written in the stored order."""

    columns: tuple
    data: np.ndarray

    def __post_init__(self):
        data = np.atleast_2d(np.asarray(self.data, dtype=float))
        if data.size == 0:
            data = np.empty((0, len(self.columns)))
        if data.shape[1] != len(self.columns):
            raise ValueError(f"{data.shape[1]} data columns for {len(self.columns)} names")
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "columns", tuple(self.columns))

    def __len__(self):
        return self.data.shape[0]

    def column(self, name):
        return self.data[:, self.columns.index(name)]

    def to_csv(self, target=None, header=None):
        """CSV with ``#`` header lines; ``header`` may be a dict (echoed as JSON) or lines."""
        buf = io.StringIO()
        for line in header_lines(header):
            buf.write(line + "\n")
        buf.write(",".join(self.columns) + "\n")
        if len(self):
            np.savetxt(buf, self.data, fmt=CSV_FLOAT, delimiter=",")
        return _emit(buf.getvalue(), target)


def header_lines(header):
    if header is None:
        return []
    if isinstance(header, dict):
        return ["# config: " + json.dumps(header, sort_keys=True)]
    return [ln if ln.startswith("#") else f"# {ln}" for ln in header]


def log_grid(log10_start, log10_stop, num):
    """``num`` points evenly spaced in ``log10`` between the two (inclusive) ends."""
    num = int(num)
    if num < 1:
        raise ValueError(f"sweep needs at least one point, got {num}")
    if log10_stop < log10_start or (num > 1 and log10_stop == log10_start):
        raise ValueError(f"empty sweep range [{log10_start}, {log10_stop}]")
    return np.linspace(log10_start, log10_stop, num)


def width_sweep(beta, log10_eta):
    """Relative coordinate widths against ``log10(eta)``.

    Each row evaluates the closed forms at ``t = 0`` with ``eta0 = eta``, so
    only ``eta`` and ``beta`` matter.
    """
    rows = []
    for le in np.asarray(log10_eta, dtype=float):
        r = analytic_coord_widths(make_params(10.0**le, beta, 1.0), 0.0)
        rows.append((le, r.rel_coinc_ph, r.rel_single_ph, r.rel_coinc_at, r.rel_single_at))
    return Table(("log10_eta", "rel_coinc_ph", "rel_single_ph", "rel_coinc_at", "rel_single_at"),
                 rows)


def r_sweep(beta, etas=None, p: Params | None = None, times=None):
    """``R`` along an ``eta`` sweep, or along a time sweep when ``p`` and ``times`` are given."""
    if times is not None:
        if p is None:
            raise ValueError("a time sweep needs Params")
        times = np.asarray(times, dtype=float)
        etas = np.asarray(eta_at(p, times), dtype=float)
        return Table(("t", "eta", "R"), np.column_stack([times, etas, r_of_eta(etas, p.beta)]))
    etas = np.asarray(etas, dtype=float)
    return Table(("eta", "R"), np.column_stack([etas, r_of_eta(etas, beta)]))


def uncertainty_sweep(p: Params, times):
    """Conditional uncertainty products along ``times``.

    Returns ``(table, violations)`` where ``violations`` lists every broken
    bound as text.
    """
    rows, violations = [], []
    for t in np.asarray(times, dtype=float):
        rep = uncertainty_products(p, t)
        rows.append((t, rep.eta_t, rep.R_t, rep.K, rep.products["cond_ph"],
                     rep.products["cond_at"], rep.bounds["lower"]))
        violations.extend(rep.violations())
    cols = ("t", "eta_t", "R_t", "K", "cond_ph", "cond_at", "lower_bound")
    return Table(cols, rows), violations


def intervals_table(intervals):
    """Hidden-entanglement intervals as a table."""
    return Table(("t_start", "t_end", "eta_start", "eta_end"), [tuple(iv) for iv in intervals])
