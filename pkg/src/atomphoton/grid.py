"""Rectangular sampling grids and the sampled densities/amplitudes living on them.

Values are stored as ``(n_x, n_y)`` arrays indexed ``[i, j]`` with ``i`` along
the first axis, so ``values.ravel()`` is the row-major order used by the CSV
and JSON writers.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field

import numpy as np

CSV_FLOAT = "%.17g"


@dataclass(frozen=True)
class Grid2D:
    """Uniform node grid ``x_i = x_min + i*dx``, ``y_j = y_min + j*dy`` (ends included)."""

    n_x: int
    n_y: int
    x_min: float
    x_max: float
    y_min: float
    y_max: float

    def __post_init__(self):
        if int(self.n_x) < 2 or int(self.n_y) < 2:
            raise ValueError(f"grid needs at least 2x2 points, got {self.n_x}x{self.n_y}")
        object.__setattr__(self, "n_x", int(self.n_x))
        object.__setattr__(self, "n_y", int(self.n_y))
        for name in ("x_min", "x_max", "y_min", "y_max"):
            value = float(getattr(self, name))
            if not np.isfinite(value):
                raise ValueError(f"grid extent {name} must be finite")
            object.__setattr__(self, name, value)
        if not (self.x_max > self.x_min and self.y_max > self.y_min):
            raise ValueError("grid extents need max > min on both axes")

    @property
    def dx(self):
        return (self.x_max - self.x_min) / (self.n_x - 1)

    @property
    def dy(self):
        return (self.y_max - self.y_min) / (self.n_y - 1)

    @property
    def x(self):
        return self.x_min + self.dx * np.arange(self.n_x)

    @property
    def y(self):
        return self.y_min + self.dy * np.arange(self.n_y)

    @property
    def cell_area(self):
        return self.dx * self.dy

    def mesh(self):
        """Coordinate arrays of shape ``(n_x, n_y)``."""
        return np.meshgrid(self.x, self.y, indexing="ij")

    def halved(self):
        """Same extents with (about) half the points per axis."""
        return Grid2D(max(2, self.n_x // 2), max(2, self.n_y // 2),
                      self.x_min, self.x_max, self.y_min, self.y_max)

    def as_dict(self):
        return {"n_x": self.n_x, "n_y": self.n_y,
                "x_min": self.x_min, "x_max": self.x_max,
                "y_min": self.y_min, "y_max": self.y_max,
                "dx": self.dx, "dy": self.dy}

    @classmethod
    def from_dict(cls, d):
        return cls(d["n_x"], d["n_y"], d["x_min"], d["x_max"], d["y_min"], d["y_max"])


def symmetric_grid(n, half_x, half_y, center_x=0.0, center_y=0.0):
    """Square-count grid spanning ``center +- half`` on each axis."""
    return Grid2D(n, n, center_x - half_x, center_x + half_x,
                  center_y - half_y, center_y + half_y)


def _axis_index(axes, axis):
    if isinstance(axis, str):
        try:
            return axes.index(axis)
        except ValueError:
            raise ValueError(f"unknown axis {axis!r}; grid axes are {axes}") from None
    if axis not in (0, 1):
        raise ValueError(f"axis must be 0, 1 or one of {axes}")
    return int(axis)


def _format_header(metadata):
    items = ", ".join(f"{k}={_fmt(v)}" for k, v in metadata.items())
    return f"# {items}"


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return CSV_FLOAT % v
    return str(v)


@dataclass
class DensityGrid:
    """Non-negative probability density sampled on a :class:`Grid2D`.

    ``axes`` names the two coordinates (atom first, photon second by
    convention) and ``metadata`` records the model and parameters that produced
    the samples.  Quadrature uses the uniform weight ``dx*dy`` per node.
    """

    grid: Grid2D
    values: np.ndarray
    axes: tuple = ("x_at", "x_ph")
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        expected = (self.grid.n_x, self.grid.n_y)
        if values.shape != expected:
            if values.size == expected[0] * expected[1]:
                values = values.reshape(expected)
            else:
                raise ValueError(f"values shape {values.shape} does not match grid {expected}")
        if not np.all(np.isfinite(values)):
            raise ValueError("density contains non-finite values")
        if np.any(values < 0):
            raise ValueError("density contains negative values")
        self.values = values
        self.axes = tuple(self.axes)

    @property
    def weights(self):
        return np.full(self.values.shape, self.grid.cell_area)

    def total(self):
        """Quadrature sum of the density over the grid."""
        return float(self.values.sum() * self.grid.cell_area)

    def coords(self, axis):
        return self.grid.x if _axis_index(self.axes, axis) == 0 else self.grid.y

    def marginal(self, keep_axis):
        """Integrate out the other axis; returns ``(coords, density)``."""
        k = _axis_index(self.axes, keep_axis)
        if k == 0:
            return self.grid.x, self.values.sum(axis=1) * self.grid.dy
        return self.grid.y, self.values.sum(axis=0) * self.grid.dx

    def slice_at(self, fixed_axis, value):
        """1D profile along the other axis at the node nearest to ``value``.

        Returns ``(coords, profile, node_value)``.
        """
        k = _axis_index(self.axes, fixed_axis)
        fixed = self.grid.x if k == 0 else self.grid.y
        idx = int(np.argmin(np.abs(fixed - value)))
        if k == 0:
            return self.grid.y, self.values[idx, :], float(fixed[idx])
        return self.grid.x, self.values[:, idx], float(fixed[idx])

    def transpose(self):
        g = self.grid
        return DensityGrid(Grid2D(g.n_y, g.n_x, g.y_min, g.y_max, g.x_min, g.x_max),
                           self.values.T.copy(), self.axes[::-1], dict(self.metadata))

    # serialization -----------------------------------------------------

    def to_csv(self, target=None, extra_header=()):
        """Write ``axis0,axis1,density`` rows after ``#`` metadata lines.

        ``target`` may be a path or a text stream; with ``None`` the CSV text
        is returned.
        """
        X, Y = self.grid.mesh()
        table = np.column_stack([X.ravel(), Y.ravel(), self.values.ravel()])
        buf = io.StringIO()
        for line in extra_header:
            buf.write(line if line.startswith("#") else f"# {line}")
            buf.write("\n")
        buf.write(_format_header(self.metadata) + "\n")
        buf.write(f"{self.axes[0]},{self.axes[1]},density\n")
        np.savetxt(buf, table, fmt=CSV_FLOAT, delimiter=",")
        return _emit(buf.getvalue(), target)

    def to_json_dict(self):
        return {"grid": self.grid.as_dict(), "axes": list(self.axes),
                "metadata": _jsonable(self.metadata),
                "values": self.values.ravel().tolist()}

    def to_json(self, target=None, extra=None):
        payload = self.to_json_dict()
        if extra:
            payload = {**extra, **payload}
        return _emit(json.dumps(payload, sort_keys=True) + "\n", target)

    @classmethod
    def from_json_dict(cls, d):
        return cls(Grid2D.from_dict(d["grid"]), np.asarray(d["values"], dtype=float),
                   tuple(d.get("axes", ("x_at", "x_ph"))), dict(d.get("metadata", {})))

    @classmethod
    def read_csv(cls, source):
        """Inverse of :meth:`to_csv` (metadata values come back as strings)."""
        text = source.read() if hasattr(source, "read") else open(source).read()
        lines = text.splitlines()
        comments = [ln for ln in lines if ln.startswith("#")]
        body = [ln for ln in lines if ln and not ln.startswith("#")]
        axes = tuple(body[0].split(",")[:2])
        metadata = {}
        if comments:
            for item in comments[-1][1:].split(","):
                if "=" in item:
                    k, v = item.split("=", 1)
                    metadata[k.strip()] = v.strip()
        data = np.loadtxt(io.StringIO("\n".join(body[1:])), delimiter=",", ndmin=2)
        xs, ys = np.unique(data[:, 0]), np.unique(data[:, 1])
        grid = Grid2D(xs.size, ys.size, xs[0], xs[-1], ys[0], ys[-1])
        return cls(grid, data[:, 2].reshape(xs.size, ys.size), axes, metadata)


@dataclass
class AmplitudeGrid:
    """Complex amplitude sampled on a :class:`Grid2D`."""

    grid: Grid2D
    values: np.ndarray
    axes: tuple = ("x_at", "x_ph")
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.shape != (self.grid.n_x, self.grid.n_y):
            raise ValueError("amplitude shape does not match grid")
        if not np.all(np.isfinite(values)):
            raise ValueError("amplitude contains non-finite values")
        self.values = values
        self.axes = tuple(self.axes)

    def norm2(self):
        return float(np.sum(np.abs(self.values) ** 2) * self.grid.cell_area)

    def density(self):
        return DensityGrid(self.grid, np.abs(self.values) ** 2, self.axes, dict(self.metadata))

    def transpose(self):
        g = self.grid
        return AmplitudeGrid(Grid2D(g.n_y, g.n_x, g.y_min, g.y_max, g.x_min, g.x_max),
                             self.values.T.copy(), self.axes[::-1], dict(self.metadata))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    return obj


def _emit(text, target):
    if target is None:
        return text
    if hasattr(target, "write"):
        target.write(text)
    else:
        with open(target, "w", newline="\n") as fh:
            fh.write(text)
    return None
