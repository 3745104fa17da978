"""Uniform one-dimensional grids."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ValidationError


@dataclass(frozen=True)
class Grid:
    """``n`` equally spaced nodes from ``x_min`` to ``x_max`` inclusive.

    Operators treat the two end nodes as Dirichlet walls (the wavefunction
    vanishes there) and act on the ``n - 2`` interior nodes.
    """

    x_min: float
    x_max: float
    n: int

    def __post_init__(self):
        if not (math.isfinite(self.x_min) and math.isfinite(self.x_max)):
            raise ValidationError("grid bounds must be finite")
        if int(self.n) != self.n or self.n < 3:
            raise ValidationError(f"grid needs at least 3 points, got n={self.n}")
        if not self.x_max > self.x_min:
            raise ValidationError(f"grid requires x_max > x_min, got [{self.x_min}, {self.x_max}]")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "x_min", float(self.x_min))
        object.__setattr__(self, "x_max", float(self.x_max))

    @property
    def h(self) -> float:
        return (self.x_max - self.x_min) / (self.n - 1)

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    @cached_property
    def points(self) -> np.ndarray:
        pts = np.linspace(self.x_min, self.x_max, self.n)
        pts.flags.writeable = False
        return pts

    @property
    def interior(self) -> np.ndarray:
        return self.points[1:-1]

    @property
    def midpoints(self) -> np.ndarray:
        p = self.points
        return 0.5 * (p[:-1] + p[1:])

    def weights(self) -> np.ndarray:
        """Trapezoid weights, so ``weights() @ f`` approximates the integral of f."""
        w = np.full(self.n, self.h)
        w[0] = w[-1] = 0.5 * self.h
        return w

    def refined(self, factor: int = 2) -> "Grid":
        """Same box with the spacing divided by ``factor``; old nodes are kept."""
        return Grid(self.x_min, self.x_max, factor * (self.n - 1) + 1)

    @classmethod
    def from_points(cls, points, rtol: float = 1e-9) -> "Grid":
        """Rebuild a grid from node coordinates; nonuniform spacing is rejected."""
        p = np.asarray(points, dtype=float)
        if p.ndim != 1 or p.size < 3:
            raise ValidationError("need a 1-D array of at least 3 points")
        d = np.diff(p)
        h = (p[-1] - p[0]) / (p.size - 1)
        if h <= 0 or np.max(np.abs(d - h)) > rtol * max(abs(h), 1.0):
            raise ValidationError("grid points are not uniformly spaced and increasing")
        return cls(float(p[0]), float(p[-1]), p.size)

    def index_of(self, x: float) -> int:
        """Index of the node closest to ``x``."""
        return int(np.clip(round((x - self.x_min) / self.h), 0, self.n - 1))


def trapezoid_norm(values, grid: Grid) -> float:
    v = np.asarray(values)
    return float(np.sqrt(grid.weights() @ (np.abs(v) ** 2)))


def trapezoid_inner(u, v, grid: Grid) -> float:
    return float(grid.weights() @ (np.conj(np.asarray(u)) * np.asarray(v)))
