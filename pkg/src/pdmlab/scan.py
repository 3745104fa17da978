"""Sweeps of the ordering parameter along the symmetric line ``b = -1/2 - a``."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .eigen import Spectrum, eigendecompose
from .errors import ValidationError
from .grid import Grid
from .operator import OrderingParams, build_von_roos
from .pct import PctMap
from .potentials import oscillator_field, uniqueness_conditions
from .profiles import MassProfile

DEFAULT_LEVELS = 6


def default_a_values(a_min: float = -0.75, a_max: float = 0.25, steps: int = 33) -> np.ndarray:
    """Uniform a-grid; the default 33 points land exactly on -1/4, 0 and -1/2."""
    if steps < 1:
        raise ValidationError("need at least one a value")
    if steps == 1:
        return np.array([float(a_min)])
    return a_min + (a_max - a_min) * np.arange(steps) / (steps - 1)


def spectral_deviation(spectrum: Spectrum, count: int = DEFAULT_LEVELS) -> float:
    """RMS distance of the lowest ``count`` levels from ``n + 1/2``."""
    E = np.asarray(getattr(spectrum, "eigenvalues", spectrum), dtype=float)
    if count < 1 or E.size < count:
        raise ValidationError(f"spectrum has {E.size} levels, {count} requested")
    ladder = np.arange(count) + 0.5
    return float(np.sqrt(np.mean((E[:count] - ladder) ** 2)))


@dataclass(frozen=True)
class ScanRow:
    a: float
    b: float
    deviation: float
    c1: float
    c2: float
    energies: tuple[float, ...]


@dataclass(frozen=True)
class ScanResult:
    rows: tuple[ScanRow, ...]
    grid: Grid
    profile: str
    levels: int
    metadata: dict = field(default_factory=dict, compare=False)

    @property
    def a(self) -> np.ndarray:
        return np.array([r.a for r in self.rows])

    @property
    def deviation(self) -> np.ndarray:
        return np.array([r.deviation for r in self.rows])

    @property
    def argmin_a(self) -> float:
        return self.rows[int(np.argmin(self.deviation))].a

    def row_at(self, a: float) -> ScanRow:
        i = int(np.argmin(np.abs(self.a - a)))
        return self.rows[i]


def _threads(workers: Optional[int]) -> int:
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get("PDMLAB_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValidationError(f"PDMLAB_THREADS must be an integer, got {env!r}") from None
    return 1


def ordering_scan(
    profile: MassProfile,
    grid: Grid,
    a_values: Optional[Sequence[float]] = None,
    count: int = DEFAULT_LEVELS,
    pmap: Optional[PctMap] = None,
    workers: Optional[int] = None,
) -> ScanResult:
    """Solve the PDM oscillator for each ordering ``(a, -1/2 - a)``.

    ``V = q(x)**2 / 2`` throughout.  Rows are independent; with more than
    one worker they are computed concurrently and reassembled in input
    order.  The worker count defaults to ``$PDMLAB_THREADS`` or 1.
    """
    a_values = default_a_values() if a_values is None else np.asarray(a_values, dtype=float)
    if not np.all(np.isfinite(a_values)):
        raise ValidationError("a values must be finite")
    if pmap is None:
        pmap = PctMap(profile, x_range=(grid.x_min, grid.x_max))
    V = oscillator_field(pmap, grid)

    def row(a: float) -> ScanRow:
        b = -0.5 - a
        H = build_von_roos(profile, OrderingParams.from_ab(a, b), grid, V)
        spec = eigendecompose(H, count)
        c1, c2 = uniqueness_conditions(a, b)
        return ScanRow(float(a), float(b), spectral_deviation(spec, count), c1, c2, tuple(float(e) for e in spec.eigenvalues))

    n_workers = _threads(workers)
    if n_workers == 1:
        rows = [row(a) for a in a_values]
    else:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            rows = list(pool.map(row, a_values))
    return ScanResult(tuple(rows), grid, profile.name, count, {"q_range": pmap.q_range})
