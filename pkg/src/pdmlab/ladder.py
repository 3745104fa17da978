"""Discrete creation and annihilation operators for the PDM oscillator."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np
import scipy.sparse as sp

from .eigen import Spectrum
from .errors import BoundaryError, DomainError, ValidationError
from .grid import Grid
from .operator import TridiagonalOperator
from .pct import PctMap
from .profiles import MassProfile

SQRT_HALF = 1.0 / math.sqrt(2.0)
BAND = 0.05


def central_difference(grid: Grid) -> sp.csr_matrix:
    """Second-order d/dx on all nodes, with zero values assumed beyond the walls."""
    off = np.full(grid.n - 1, 0.5 / grid.h)
    return sp.diags([-off, off], [-1, 1], format="csr")


@dataclass(frozen=True)
class LadderPair:
    """``A+ = -(1/sqrt2) m^a D m^b + W`` and ``A- = (1/sqrt2) m^b D m^a + W``.

    Both act on samples over every grid node; ``W = q(x)/sqrt2``.
    """

    raise_op: sp.csr_matrix
    lower_op: sp.csr_matrix
    a: float
    grid: Grid
    profile: Optional[MassProfile] = field(default=None, compare=False)

    @property
    def b(self) -> float:
        return -0.5 - self.a

    def raising(self, psi) -> np.ndarray:
        return self.raise_op @ np.asarray(psi)

    def lowering(self, psi) -> np.ndarray:
        return self.lower_op @ np.asarray(psi)


def build_ladder(profile: MassProfile, grid: Grid, a: float, pmap: Optional[PctMap] = None) -> LadderPair:
    b = -0.5 - a
    x = grid.points
    if not np.all(profile.in_domain(x)):
        raise DomainError(f"grid extends outside profile domain {profile.domain}")
    m = np.asarray(profile(x), dtype=float) + np.zeros(grid.n)
    if not np.all(m > 0):
        raise DomainError("mass must be positive on the grid")
    if pmap is None:
        pmap = PctMap(profile, x_range=(grid.x_min, grid.x_max))
    D = central_difference(grid)
    ma, mb = sp.diags(m ** a), sp.diags(m ** b)
    W = sp.diags(pmap.forward(x) * SQRT_HALF)
    raise_op = (-SQRT_HALF * (ma @ D @ mb) + W).tocsr()
    lower_op = (SQRT_HALF * (mb @ D @ ma) + W).tocsr()
    return LadderPair(raise_op, lower_op, a, grid, profile)


def build_unit_mass_ladder(qgrid: Grid) -> tuple[sp.csr_matrix, sp.csr_matrix]:
    """``b+ = G - (1/sqrt2) d/dq`` and ``b- = G + (1/sqrt2) d/dq`` with ``G = q/sqrt2``."""
    D = central_difference(qgrid)
    G = sp.diags(qgrid.points * SQRT_HALF)
    return (G - SQRT_HALF * D).tocsr(), (G + SQRT_HALF * D).tocsr()


def _band(grid: Grid, band: float) -> slice:
    cut = int(math.ceil(band * grid.n))
    return slice(cut, grid.n - cut)


def _sample(fn, grid: Grid) -> np.ndarray:
    return np.asarray(fn(grid.points) if callable(fn) else fn, dtype=float)


def commutator_test(pair: LadderPair, testfns: Iterable, band: float = BAND, edge_tol: float = 1e-8) -> float:
    """Largest relative deviation of ``[A-, A+]`` from the identity.

    Test functions (arrays on the grid or callables of x) must be below
    ``edge_tol`` at the walls.  Norms are taken on the nodes that remain
    after dropping ``band`` of the grid at each end.
    """
    inner = _band(pair.grid, band)
    worst = 0.0
    for fn in testfns:
        phi = _sample(fn, pair.grid)
        if max(abs(phi[0]), abs(phi[1]), abs(phi[-2]), abs(phi[-1])) > edge_tol:
            raise BoundaryError("test function is not negligible at the box edges")
        comm = pair.lowering(pair.raising(phi)) - pair.raising(pair.lowering(phi))
        dev = np.linalg.norm((comm - phi)[inner]) / np.linalg.norm(phi[inner])
        worst = max(worst, float(dev))
    return worst


@dataclass(frozen=True)
class FactorizationReport:
    energies: np.ndarray
    plus_deviation: np.ndarray  # ||(A+A- + 1/2) psi_n - E_n psi_n||
    minus_deviation: np.ndarray  # ||(A-A+ - 1/2) psi_n - E_n psi_n||

    @property
    def worst(self) -> float:
        return float(max(self.plus_deviation.max(), self.minus_deviation.max()))

    def to_dict(self) -> dict:
        return {
            "levels": [
                {"n": i, "E": float(E), "plus_deviation": float(p), "minus_deviation": float(mi)}
                for i, (E, p, mi) in enumerate(zip(self.energies, self.plus_deviation, self.minus_deviation))
            ],
            "worst": self.worst,
        }


def factorization_test(
    pair: LadderPair, H: TridiagonalOperator, spectrum: Spectrum, levels: Optional[Sequence[int]] = None
) -> FactorizationReport:
    """Measure how well ``A+A- + 1/2`` and ``A-A+ - 1/2`` reproduce H on its eigenstates.

    Deviations are L2(dx) norms (trapezoid weights) for unit-norm states.
    """
    if pair.grid != H.grid or spectrum.grid != H.grid:
        raise ValidationError("ladder pair, operator and spectrum must share one grid")
    if levels is None:
        levels = range(len(spectrum))
    w = pair.grid.weights()
    energies, plus, minus = [], [], []
    for n in levels:
        psi, E = spectrum.eigenvectors[n], spectrum.eigenvalues[n]
        up_down = pair.raising(pair.lowering(psi)) + 0.5 * psi - E * psi
        down_up = pair.lowering(pair.raising(psi)) - 0.5 * psi - E * psi
        energies.append(E)
        plus.append(math.sqrt(w @ up_down ** 2))
        minus.append(math.sqrt(w @ down_up ** 2))
    return FactorizationReport(np.array(energies), np.array(plus), np.array(minus))
