"""Oscillator, effective and corrected factorisation potentials.

Every function here is evaluated as a function of x; the q-dependence of
the underlying formulas enters through ``q(x)`` from a :class:`PctMap`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .dual import Dual2
from .errors import ValidationError
from .grid import Grid
from .pct import PctMap
from .profiles import MassProfile


@dataclass(frozen=True)
class PotentialField:
    """Potential sampled on every node of ``grid`` (walls included)."""

    grid: Grid
    values: np.ndarray
    kind: str = "custom"
    ordering: Optional[tuple[float, float]] = None

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.shape != (self.grid.n,):
            raise ValidationError(f"potential has {v.shape} samples, grid has {self.grid.n}")
        if not np.all(np.isfinite(v)):
            raise ValidationError("potential samples must be finite")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @property
    def interior(self) -> np.ndarray:
        return self.values[1:-1]

    def __call__(self, x):
        return np.interp(x, self.grid.points, self.values)


def zero_field(grid: Grid) -> PotentialField:
    return PotentialField(grid, np.zeros(grid.n), "zero")


def oscillator_potential(pmap: PctMap, x):
    """V = q(x)**2 / 2."""
    q = pmap.forward(x)
    return 0.5 * q * q


def oscillator_field(pmap: PctMap, grid: Grid) -> PotentialField:
    return PotentialField(grid, oscillator_potential(pmap, grid.points), "oscillator")


def ordering_functions(profile: MassProfile, x):
    """``(F1, F2) = (m''/m**2, m'**2/m**3)``."""
    m, m1, m2 = profile.derivatives(x)
    return m2 / (m * m), m1 * m1 / (m * m * m)


def uniqueness_conditions(a: float, b: float) -> tuple[float, float]:
    """Coefficient residuals ``(1 + 4b, 9/16 + a(a + 2b + 1) + 2b)``.

    Both vanish together only at ``a = b = -1/4``.
    """
    return 1.0 + 4.0 * b, 9.0 / 16.0 + a * (a + 2.0 * b + 1.0) + 2.0 * b


def _potential_values(V, x):
    if V is None:
        return 0.0
    if callable(V):
        return V(x)
    return V


def effective_potential(profile: MassProfile, a: float, b: float, V, x):
    """Ordering-induced effective potential, as a function of x.

    ``V`` is the interaction potential: ``None`` (zero), a number or array
    of values at ``x``, a callable of x, or a :class:`PotentialField`.
    """
    c1, c2 = uniqueness_conditions(a, b)
    f1, f2 = ordering_functions(profile, x)
    return 0.125 * c1 * f1 - 0.5 * c2 * f2 + _potential_values(V, x)


def effective_field(profile: MassProfile, a: float, b: float, base: PotentialField) -> PotentialField:
    x = base.grid.points
    values = effective_potential(profile, a, b, base.values, x)
    return PotentialField(base.grid, values, "effective", (a, b))


def _inverse_sqrt_mass(profile: MassProfile, x) -> Dual2:
    m = Dual2(*profile.derivatives(x))
    return m ** -0.5


def cruz_terms(profile: MassProfile, a: float, x):
    """The two derivative terms of the corrected factorisation potential.

    Returns ``((4a+1)**2/8 * g'**2, (4a+1)/4 * g g'')`` with ``g = m**(-1/2)``.
    """
    g = _inverse_sqrt_mass(profile, x)
    s = 4.0 * a + 1.0
    return s * s / 8.0 * g.d1 * g.d1, s / 4.0 * g.v * g.d2


def cruz_corrected_potential(profile: MassProfile, pmap: PctMap, a: float, sign: int, x):
    """Partner potential of ``H = A+ A-`` (``sign=+1``) or ``A- A+`` (``sign=-1``)."""
    if sign not in (1, -1):
        raise ValidationError("sign must be +1 or -1")
    second, third = cruz_terms(profile, a, x)
    return oscillator_potential(pmap, x) - second - sign * third - sign * 0.5


def cruz_field(profile: MassProfile, pmap: PctMap, a: float, sign: int, grid: Grid) -> PotentialField:
    values = cruz_corrected_potential(profile, pmap, a, sign, grid.points)
    return PotentialField(grid, values, "cruz+" if sign > 0 else "cruz-", (a, -0.5 - a))
