"""Finite-difference von Roos Hamiltonians on a uniform Dirichlet box."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from . import dual
from .errors import BoundaryError, ConstraintError, DomainError, ValidationError
from .grid import Grid
from .pct import PctMap
from .potentials import PotentialField, effective_potential, oscillator_potential
from .profiles import MassProfile

CONSTRAINT_TOL = 1e-12


@dataclass(frozen=True)
class OrderingParams:
    """Ordering-ambiguity exponents ``(j, k, l)`` with ``j + k + l = -1``.

    The two-parameter form used for symmetric orderings is ``j = l = a``,
    ``k = 2b`` with ``a + b = -1/2``.
    """

    j: float
    k: float
    l: float

    def __post_init__(self):
        vals = (self.j, self.k, self.l)
        if not all(math.isfinite(v) for v in vals):
            raise ConstraintError("ordering parameters must be finite")
        if abs(sum(vals) + 1.0) > CONSTRAINT_TOL:
            raise ConstraintError(f"constraint j+k+l=-1 violated (j+k+l={sum(vals)!r})")

    @classmethod
    def from_ab(cls, a: float, b: Optional[float] = None) -> "OrderingParams":
        """Symmetric ordering; ``b`` defaults to ``-1/2 - a``."""
        if b is None:
            b = -0.5 - a
        if not (math.isfinite(a) and math.isfinite(b)) or abs(a + b + 0.5) > CONSTRAINT_TOL:
            raise ConstraintError(f"constraint a+b=-1/2 violated (a+b={a + b!r})")
        return cls(a, 2.0 * b, a)

    @classmethod
    def preset(cls, name: str) -> "OrderingParams":
        try:
            return cls(*PRESETS[name.lower()])
        except KeyError:
            raise ValidationError(f"unknown ordering preset {name!r}; choose from {sorted(PRESETS)}") from None

    @property
    def symmetric(self) -> bool:
        return self.j == self.l

    @property
    def ab(self) -> tuple[float, float]:
        if not self.symmetric:
            raise ValidationError(f"ordering {self} has j != l and no (a, b) form")
        return self.j, self.k / 2.0

    @property
    def swapped(self) -> "OrderingParams":
        """The partner ordering ``(a, b) -> (b, a)`` of a symmetric ordering."""
        a, b = self.ab
        return OrderingParams.from_ab(b, a)


PRESETS = {
    "bdd": (0.0, -1.0, 0.0),  # BenDaniel-Duke
    "zk": (-0.5, 0.0, -0.5),  # Zhu-Kroemer
    "mm": (-0.25, -0.5, -0.25),  # Mustafa-Mazharimousavi
    "gw": (-1.0, 0.0, 0.0),  # Gora-Williams
    "lk": (0.0, -0.5, -0.5),  # Li-Kuhn
}


@dataclass(frozen=True)
class TridiagonalOperator:
    """Real symmetric tridiagonal matrix on the interior nodes of ``grid``."""

    diag: np.ndarray
    offdiag: np.ndarray
    grid: Grid
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        d = np.array(self.diag, dtype=float)
        e = np.array(self.offdiag, dtype=float)
        if d.shape != (self.grid.n - 2,) or e.shape != (self.grid.n - 3,):
            raise ValidationError("diagonal sizes do not match the grid interior")
        if not (np.all(np.isfinite(d)) and np.all(np.isfinite(e))):
            raise DomainError("operator has non-finite entries")
        d.flags.writeable = False
        e.flags.writeable = False
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "offdiag", e)

    @property
    def size(self) -> int:
        return self.diag.size

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)

    def matvec(self, v: np.ndarray) -> np.ndarray:
        out = self.diag * v
        out[:-1] += self.offdiag * v[1:]
        out[1:] += self.offdiag * v[:-1]
        return out


def _powers(m: np.ndarray, p: float, what: str) -> np.ndarray:
    if p == 0:
        return np.ones_like(m)
    with np.errstate(all="ignore"):
        out = m ** p
    if not np.all(np.isfinite(out)):
        raise DomainError(f"m^{p} is not finite on the grid ({what})")
    return out


def _kinetic_parts(profile: MassProfile, ordering: OrderingParams, grid: Grid):
    if not (np.all(profile.in_domain(grid.points))):
        raise DomainError(f"grid [{grid.x_min}, {grid.x_max}] extends outside profile domain {profile.domain}")
    m = np.asarray(profile(grid.points), dtype=float) + np.zeros(grid.n)
    mid = np.asarray(profile(grid.midpoints), dtype=float) + np.zeros(grid.n - 1)
    if not (np.all(np.isfinite(m)) and np.all(m > 0) and np.all(np.isfinite(mid)) and np.all(mid > 0)):
        raise DomainError("mass must be finite and positive on the grid")
    sj = _powers(m, ordering.j, "j")[1:-1]
    sl = _powers(m, ordering.l, "l")[1:-1]
    w = _powers(mid, ordering.k, "k") / (2.0 * grid.h ** 2)
    # -1/2 d/dx m^k d/dx, conservative midpoint flux form
    a_diag = w[:-1] + w[1:]
    a_off = -w[1:-1]
    diag = sj * sl * a_diag
    upper = 0.5 * (sj[:-1] * sl[1:] + sl[:-1] * sj[1:]) * a_off
    lower = 0.5 * (sj[1:] * sl[:-1] + sl[1:] * sj[:-1]) * a_off
    if not np.array_equal(upper, lower):
        raise AssertionError("assembled kinetic operator is not symmetric")
    return diag, upper


def build_von_roos(
    profile: MassProfile,
    ordering: OrderingParams,
    grid: Grid,
    V: Optional[PotentialField] = None,
) -> TridiagonalOperator:
    """Assemble ``1/2 (S_j A_k S_l + S_l A_k S_j) + diag(V)`` with Dirichlet walls.

    ``S_p = diag(m**p)`` at the nodes and ``A_k`` is the three-point
    discretisation of ``-1/2 d/dx m**k d/dx`` with m evaluated at the
    midpoints.  Second order in h.
    """
    diag, off = _kinetic_parts(profile, ordering, grid)
    if V is not None:
        if V.grid != grid:
            raise ValidationError("potential and operator grids differ")
        diag = diag + V.interior
    meta = {
        "ordering": (ordering.j, ordering.k, ordering.l),
        "profile": profile.name,
        "potential": None if V is None else V.kind,
    }
    return TridiagonalOperator(diag, off, grid, meta)


def apply_operator(H: TridiagonalOperator, psi) -> np.ndarray:
    """``H @ psi`` for a vector on the interior nodes."""
    v = np.asarray(psi)
    if v.shape != (H.size,):
        raise ValidationError(f"vector of length {v.shape} does not match operator size {H.size}")
    return H.matvec(v)


# PCT cross-check ----------------------------------------------------------


def gaussian(q):
    return dual.exp(-0.5 * q * q)


PotentialSpec = Union[None, str, Callable]


def _sample_potential(V: PotentialSpec, pmap: PctMap, grid: Grid) -> Optional[PotentialField]:
    if V is None or V == "zero" or V == "free":
        return None
    if V == "oscillator":
        return PotentialField(grid, oscillator_potential(pmap, grid.points), "oscillator")
    if isinstance(V, PotentialField):
        if V.grid != grid:
            raise ValidationError("a sampled PotentialField cannot be refined; pass a callable instead")
        return V
    if callable(V):
        return PotentialField(grid, np.asarray(V(grid.points), dtype=float), "custom")
    raise ValidationError(f"unsupported potential specification {V!r}")


@dataclass(frozen=True)
class PctResidualReport:
    """Outcome of :func:`verify_pct_equivalence`.

    ``levels`` holds ``(n, h, max|r|)`` for each grid; ``orders`` the
    observed convergence orders between consecutive levels.  ``points`` and
    ``residual`` are the interior nodes and residual of the coarsest grid.
    """

    ordering: tuple[float, float]
    include_veff: bool
    levels: list
    orders: list
    points: np.ndarray
    residual: np.ndarray
    boundary_amplitude: float
    boundary_contaminated: bool

    @property
    def max_residual(self) -> float:
        return self.levels[0][2]

    def residual_at(self, x: float) -> float:
        return float(self.residual[np.argmin(np.abs(self.points - x))])

    def to_dict(self) -> dict:
        return {
            "ordering": list(self.ordering),
            "include_veff": self.include_veff,
            "levels": [{"n": n, "h": h, "max_residual": r} for n, h, r in self.levels],
            "orders": list(self.orders),
            "boundary_amplitude": self.boundary_amplitude,
            "boundary_contaminated": self.boundary_contaminated,
        }


def _pct_residual(profile, ordering, grid, V, phi, pmap, include_veff):
    a, b = ordering.ab
    x = grid.points
    q = pmap.forward(x)
    f = phi(dual.Dual2.variable(q))
    m_quarter = np.asarray(profile(x), dtype=float) ** 0.25
    psi = m_quarter * f.v
    field_ = _sample_potential(V, pmap, grid)
    H = build_von_roos(profile, ordering, grid, field_)
    lhs = H.matvec(psi[1:-1])
    vq = 0.0 if field_ is None else field_.interior
    xi = x[1:-1]
    veff = effective_potential(profile, a, b, vq, xi) if include_veff else vq
    rhs = m_quarter[1:-1] * (-0.5 * f.d2[1:-1] + veff * f.v[1:-1])
    return xi, lhs - rhs, max(abs(psi[0]), abs(psi[-1]))


def verify_pct_equivalence(
    profile: MassProfile,
    ordering: OrderingParams,
    grid: Grid,
    V: PotentialSpec = None,
    phi: Callable = gaussian,
    pmap: Optional[PctMap] = None,
    include_veff: bool = True,
    refinements: int = 2,
    boundary_tol: float = 1e-8,
) -> PctResidualReport:
    """Compare the discrete Hamiltonian with its point-transformed form.

    Computes ``r = H[m**(1/4) phi(q(x))] - m**(1/4) [-phi''(q)/2 + V_eff phi(q)]``
    on the interior nodes for ``grid`` and ``refinements`` successively
    halved spacings.  ``phi`` must be written with :mod:`pdmlab.dual`
    operations so that phi'' comes out exactly.  ``V`` is ``None``,
    ``"oscillator"`` or a callable of x.
    """
    if pmap is None:
        pmap = PctMap(profile, x_range=(grid.x_min, grid.x_max))
    levels = []
    first = None
    g = grid
    for level in range(refinements + 1):
        xi, r, edge = _pct_residual(profile, ordering, g, V, phi, pmap, include_veff)
        if level == 0:
            first = (xi, r, edge)
        levels.append((g.n, g.h, float(np.max(np.abs(r)))))
        g = g.refined()
    orders = [math.log2(r0 / r1) if r1 > 0 and r0 > 0 else math.nan for (_, _, r0), (_, _, r1) in zip(levels, levels[1:])]
    xi, r, edge = first
    return PctResidualReport(ordering.ab, include_veff, levels, orders, xi, r, float(edge), bool(edge > boundary_tol))
