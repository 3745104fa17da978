"""Mass profiles m(x) with exact first and second derivatives."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional

import numpy as np

from . import expr
from .dual import Dual2
from .errors import DomainError, NumericalError, ValidationError

Interval = tuple[float, float]
FULL_LINE: Interval = (-math.inf, math.inf)


@dataclass(frozen=True)
class MassProfile:
    """An immutable, evaluatable mass profile.

    ``domain`` is the open interval on which positivity is promised.  It is
    checked on sampling grids only (see :func:`validate_profile`); nothing is
    proven symbolically.  ``analytic`` optionally supplies hand-derived
    ``(m, m', m'')`` used in preference to automatic differentiation.
    """

    name: str
    tree: expr.Node
    params: tuple[tuple[str, float], ...] = ()
    domain: Interval = FULL_LINE
    analytic: Optional[Callable] = field(default=None, compare=False, repr=False)
    slope: Optional[Callable] = field(default=None, compare=False, repr=False)

    @property
    def env(self) -> dict[str, float]:
        return dict(self.params)

    @property
    def text(self) -> str:
        return expr.to_text(self.tree)

    def __call__(self, x):
        if self.analytic is not None:
            return self.analytic(x)[0]
        return expr.evaluate(self.tree, x, self.env)

    def dual(self, x) -> Dual2:
        """m as a :class:`Dual2` in x, always via automatic differentiation."""
        out = expr.evaluate(self.tree, Dual2.variable(x), self.env)
        if not isinstance(out, Dual2):
            zero = np.zeros_like(x, dtype=float) if isinstance(x, np.ndarray) else 0.0
            # constant tree: broadcast to the shape of x
            out = Dual2(out + zero, zero, zero)
        return out

    def ad_derivatives(self, x):
        return self.dual(x).as_tuple()

    def derivatives(self, x):
        """``(m, m', m'')`` at x (scalar or array); no domain checks."""
        if self.analytic is not None:
            return self.analytic(x)
        return self.ad_derivatives(x)

    def mass_and_slope(self, x: float) -> tuple[float, float]:
        """Fast scalar ``(m, m')`` for time-stepping loops."""
        if self.slope is not None:
            return self.slope(x)
        d = self.dual(float(x))
        return d.v, d.d1

    def in_domain(self, x) -> np.ndarray:
        lo, hi = self.domain
        x = np.asarray(x, dtype=float)
        return (x > lo) & (x < hi)

    def with_domain(self, domain: Interval) -> "MassProfile":
        return MassProfile(self.name, self.tree, self.params, tuple(domain), self.analytic, self.slope)


def parse_profile(
    text: str,
    params: Optional[Mapping[str, float]] = None,
    domain: Interval = FULL_LINE,
    name: Optional[str] = None,
) -> MassProfile:
    """Build a profile from an expression such as ``"1 + lam*x^2"``."""
    if text is None or not text.strip():
        raise expr.ParseError("empty expression", 0, text or "")
    params = dict(params or {})
    for key in params:
        if key == expr.VARIABLE or key in expr.FUNCTIONS:
            raise ValidationError(f"parameter name {key!r} is reserved")
        params[key] = float(params[key])
    tree = expr.parse(text)
    unbound = sorted(expr.free_names(tree) - {expr.VARIABLE} - set(params))
    if unbound:
        raise ValidationError(f"unbound identifier {unbound[0]!r}")
    lo, hi = float(domain[0]), float(domain[1])
    if not lo < hi:
        raise ValidationError(f"empty domain ({lo}, {hi})")
    used = expr.free_names(tree)
    kept = tuple(sorted((k, v) for k, v in params.items() if k in used))
    return MassProfile(name or text.strip(), tree, kept, (lo, hi))


# builtins -----------------------------------------------------------------


def _const(m0: float):
    def analytic(x):
        z = np.zeros_like(x, dtype=float) if isinstance(x, np.ndarray) else 0.0
        return z + m0, z, z

    return analytic, lambda x: (m0, 0.0)


def _poly1(lam: float):
    def analytic(x):
        return 1.0 + lam * x * x, 2.0 * lam * x, 2.0 * lam + 0.0 * x

    return analytic, lambda x: (1.0 + lam * x * x, 2.0 * lam * x)


def _soliton(lam: float):
    def analytic(x):
        u = 1.0 + lam * x * x
        u3 = u * u * u
        return 1.0 / (u * u), -4.0 * lam * x / u3, -4.0 * lam / u3 + 24.0 * lam * lam * x * x / (u3 * u)

    def slope(x):
        u = 1.0 + lam * x * x
        return 1.0 / (u * u), -4.0 * lam * x / (u * u * u)

    return analytic, slope


def _rational(alpha: float):
    c = alpha - 1.0

    def analytic(x):
        u = 1.0 + x * x
        return 1.0 + c / u, -2.0 * c * x / (u * u), c * (6.0 * x * x - 2.0) / (u * u * u)

    def slope(x):
        u = 1.0 + x * x
        return 1.0 + c / u, -2.0 * c * x / (u * u)

    return analytic, slope


# name -> (expression, default params, analytic factory, parameter guard)
BUILTINS: dict[str, tuple] = {
    "const": ("m0", {"m0": 1.0}, lambda p: _const(p["m0"]), lambda p: p["m0"] > 0),
    "poly1": ("1+lam*x^2", {"lam": 1.0}, lambda p: _poly1(p["lam"]), lambda p: p["lam"] >= 0),
    "soliton": ("1/(1+lam*x^2)^2", {"lam": 1.0}, lambda p: _soliton(p["lam"]), lambda p: p["lam"] >= 0),
    "rational": ("(alpha+x^2)/(1+x^2)", {"alpha": 2.0}, lambda p: _rational(p["alpha"]), lambda p: p["alpha"] > 0),
}


def builtin(name: str, **params: float) -> MassProfile:
    """Return a shipped profile: ``const``, ``poly1``, ``soliton`` or ``rational``."""
    try:
        text, defaults, factory, guard = BUILTINS[name]
    except KeyError:
        raise ValidationError(f"unknown builtin profile {name!r}; choose from {sorted(BUILTINS)}") from None
    unknown = set(params) - set(defaults)
    if unknown:
        raise ValidationError(f"profile {name!r} has no parameter {sorted(unknown)[0]!r}")
    values = {**defaults, **{k: float(v) for k, v in params.items()}}
    if not guard(values):
        raise ValidationError(f"parameters {values} do not give a positive mass for {name!r}")
    analytic, slope = factory(values)
    tree = expr.parse(text)
    return MassProfile(name, tree, tuple(sorted(values.items())), FULL_LINE, analytic, slope)


# evaluation and validation -----------------------------------------------


def eval_mass(profile: MassProfile, x: float) -> tuple[float, float, float]:
    """``(m, m', m'')`` at a single point, with domain and finiteness checks."""
    x = float(x)
    if not bool(profile.in_domain(x)):
        raise DomainError(f"x={x!r} outside profile domain {profile.domain}")
    m, m1, m2 = (float(v) for v in profile.derivatives(x))
    if not all(math.isfinite(v) for v in (m, m1, m2)):
        raise NumericalError(f"non-finite mass or derivative at x={x!r}: {(m, m1, m2)}")
    if m <= 0:
        raise DomainError(f"mass is not positive at x={x!r} (m={m!r})")
    return m, m1, m2


@dataclass(frozen=True)
class ProfileReport:
    passed: bool
    m_min: float
    m_max: float
    dm_min: float
    dm_max: float
    d2m_min: float
    d2m_max: float
    argmin: float
    argmax: float
    nonpositive_at: tuple[float, ...]
    nonfinite_at: tuple[float, ...]

    def summary(self) -> str:
        status = "pass" if self.passed else "FAIL"
        return f"{status}: m in [{self.m_min:.6g}, {self.m_max:.6g}]"


def _grid_points(grid) -> np.ndarray:
    pts = getattr(grid, "points", grid)
    return np.asarray(pts, dtype=float)


def validate_profile(profile: MassProfile, grid, strict: bool = False) -> ProfileReport:
    """Sample m, m', m'' on ``grid`` and check positivity and finiteness.

    With ``strict=True`` a failed check raises instead of being reported.
    """
    x = _grid_points(grid)
    if not np.all(profile.in_domain(x)):
        raise DomainError(f"grid extends outside profile domain {profile.domain}")
    with np.errstate(all="ignore"):
        m, m1, m2 = (np.broadcast_to(np.asarray(v, dtype=float), x.shape) for v in profile.derivatives(x))
    finite = np.isfinite(m) & np.isfinite(m1) & np.isfinite(m2)
    positive = np.where(np.isfinite(m), m > 0, False)
    bad_pos = tuple(float(v) for v in x[~positive])
    bad_fin = tuple(float(v) for v in x[~finite])
    if strict and bad_fin:
        raise NumericalError(f"non-finite mass or derivative at x={list(bad_fin[:5])}")
    if strict and bad_pos:
        raise DomainError(f"positivity violated at x={list(bad_pos[:5])}")
    fm = np.where(finite, m, np.nan)
    ok = finite.any()
    return ProfileReport(
        passed=not bad_pos and not bad_fin,
        m_min=float(np.nanmin(fm)) if ok else math.nan,
        m_max=float(np.nanmax(fm)) if ok else math.nan,
        dm_min=float(np.nanmin(np.where(finite, m1, np.nan))) if ok else math.nan,
        dm_max=float(np.nanmax(np.where(finite, m1, np.nan))) if ok else math.nan,
        d2m_min=float(np.nanmin(np.where(finite, m2, np.nan))) if ok else math.nan,
        d2m_max=float(np.nanmax(np.where(finite, m2, np.nan))) if ok else math.nan,
        argmin=float(x[np.nanargmin(fm)]) if ok else math.nan,
        argmax=float(x[np.nanargmax(fm)]) if ok else math.nan,
        nonpositive_at=bad_pos,
        nonfinite_at=bad_fin,
    )
