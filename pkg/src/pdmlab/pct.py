"""Point canonical transformation ``q(x) = integral of sqrt(m)`` and its inverse."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import ConvergenceError, DomainError, ValidationError
from .grid import Grid
from .profiles import MassProfile
from .quadrature import integrate_segments

QUAD_TOL = 1e-10
INVERSE_TOL = 1e-12
DEFAULT_RANGE = (-10.0, 10.0)


@dataclass(frozen=True)
class PctMap:
    """Forward and inverse point canonical map anchored at ``q(x_ref) = 0``.

    A table of ``n_cache`` samples of q over ``x_range`` seeds the inverse;
    guesses from a monotone cubic interpolant are then polished by a
    bracketed Newton iteration on the exact quadrature.
    """

    profile: MassProfile
    x_ref: float = 0.0
    x_range: tuple[float, float] = DEFAULT_RANGE
    n_cache: int = 2049
    tol: float = QUAD_TOL
    x_table: np.ndarray = field(init=False, repr=False, compare=False)
    q_table: np.ndarray = field(init=False, repr=False, compare=False)
    _interp: PchipInterpolator = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        lo, hi = (float(v) for v in self.x_range)
        dlo, dhi = self.profile.domain
        # open domain: pull a finite range just inside any finite endpoint
        lo = max(lo, dlo + 1e-12 * max(1.0, abs(dlo))) if math.isfinite(dlo) else lo
        hi = min(hi, dhi - 1e-12 * max(1.0, abs(dhi))) if math.isfinite(dhi) else hi
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise ValidationError(f"invalid cache range {self.x_range}")
        if not bool(self.profile.in_domain(self.x_ref)):
            raise DomainError(f"x_ref={self.x_ref} outside profile domain {self.profile.domain}")
        if self.n_cache < 3:
            raise ValidationError("n_cache must be at least 3")
        object.__setattr__(self, "x_range", (lo, hi))
        x = np.linspace(lo, hi, self.n_cache)
        q = self._cumulative(x)
        if not np.all(np.diff(q) > 0):
            raise ValidationError("q(x) is not strictly increasing on the cache range; is m > 0 there?")
        x.flags.writeable = False
        q.flags.writeable = False
        object.__setattr__(self, "x_table", x)
        object.__setattr__(self, "q_table", q)
        object.__setattr__(self, "_interp", PchipInterpolator(q, x, extrapolate=False))

    # integrand ----------------------------------------------------------

    def sqrt_mass(self, x):
        m = self.profile(np.asarray(x, dtype=float))
        with np.errstate(invalid="ignore"):
            return np.sqrt(m)

    def _check_domain(self, x: np.ndarray):
        if not np.all(self.profile.in_domain(x)):
            bad = x[~self.profile.in_domain(x)]
            raise DomainError(f"x={bad.flat[0]!r} outside profile domain {self.profile.domain}")

    def _cumulative(self, x: np.ndarray) -> np.ndarray:
        """q at each entry of ``x`` by summing quadratures between sorted neighbours."""
        flat = np.asarray(x, dtype=float).ravel()
        self._check_domain(flat)
        pts = np.concatenate(([self.x_ref], flat))
        order = np.argsort(pts, kind="stable")
        s = pts[order]
        pieces = integrate_segments(self.sqrt_mass, s[:-1], s[1:], self.tol)
        cum = np.concatenate(([0.0], np.cumsum(pieces)))
        q_sorted = cum - cum[np.nonzero(order == 0)[0][0]]
        q = np.empty_like(q_sorted)
        q[order] = q_sorted
        return q[1:].reshape(np.shape(x))

    # public API ---------------------------------------------------------

    @property
    def q_range(self) -> tuple[float, float]:
        """q values at the ends of the cached x range."""
        return float(self.q_table[0]), float(self.q_table[-1])

    def forward(self, x):
        """q(x) for a scalar or array of x in the profile domain."""
        if np.ndim(x) == 0:
            x = float(x)
            self._check_domain(np.array([x]))
            lo, hi = (self.x_ref, x) if x >= self.x_ref else (x, self.x_ref)
            val = float(integrate_segments(self.sqrt_mass, [lo], [hi], self.tol)[0])
            return val if x >= self.x_ref else -val
        return self._cumulative(np.asarray(x, dtype=float))

    def inverse(self, q):
        """x with ``|q(x) - q| <= 1e-9`` for q inside :attr:`q_range`."""
        scalar = np.ndim(q) == 0
        qv = np.atleast_1d(np.asarray(q, dtype=float)).ravel()
        q_lo, q_hi = self.q_range
        outside = ~((qv >= q_lo) & (qv <= q_hi))
        if outside.any():
            hint = " (this profile has a bounded q-range)" if q_range_bounded(self.profile) else ""
            raise DomainError(
                f"q={qv[outside][0]!r} outside attainable range [{q_lo:.10g}, {q_hi:.10g}] "
                f"of x in {self.x_range}{hint}"
            )
        idx = np.clip(np.searchsorted(self.q_table, qv, side="right") - 1, 0, self.n_cache - 2)
        left, right = self.x_table[idx].copy(), self.x_table[idx + 1].copy()
        q_node = self.q_table[idx]
        x = np.clip(self._interp(qv), left, right)
        for _ in range(60):
            resid = q_node + integrate_segments(self.sqrt_mass, self.x_table[idx], x, self.tol * 1e-3) - qv
            if np.all(np.abs(resid) <= INVERSE_TOL):
                break
            left = np.where(resid < 0, x, left)
            right = np.where(resid > 0, x, right)
            step = x - resid / self.sqrt_mass(x)
            bad = ~((step > left) & (step < right))
            x = np.where(bad, 0.5 * (left + right), step)
        else:
            raise ConvergenceError("inverse point canonical map did not converge")
        x = x.reshape(np.shape(q))
        return float(x) if scalar else x


def forward_map(pmap: PctMap, x):
    return pmap.forward(x)


def inverse_map(pmap: PctMap, q):
    return pmap.inverse(q)


def q_range_bounded(profile: MassProfile) -> bool:
    """Heuristic: does q(x) stay bounded as x runs over the whole domain?

    True for a finite domain, or when ``|x| sqrt(m(x))`` decays far out
    (the integral of sqrt(m) then converges).  Used only for flagging.
    """
    lo, hi = profile.domain
    if math.isfinite(lo) or math.isfinite(hi):
        return True
    probes = np.array([1e4, 1e6, 1e8])
    with np.errstate(all="ignore"):
        tails = []
        for sign in (1.0, -1.0):
            x = sign * probes
            s = np.abs(x) * np.sqrt(np.asarray(profile(x), dtype=float))
            tails.append(bool(np.all(np.isfinite(s)) and s[-1] < 1e-2 * s[0] and s[-1] < s[1] < s[0]))
    return any(tails)


ArrayOrGrid = Union[np.ndarray, Grid]


def _as_points(g: ArrayOrGrid) -> np.ndarray:
    pts = np.asarray(getattr(g, "points", g), dtype=float)
    if pts.ndim != 1 or pts.size < 2 or not np.all(np.diff(pts) > 0):
        raise ValidationError("sample grids must be 1-D and strictly increasing")
    return pts


def map_wavefunction(pmap: PctMap, values, source: ArrayOrGrid, target: ArrayOrGrid, direction: str = "x->q"):
    """Carry a sampled wavefunction across the transformation.

    ``"x->q"``: ``values`` are psi on the x-nodes ``source``; returns
    ``phi(q) = m(x(q))**(-1/4) psi(x(q))`` on the q-nodes ``target``.
    ``"q->x"``: ``values`` are phi on q-nodes; returns
    ``psi(x) = m(x)**(1/4) phi(q(x))`` on x-nodes.  Resampling is monotone
    cubic; with ``dq = sqrt(m) dx`` this preserves the L2 norm.
    """
    src = _as_points(source)
    tgt = _as_points(target)
    vals = np.asarray(values)
    if vals.shape != src.shape:
        raise ValidationError("values and source grid differ in length")
    if direction == "x->q":
        q_lo, q_hi = pmap.forward(src[0]), pmap.forward(src[-1])
        if tgt[0] < q_lo - 1e-12 or tgt[-1] > q_hi + 1e-12:
            raise DomainError(f"target q-grid [{tgt[0]}, {tgt[-1]}] outside attainable range [{q_lo}, {q_hi}]")
        x = np.clip(pmap.inverse(np.clip(tgt, q_lo, q_hi)), src[0], src[-1])
        return _resample(src, vals, x) * np.asarray(pmap.profile(x), dtype=float) ** -0.25
    if direction == "q->x":
        q = pmap.forward(tgt)
        if q[0] < src[0] - 1e-12 or q[-1] > src[-1] + 1e-12:
            raise DomainError(f"target x-grid maps to q in [{q[0]}, {q[-1]}], outside source [{src[0]}, {src[-1]}]")
        q = np.clip(q, src[0], src[-1])
        return _resample(src, vals, q) * np.asarray(pmap.profile(tgt), dtype=float) ** 0.25
    raise ValidationError(f"direction must be 'x->q' or 'q->x', got {direction!r}")


def _resample(src, vals, at):
    # pchip slope weights overflow harmlessly on underflowed tails
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        if np.iscomplexobj(vals):
            return PchipInterpolator(src, vals.real)(at) + 1j * PchipInterpolator(src, vals.imag)(at)
        return PchipInterpolator(src, vals)(at)
