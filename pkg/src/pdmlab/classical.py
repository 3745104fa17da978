"""Classical dynamics of a position-dependent-mass particle.

Hamilton's equations for ``H = p**2 / (2 m(x)) + V(x)`` read

    dx/dt = p / m,    dp/dt = p**2 m' / (2 m**2) - dV/dx.

The oscillator potential ``V = q(x)**2 / 2`` has ``dV/dx = q sqrt(m)``, so
q itself is carried along as a third state variable with
``dq/dt = sqrt(m) dx/dt = p / sqrt(m)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from .dual import Dual2
from .errors import DomainError, DriftError, EscapeError, NoPeriodError, ValidationError
from .pct import PctMap, q_range_bounded
from .profiles import MassProfile

DRIFT_TOL = 1e-8
ESCAPE_TOL = 1e-6
POTENTIALS = ("free", "oscillator")


@dataclass(frozen=True)
class PhaseState:
    x: float
    p: float
    t: float = 0.0


@dataclass(frozen=True)
class Trajectory:
    t: np.ndarray
    x: np.ndarray
    p: np.ndarray
    q: np.ndarray
    qdot: np.ndarray
    energy: np.ndarray
    dt: float
    potential: str
    method: str = "rk4"

    def __len__(self) -> int:
        return self.t.size

    @property
    def energy_drift(self) -> float:
        """``max |E(t) - E(0)| / |E(0)|`` (absolute if ``E(0) == 0``)."""
        e0 = self.energy[0]
        dev = float(np.max(np.abs(self.energy - e0)))
        return dev / abs(e0) if e0 != 0 else dev

    def state(self, i: int) -> PhaseState:
        return PhaseState(float(self.x[i]), float(self.p[i]), float(self.t[i]))

    def columns(self):
        return ("t", "x", "p", "q", "qdot", "energy"), (self.t, self.x, self.p, self.q, self.qdot, self.energy)


PotentialArg = Union[None, str, Callable[[float], tuple[float, float]]]


def _force_law(potential: PotentialArg):
    """Return (kind, dV/dx as a function of (x, q, sqrt_m), V as a function of (x, q))."""
    if potential is None or potential in ("free", "zero"):
        return "free", None, lambda x, q: np.zeros_like(q)
    if potential == "oscillator":
        return "oscillator", (lambda x, q, s: q * s), (lambda x, q: 0.5 * q * q)
    if callable(potential):
        def grad(x, q, s):
            return potential(x)[1]

        def value(x, q):
            return np.array([potential(float(xi))[0] for xi in np.ravel(x)]).reshape(np.shape(x))

        return "custom", grad, value
    raise ValidationError(f"potential must be one of {POTENTIALS} or a callable, got {potential!r}")


def integrate(
    profile: MassProfile,
    potential: PotentialArg,
    x0: float,
    p0: float,
    t_end: float,
    dt: float,
    pmap: Optional[PctMap] = None,
    stride: int = 1,
    drift_tol: Optional[float] = DRIFT_TOL,
) -> Trajectory:
    """Fixed-step fourth-order Runge-Kutta trajectory.

    ``potential`` is ``"free"``, ``"oscillator"`` or a callable returning
    ``(V(x), V'(x))``.  Every ``stride``-th step is recorded; q along the
    trajectory is recomputed from the quadrature in ``pmap``.  Raises
    :class:`EscapeError` if the particle leaves the profile domain and
    :class:`DriftError` if the relative energy drift exceeds ``drift_tol``.
    """
    if not dt > 0 or not t_end > 0:
        raise ValidationError("dt and t_end must be positive")
    if stride < 1:
        raise ValidationError("stride must be at least 1")
    if not bool(profile.in_domain(x0)):
        raise DomainError(f"x0={x0} outside profile domain {profile.domain}")
    kind, grad, value = _force_law(potential)
    if pmap is None:
        pmap = PctMap(profile)
    mass = profile.mass_and_slope
    lo, hi = profile.domain
    sqrt = math.sqrt

    def rhs(x, p, q):
        m, dm = mass(x)
        s = sqrt(m)
        f = p * p * dm / (2.0 * m * m)
        if grad is not None:
            f -= grad(x, q, s)
        return p / m, f, p / s

    steps = int(math.ceil(t_end / dt - 1e-9))
    n_rec = steps // stride + 1
    ts = np.empty(n_rec)
    xs = np.empty(n_rec)
    ps = np.empty(n_rec)
    qi = np.empty(n_rec)
    x, p, q = float(x0), float(p0), float(pmap.forward(float(x0)))
    ts[0], xs[0], ps[0], qi[0] = 0.0, x, p, q
    h = dt
    half = 0.5 * h
    sixth = h / 6.0
    rec = 1
    for i in range(1, steps + 1):
        try:
            k1x, k1p, k1q = rhs(x, p, q)
            k2x, k2p, k2q = rhs(x + half * k1x, p + half * k1p, q + half * k1q)
            k3x, k3p, k3q = rhs(x + half * k2x, p + half * k2p, q + half * k2q)
            k4x, k4p, k4q = rhs(x + h * k3x, p + h * k3p, q + h * k3q)
        except (ValueError, ZeroDivisionError, OverflowError):
            raise EscapeError(f"trajectory left the profile domain near t={(i - 1) * h:.6g}", (i - 1) * h) from None
        x += sixth * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        p += sixth * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        q += sixth * (k1q + 2.0 * k2q + 2.0 * k3q + k4q)
        if not (lo < x < hi) or not math.isfinite(p):
            raise EscapeError(f"trajectory left the profile domain at t={i * h:.6g}", i * h)
        if i % stride == 0:
            ts[rec], xs[rec], ps[rec], qi[rec] = i * h, x, p, q
            rec += 1
    ts, xs, ps, qi = ts[:rec], xs[:rec], ps[:rec], qi[:rec]
    m = np.asarray(profile(xs), dtype=float) + np.zeros_like(xs)
    qs = pmap.forward(xs)
    # a particle that runs through x = infinity (bounded q-range) keeps
    # advancing q while q(x) folds back; elsewhere a mismatch is plain
    # truncation error and is left to the drift audit
    lost = np.nonzero(np.abs(qi - qs) > ESCAPE_TOL * (1.0 + np.abs(qs)))[0]
    if lost.size and q_range_bounded(profile):
        t_exit = float(ts[max(lost[0] - 1, 0)])
        raise EscapeError(f"trajectory left the profile domain (reached x = +/-inf) near t={t_exit:.6g}", t_exit)
    qdot = ps / np.sqrt(m)
    energy = ps * ps / (2.0 * m) + value(xs, qs)
    traj = Trajectory(ts, xs, ps, qs, qdot, energy, dt, kind)
    if drift_tol is not None and traj.energy_drift > drift_tol:
        raise DriftError(f"relative energy drift {traj.energy_drift:.3g} exceeds {drift_tol:g}; try a smaller dt")
    return traj


def measure_period(traj: Trajectory) -> float:
    """Mean period from successive zero crossings of q-dot (linearly interpolated)."""
    v = traj.qdot
    idx = np.nonzero(np.signbit(v[:-1]) != np.signbit(v[1:]))[0]
    if idx.size < 3:
        raise NoPeriodError("no period: q-dot changes sign fewer than three times")
    t0, t1, v0, v1 = traj.t[idx], traj.t[idx + 1], v[idx], v[idx + 1]
    crossings = t0 - v0 * (t1 - t0) / (v1 - v0)
    return float(np.mean(crossings[2:] - crossings[:-2]))


def qdot_conservation_check(traj: Trajectory) -> float:
    """``max |qdot(t) - qdot(0)|`` for a force-free trajectory."""
    if traj.potential != "free":
        raise ValidationError("q-dot is conserved only for the free (V=0) case")
    return float(np.max(np.abs(traj.qdot - traj.qdot[0])))


def ladder_functions(q, P):
    """Classical ``(a+, a-)`` with ``a(+/-) = -/+ i P / sqrt2 + q / sqrt2``."""
    r = 1.0 / math.sqrt(2.0)
    return -1j * r * P + r * q, 1j * r * P + r * q


def classical_factorization_check(q: float, P: float) -> tuple[complex, complex]:
    """Return ``(a+ a-, {a-, a+})``.

    The Poisson bracket is built from partial derivatives taken with
    forward-mode dual numbers, seeding q and P in turn.
    """
    a_plus, a_minus = ladder_functions(q, P)
    product = complex(a_plus * a_minus)
    dq_plus, dq_minus = ladder_functions(Dual2.variable(q), P)
    dP_plus, dP_minus = ladder_functions(q, Dual2.variable(P))
    bracket = dP_minus.d1 * dq_plus.d1 - dq_minus.d1 * dP_plus.d1
    return product, complex(bracket)


def q_space_solution(q0: float, qdot0: float, t):
    """Unit-mass, unit-frequency oscillator ``q(t) = q0 cos t + qdot0 sin t``."""
    t = np.asarray(t, dtype=float)
    return q0 * np.cos(t) + qdot0 * np.sin(t)
