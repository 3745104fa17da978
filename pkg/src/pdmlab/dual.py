"""Second-order forward-mode dual numbers.

A :class:`Dual2` carries a value together with its first and second
derivative with respect to one seed variable.  Components may be Python
scalars, complex numbers or numpy arrays, so a whole grid can be pushed
through an expression in one pass.
"""

from __future__ import annotations

import math
from numbers import Number

import numpy as np


def _is_plain(v) -> bool:
    return isinstance(v, (float, int)) and not isinstance(v, bool)


def _exp(v):
    return math.exp(v) if _is_plain(v) else np.exp(v)


def _sqrt(v):
    return math.sqrt(v) if _is_plain(v) and v >= 0 else np.sqrt(v)


def _log(v):
    return math.log(v) if _is_plain(v) and v > 0 else np.log(v)


class Dual2:
    """Truncated Taylor triple ``(f, f', f'')``."""

    __slots__ = ("v", "d1", "d2")

    def __init__(self, v, d1=0.0, d2=0.0):
        self.v = v
        self.d1 = d1
        self.d2 = d2

    @classmethod
    def variable(cls, x) -> "Dual2":
        """Seed ``x`` as the independent variable."""
        if isinstance(x, np.ndarray):
            return cls(x, np.ones_like(x, dtype=float), np.zeros_like(x, dtype=float))
        return cls(x, 1.0, 0.0)

    @classmethod
    def constant(cls, c) -> "Dual2":
        return cls(c, 0.0, 0.0)

    def __repr__(self) -> str:
        return f"Dual2({self.v!r}, {self.d1!r}, {self.d2!r})"

    def as_tuple(self):
        return self.v, self.d1, self.d2

    # arithmetic ---------------------------------------------------------

    def __neg__(self):
        return Dual2(-self.v, -self.d1, -self.d2)

    def __pos__(self):
        return self

    def __add__(self, other):
        if isinstance(other, Dual2):
            return Dual2(self.v + other.v, self.d1 + other.d1, self.d2 + other.d2)
        return Dual2(self.v + other, self.d1, self.d2)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Dual2):
            return Dual2(self.v - other.v, self.d1 - other.d1, self.d2 - other.d2)
        return Dual2(self.v - other, self.d1, self.d2)

    def __rsub__(self, other):
        return Dual2(other - self.v, -self.d1, -self.d2)

    def __mul__(self, other):
        if isinstance(other, Dual2):
            return Dual2(
                self.v * other.v,
                self.d1 * other.v + self.v * other.d1,
                self.d2 * other.v + 2.0 * self.d1 * other.d1 + self.v * other.d2,
            )
        return Dual2(self.v * other, self.d1 * other, self.d2 * other)

    __rmul__ = __mul__

    def reciprocal(self) -> "Dual2":
        r = 1.0 / self.v
        r2 = r * r
        return Dual2(r, -self.d1 * r2, 2.0 * self.d1 * self.d1 * r2 * r - self.d2 * r2)

    def __truediv__(self, other):
        if isinstance(other, Dual2):
            return self * other.reciprocal()
        return Dual2(self.v / other, self.d1 / other, self.d2 / other)

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, other):
        if isinstance(other, Dual2):
            if _all_zero(other.d1) and _all_zero(other.d2):
                return self._power(other.v)
            return exp(other * log(self))
        return self._power(other)

    def __rpow__(self, other):
        # c ** u = exp(u log c)
        return exp(self * _log(other))

    def _power(self, c) -> "Dual2":
        if isinstance(c, Number) and c == 0:
            one = self.v * 0 + 1.0
            return Dual2(one, self.d1 * 0.0, self.d2 * 0.0)
        if isinstance(c, Number) and c == 1:
            return Dual2(self.v, self.d1, self.d2)
        u = self.v
        f0 = u ** c
        f1 = c * u ** (c - 1)
        if isinstance(c, Number) and c == 2:
            f2 = 2.0
        else:
            f2 = c * (c - 1) * u ** (c - 2)
        return self._chain(f0, f1, f2)

    def _chain(self, f0, f1, f2) -> "Dual2":
        """Compose with a scalar function given its value and derivatives at ``self.v``."""
        return Dual2(f0, f1 * self.d1, f2 * self.d1 * self.d1 + f1 * self.d2)


def _all_zero(v) -> bool:
    if isinstance(v, np.ndarray):
        return not np.any(v)
    return v == 0


def exp(u):
    if not isinstance(u, Dual2):
        return _exp(u)
    e = _exp(u.v)
    return u._chain(e, e, e)


def sqrt(u):
    if not isinstance(u, Dual2):
        return _sqrt(u)
    s = _sqrt(u.v)
    inv = 1.0 / s
    return u._chain(s, 0.5 * inv, -0.25 * inv * inv * inv)


def log(u):
    if not isinstance(u, Dual2):
        return _log(u)
    inv = 1.0 / u.v
    return u._chain(_log(u.v), inv, -inv * inv)


def derivatives(f, x):
    """Return ``(f(x), f'(x), f''(x))`` for a function written with this module's ops."""
    out = f(Dual2.variable(x))
    if not isinstance(out, Dual2):
        zero = np.zeros_like(x, dtype=float) if isinstance(x, np.ndarray) else 0.0
        return out, zero, zero
    return out.as_tuple()
