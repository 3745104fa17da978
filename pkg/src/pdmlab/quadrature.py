"""Adaptive Simpson quadrature, vectorised over many intervals at once."""

from __future__ import annotations

import numpy as np

from .errors import ConvergenceError

_EPS = np.finfo(float).eps


def integrate_segments(f, lo, hi, tol: float = 1e-10, max_depth: int = 60) -> np.ndarray:
    """Integrate ``f`` over each interval ``[lo[i], hi[i]]``.

    ``f`` must accept and return 1-D arrays.  The absolute tolerance ``tol``
    applies to the *sum* of all segments; each segment gets a share
    proportional to its length.  Intervals are bisected independently until
    the Simpson/Richardson error estimate is below their share.

    Raises :class:`ConvergenceError` if some piece still fails after
    ``max_depth`` bisections.
    """
    lo = np.atleast_1d(np.asarray(lo, dtype=float))
    hi = np.atleast_1d(np.asarray(hi, dtype=float))
    lo, hi = np.broadcast_arrays(lo, hi)
    out = np.zeros(lo.shape, dtype=float)
    if lo.size == 0:
        return out
    if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
        raise ConvergenceError("integration limits must be finite")
    width = np.abs(hi - lo)
    total = width.sum()
    if total == 0:
        return out
    owner = np.arange(lo.size)
    a, b = lo.ravel().copy(), hi.ravel().copy()
    share = tol * width.ravel() / total
    keep = a != b
    owner, a, b, share = owner[keep], a[keep], b[keep], share[keep]
    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    flat = out.ravel()
    depth = 0
    while owner.size:
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        half = (b - a) / 12.0
        left = half * (fa + 4.0 * flm + fm)
        right = half * (fm + 4.0 * frm + fb)
        both = left + right
        err = (both - whole) / 15.0
        if not np.all(np.isfinite(both)):
            raise ConvergenceError("integrand is not finite on the integration interval")
        floor = 64.0 * _EPS * np.abs(both)
        done = np.abs(err) <= np.maximum(share, floor)
        np.add.at(flat, owner[done], both[done] + err[done])
        todo = ~done
        if not todo.any():
            break
        depth += 1
        if depth > max_depth:
            bad = float(a[todo][0])
            raise ConvergenceError(f"adaptive Simpson did not converge near x={bad:.6g}")
        a, m, b = a[todo], m[todo], b[todo]
        fa, fm, fb = fa[todo], fm[todo], fb[todo]
        flm, frm = flm[todo], frm[todo]
        left, right, share, owner = left[todo], right[todo], share[todo] / 2.0, owner[todo]
        # children: [a, m] with midpoint lm and [m, b] with midpoint rm
        a = np.concatenate([a, m])
        b2 = np.concatenate([m, b])
        m = np.concatenate([lm[todo], rm[todo]])
        fa, fb = np.concatenate([fa, fm]), np.concatenate([fm, fb])
        fm = np.concatenate([flm, frm])
        whole = np.concatenate([left, right])
        share = np.concatenate([share, share])
        owner = np.concatenate([owner, owner])
        b = b2
    return out


def adaptive_simpson(f, a: float, b: float, tol: float = 1e-10) -> float:
    """Integral of ``f`` over ``[a, b]``; ``f`` must be vectorised."""
    if a == b:
        return 0.0
    if a > b:
        return -adaptive_simpson(f, b, a, tol)
    return float(integrate_segments(f, [a], [b], tol)[0])
