"""Lowest eigenpairs of symmetric tridiagonal operators.

Eigenvalues come from the implicit QL algorithm with Wilkinson shifts;
eigenvectors for just the requested levels come from inverse iteration on
a pivoted tridiagonal LU factorisation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import ConvergenceError, ValidationError
from .grid import Grid
from .operator import TridiagonalOperator

MAX_SWEEPS = 60


@njit(cache=True, nogil=True)
def _ql_implicit(d, e, max_sweeps):
    """Eigenvalues of the tridiagonal (d, e) in place.

    Returns -1 on success, otherwise the index whose eigenvalue failed to
    converge.  ``e`` has length n with ``e[n-1]`` used as scratch.
    """
    n = d.size
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= 2.220446049250313e-16 * dd:
                    break
                m += 1
            if m == l:
                break
            if it == max_sweeps:
                return l
            it += 1
            # Wilkinson shift from the leading 2x2 block
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = np.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + (r if g >= 0.0 else -r))
            s = 1.0
            c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = np.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return -1


@njit(cache=True, nogil=True)
def _solve_shifted(d, e, sigma, rhs, tiny):
    """Solve (T - sigma I) x = rhs by LU with partial pivoting."""
    n = d.size
    a = d - sigma  # diagonal
    bsup = np.zeros(n)  # first superdiagonal
    csup = np.zeros(n)  # second superdiagonal (fill-in)
    low = np.zeros(n)  # subdiagonal entries to eliminate
    x = rhs.copy()
    for i in range(n - 1):
        bsup[i] = e[i]
        low[i] = e[i]
    mult = np.zeros(n)
    swap = np.zeros(n, dtype=np.bool_)
    for i in range(n - 1):
        if abs(a[i]) >= abs(low[i]):
            if a[i] == 0.0:
                a[i] = tiny
            mu = low[i] / a[i]
            mult[i] = mu
            a[i + 1] -= mu * bsup[i]
            x[i + 1] -= mu * x[i]
        else:
            swap[i] = True
            mu = a[i] / low[i]
            mult[i] = mu
            # swap rows i and i+1
            a[i] = low[i]
            t = a[i + 1]
            a[i + 1] = bsup[i] - mu * t
            bsup[i] = t
            if i < n - 2:
                csup[i] = bsup[i + 1]
                bsup[i + 1] = -mu * csup[i]
            t = x[i]
            x[i] = x[i + 1]
            x[i + 1] = t - mu * x[i + 1]
    if a[n - 1] == 0.0:
        a[n - 1] = tiny
    x[n - 1] /= a[n - 1]
    if n > 1:
        x[n - 2] = (x[n - 2] - bsup[n - 2] * x[n - 1]) / a[n - 2]
    for i in range(n - 3, -1, -1):
        x[i] = (x[i] - bsup[i] * x[i + 1] - csup[i] * x[i + 2]) / a[i]
    return x


@njit(cache=True, nogil=True)
def _inverse_iteration(d, e, lams, start, iterations):
    n = d.size
    k = lams.size
    vecs = np.zeros((k, n))
    norm_t = 0.0
    for i in range(n):
        s = abs(d[i])
        if i > 0:
            s += abs(e[i - 1])
        if i < n - 1:
            s += abs(e[i])
        if s > norm_t:
            norm_t = s
    tiny = 2.220446049250313e-16 * max(norm_t, 1e-300)
    for j in range(k):
        x = start[j].copy()
        sigma = lams[j]
        for _ in range(iterations):
            x = _solve_shifted(d, e, sigma, x, tiny)
            for r in range(j):
                if abs(lams[r] - sigma) < 1e-3 * norm_t:
                    dot = 0.0
                    for i in range(n):
                        dot += vecs[r, i] * x[i]
                    for i in range(n):
                        x[i] -= dot * vecs[r, i]
            nrm = np.sqrt(np.sum(x * x))
            x /= nrm
        vecs[j] = x
    return vecs


@dataclass(frozen=True)
class Spectrum:
    """Lowest eigenpairs of a Dirichlet operator.

    ``eigenvectors[n]`` samples state n on every grid node (zero at the
    walls) and is normalised so that the trapezoid rule gives unit L2 norm.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    residuals: np.ndarray
    grid: Grid

    def __len__(self) -> int:
        return self.eigenvalues.size

    def state(self, n: int) -> np.ndarray:
        return self.eigenvectors[n]


def tridiagonal_eigenvalues(diag, offdiag) -> np.ndarray:
    """All eigenvalues, ascending."""
    d = np.array(diag, dtype=float)
    e = np.zeros(d.size)
    e[: d.size - 1] = offdiag
    failed = _ql_implicit(d, e, MAX_SWEEPS)
    if failed >= 0:
        raise ConvergenceError(f"QL iteration did not converge for eigenvalue index {failed}")
    return np.sort(d)


def _fix_sign(v: np.ndarray) -> np.ndarray:
    big = np.nonzero(np.abs(v) > 1e-3 * np.max(np.abs(v)))[0]
    return -v if big.size and v[big[0]] < 0 else v


def eigendecompose(H: TridiagonalOperator, count: int) -> Spectrum:
    """Lowest ``count`` eigenpairs of ``H``; output is deterministic."""
    n = H.size
    if not 1 <= count <= n:
        raise ValidationError(f"count must be between 1 and {n}, got {count}")
    lams = tridiagonal_eigenvalues(H.diag, H.offdiag)[:count]
    rng = np.random.default_rng(20070401)
    start = rng.standard_normal((count, n))
    vecs = _inverse_iteration(H.diag, H.offdiag, lams, start, 3)
    # one Rayleigh quotient to polish the eigenvalues
    resid = np.empty(count)
    w = H.grid.weights()
    full = np.zeros((count, H.grid.n))
    for i in range(count):
        v = _fix_sign(vecs[i])
        hv = H.matvec(v)
        lams[i] = v @ hv / (v @ v)
        resid[i] = np.linalg.norm(hv - lams[i] * v) / np.linalg.norm(v)
        full[i, 1:-1] = v
        full[i] /= np.sqrt(w @ (full[i] ** 2))
    order = np.argsort(lams, kind="stable")
    full.flags.writeable = False
    return Spectrum(lams[order], full[order], resid[order], H.grid)


def residual_check(H: TridiagonalOperator, spectrum: Spectrum) -> float:
    """Largest ``||H psi - E psi|| / ||psi||`` over the pairs in ``spectrum``."""
    if spectrum.grid != H.grid:
        raise ValidationError("spectrum and operator grids differ")
    worst = 0.0
    for E, psi in zip(spectrum.eigenvalues, spectrum.eigenvectors):
        v = np.asarray(psi, dtype=float)
        v = v[1:-1] if v.size == H.grid.n else v
        nv = np.linalg.norm(v)
        if nv == 0.0:
            raise ValidationError("zero eigenvector supplied")
        worst = max(worst, float(np.linalg.norm(H.matvec(v) - E * v) / nv))
    return worst
