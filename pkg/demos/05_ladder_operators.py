"""
Ladder operators
================

Discrete raising and lowering operators with W = q/sqrt(2).  At a = -1/4 they
factorize the Hamiltonian; at a = 0 they do not.
"""

import numpy as np

from pdmlab import (
    Grid,
    OrderingParams,
    PctMap,
    build_ladder,
    build_von_roos,
    builtin,
    commutator_test,
    eigendecompose,
    factorization_test,
    oscillator_field,
)

p = builtin("poly1")
grid = Grid(-10.0, 10.0, 2001)
pmap = PctMap(p, x_range=(grid.x_min, grid.x_max))
V = oscillator_field(pmap, grid)

for a in (-0.25, 0.0):
    H = build_von_roos(p, OrderingParams.from_ab(a), grid, V)
    spec = eigendecompose(H, 4)
    pair = build_ladder(p, grid, a, pmap)
    probe = lambda x: np.exp(-0.5 * pmap.forward(x) ** 2)
    rep = factorization_test(pair, H, spec)
    print(f"a={a:+.2f}  [A-,A+]-1: {commutator_test(pair, [probe]):.1e}")
    print("   A+A- + 1/2 :", np.round(rep.plus_deviation, 5))
    print("   A-A+ - 1/2 :", np.round(rep.minus_deviation, 5))
