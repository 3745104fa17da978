"""
The PDM oscillator spectrum
===========================

For the ordering a = b = -1/4 and V = q(x)^2/2 the levels are n + 1/2
whatever the mass profile.  Halving the grid spacing cuts the error by four.
"""

import numpy as np

from pdmlab import Grid, OrderingParams, PctMap, build_von_roos, builtin, eigendecompose, oscillator_field

profile = builtin("poly1")
ordering = OrderingParams.preset("mm")

for n in (1001, 2001, 4001):
    grid = Grid(-10.0, 10.0, n)
    pmap = PctMap(profile, x_range=(grid.x_min, grid.x_max))
    H = build_von_roos(profile, ordering, grid, oscillator_field(pmap, grid))
    spec = eigendecompose(H, 6)
    err = np.abs(spec.eigenvalues - (np.arange(6) + 0.5))
    print(f"n={n:5d}  E={np.round(spec.eigenvalues, 6)}  max err={err.max():.2e}")
