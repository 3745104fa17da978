"""
Effective potentials
====================

The ordering-dependent potential that appears after the transformation, and
the corrected partner potentials built from m^(-1/2).
"""

import numpy as np

from pdmlab import PctMap, builtin, cruz_corrected_potential, effective_potential, uniqueness_conditions

p = builtin("poly1")
pmap = PctMap(p)
x = np.linspace(-3, 3, 7)
V = 0.5 * pmap.forward(x) ** 2

for name, (a, b) in {"bdd": (0.0, -0.5), "zk": (-0.5, 0.0), "mm": (-0.25, -0.25)}.items():
    extra = effective_potential(p, a, b, V, x) - V
    print(f"{name}: (c1, c2) = {uniqueness_conditions(a, b)}  V_eff - V = {np.round(extra, 4)}")

for a in (0.0, -0.25):
    vp = cruz_corrected_potential(p, pmap, a, +1, x)
    vm = cruz_corrected_potential(p, pmap, a, -1, x)
    print(f"a={a}: V+ - V- = {np.round(vp - vm, 4)}")
