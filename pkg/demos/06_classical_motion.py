"""
Classical motion
================

In x the oscillator looks anharmonic, yet the period is 2 pi at every
amplitude.  With V = 0 the velocity in q stays fixed.
"""

import math

import numpy as np

from pdmlab import PctMap, builtin, integrate, measure_period, qdot_conservation_check

p = builtin("poly1")
pmap = PctMap(p)
for amp in (0.25, 1.0, 4.0):
    x0 = float(pmap.inverse(amp))
    traj = integrate(p, "oscillator", x0, 0.0, 6 * math.pi, 1e-3, pmap)
    print(f"q-amplitude {amp}: x0={x0:.4f}  x range [{traj.x.min():.3f}, {traj.x.max():.3f}]"
          f"  period-2pi={measure_period(traj) - 2 * math.pi:.1e}  drift={traj.energy_drift:.1e}")

free = integrate(p, "free", 0.0, 1.0, 20.0, 1e-3, pmap)
print("free: x(20) =", round(float(free.x[-1]), 4), " max |qdot - qdot0| =", qdot_conservation_check(free))

# a bounded q-range means the soliton particle reaches infinity in finite time
try:
    integrate(builtin("soliton"), "free", 0.0, 1.0, 3.0, 1e-3)
except Exception as exc:
    print(type(exc).__name__, exc, "| pi/2 =", round(np.pi / 2, 4))
