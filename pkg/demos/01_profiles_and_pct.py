"""
Mass profiles and the point canonical transformation
=====================================================

Builtin profiles, a user expression, and the map q(x) = int sqrt(m).
"""

import numpy as np

from pdmlab import Grid, PctMap, builtin, parse_profile, validate_profile

# the four builtins, plus a hand-written one with a free parameter
profiles = [builtin(n) for n in ("const", "poly1", "soliton", "rational")]
profiles.append(parse_profile("exp(-mu*x^2) + 1", params={"mu": 0.3}, name="bump"))

grid = Grid(-5.0, 5.0, 11)
for p in profiles:
    report = validate_profile(p, grid)
    print(f"{p.name:9s} min m = {report.m_min:.4f}  max m = {report.m_max:.4f}")

# q(x) grows like x^2/2 for m = 1+x^2 but saturates at pi/2 for the soliton
for name in ("poly1", "soliton"):
    pmap = PctMap(builtin(name))
    xs = np.array([0.5, 1.0, 5.0, 50.0])
    print(name, np.round(pmap.forward(xs), 6), "q-range", pmap.q_range)

# inverse map round trip
pmap = PctMap(builtin("poly1"))
q = np.linspace(-20, 20, 9)
print("max |q(x(q)) - q| =", np.max(np.abs(pmap.forward(pmap.inverse(q)) - q)))
