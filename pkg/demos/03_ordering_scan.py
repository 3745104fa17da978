"""
Scanning the ordering ambiguity
===============================

Sweep a along b = -1/2 - a and watch the spectrum leave the oscillator
ladder everywhere except a = -1/4.
"""

from pdmlab import Grid, builtin, ordering_scan
from pdmlab.scan import default_a_values

result = ordering_scan(builtin("poly1"), Grid(-10.0, 10.0, 1001), default_a_values(steps=17))
for row in result.rows:
    bar = "#" * min(60, int(row.deviation * 1500))
    print(f"a={row.a:+.4f}  dev={row.deviation:.2e}  c1={row.c1:+.3f}  c2={row.c2:+.4f}  {bar}")
print("argmin a =", result.argmin_a)
