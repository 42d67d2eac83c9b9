"""
Exponents and regimes
=====================

Every quantity in the package is driven by the triple (a, b, d).  Here we
derive the exponents for a few triples and draw the regime map.
"""

import numpy as np

from cknlab import CknParams, classify, derive
from cknlab.params import region_grid, region_rows

# The Sobolev case a = b = 0 in three dimensions: p = 6, alpha = 1, n = 3.
dp = derive(CknParams(0.0, 0.0, 3))
print(f"Sobolev: p={dp.p:g} alpha={dp.alpha:g} n={dp.n:g} Lambda={dp.Lambda:g}")

# Moving a below zero shrinks alpha and raises the effective dimension n.
for a, b, d in [(-0.5, 0.0, 2), (-1.0, -0.5, 3), (-2.0, -1.5, 2)]:
    dp = derive(CknParams(a, b, d))
    flags = classify(dp)
    print(f"a={a:5.2f} b={b:5.2f} d={d}: alpha={dp.alpha:.4f} alpha_fs={dp.alpha_fs:.4f} "
          f"n={dp.n:.4f} breaking={flags.fs_breaking} cd0n={flags.cd0n}")

# Inadmissible triples are rejected with a typed error.
try:
    derive(CknParams(1.0, 0.0, 3))
except ValueError as exc:
    print("rejected:", exc)

# A coarse text map of the (a, b) plane for d = 2: S = symmetric, B = breaking, . = inadmissible.
rows = region_rows(region_grid(2, (-3.0, -0.05), (-3.0, 1.0), 21))
a_vals = sorted({r[0] for r in rows})
b_vals = sorted({r[1] for r in rows}, reverse=True)
cell = {(r[0], r[1]): r for r in rows}
for b in b_vals:
    line = ""
    for a in a_vals:
        r = cell[(a, b)]
        line += "." if not r[2] else ("B" if r[4] else "S")
    print(f"b={b:6.2f} {line}")
print("         a from -3 to 0")
print("fraction breaking among admissible:",
      np.mean([r[4] for r in rows if r[2]]).round(3))
