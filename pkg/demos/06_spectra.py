"""
Neumann spectra of cross-sections
=================================

The first nonzero Neumann eigenvalue of a convex cross-section is at least
d-1.  Arcs have closed forms; caps are solved by shooting on the
axisymmetric and first azimuthal modes.
"""

import math

from cknlab import spectral as sp

for theta in (math.pi / 2, math.pi, 1.5 * math.pi):
    r = sp.lambda1_arc(theta)
    print(f"arc {theta:.4f}: lambda1={r.lambda1:.10f} fd={sp.lambda1_arc_fd(theta):.10f}")

print("hemisphere:", sp.lambda1_cap(math.pi / 2))
print("cap pi/4  :", sp.lambda1_cap(math.pi / 4).lambda1)

for kind in ("arc", "cap"):
    rows, crossing = sp.convexity_threshold_scan(kind, sp.default_grid(kind))
    print(f"{kind}: threshold crossed near theta = {crossing}")
    for theta, lam, branch, convex, ok in rows[::4]:
        print(f"  theta={theta:.3f} lambda1={lam:.5f} branch={branch} convex={convex} ok={ok}")
