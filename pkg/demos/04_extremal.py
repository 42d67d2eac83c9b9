"""
The extremal family
===================

The radial profiles u = mu (1 + (lam |x|)^beta)^(-2/(p-2)) solve the
Euler-Lagrange equation with a constant multiplier kappa.  We estimate kappa,
normalise, and check the associated pressure-like quantity P is constant.
"""

import math

from cknlab import ExtremalSpec
from cknlab import extremals as ex

spec = ExtremalSpec.from_abd(0.0, 0.0, 3)
print("raw Sobolev bubble: kappa =", ex.estimate_kappa(spec).kappa_mean)

norm = ex.normalize(spec)
print("normalised amplitude mu =", norm.mu, "(3^(1/4) =", 3 ** 0.25, ")")
print("equation residual:", ex.equation_residual(norm))
P = ex.check_P_constant(norm)
print("P mean:", P.metrics["P_mean"], "expected 2 sqrt(3) =", 2 * math.sqrt(3))

# A weighted case: all checks at once, including dilation invariance.
spec, reports = ex.verify_extremal(ex.CknParams(-0.5, 0.0, 2))
reports.append(ex.check_scaling_family(spec, (0.5, 2.0, 10.0)))
for rep in reports:
    print(f"{rep.name:24s} pass={rep.passed}")

# Neumann condition on cones: centred at the vertex the flux vanishes,
# off-vertex it does not.
for name, rep, expected in ex.neumann_suite():
    print(f"{name:28s} max flux={rep.metrics['max_abs_flux']:.1e} (expected pass={expected})")
