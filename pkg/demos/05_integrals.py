"""
Growth of integrals along the extremal
======================================

Weighted volume grows exactly like R^n, the small-ball gradient energy
vanishes like r^(n+2), and annulus masses stay bounded by R^(n-q).
"""

import math

from cknlab import ConeSpec, ExtremalSpec, derive, CknParams
from cknlab import extremals as ex
from cknlab import integrals as integ

dp = derive(CknParams(-0.5, 0.0, 2))
R = [1.0, 2.0, 4.0, 8.0, 10.0]
for cone in (None, ConeSpec.arc(math.pi / 2)):
    g = integ.volume_growth(dp, R, cone)
    print("cone", "full" if cone is None else f"arc {cone.theta:.3f}",
          "ratios", [f"{r:.12f}" for r in g.ratios],
          "closed form", f"{integ.closed_form_volume_constant(dp, cone):.12f}")

spec = ex.normalize(ExtremalSpec(dp))
pr = integ.prop33_check(spec)
print(f"gradient energy slope {pr.fitted_exponent:.4f} vs n+2 = {dp.n + 2:.4f}")
for R_, v, ratio in pr.csv_rows()[:4]:
    print(f"  r={R_:.3g} I(r)={v:.3e} I(r)/r^2={ratio:.3e}")

for q in (0.0, 2.0, dp.n / 2 + 1):
    rep = integ.lemma44_check(spec, q)
    print(f"q={q:.3f}: sup M(R)/R^(n-q) = {rep.ratio_sup:.6f}")
