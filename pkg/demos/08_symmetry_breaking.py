"""
Symmetry and symmetry breaking
==============================

On the cylinder we minimise the Rayleigh quotient twice from the same
nonradial start: once restricted to radial (omega-independent) fields and
once freely.  A positive relative deficit signals symmetry breaking.
"""

from cknlab import classify
from cknlab import rayleigh as ray

for a, b in [(-0.5, 0.0), (-2.0, -1.5)]:
    dp, rep = ray.run_params(a, b, seed=0)
    print(f"a={a} b={b}: alpha={dp.alpha:.4f} alpha_fs={dp.alpha_fs:.4f} "
          f"predicted breaking={classify(dp).fs_breaking}")
    print(f"  E_radial={rep.E_radial:.8f} E_full={rep.E_full:.8f} deficit={rep.deficit:.4f} "
          f"detected={rep.breaking_detected} converged={rep.converged}")

# The six-point sweep along a = -2 crosses the threshold curve.
for row in ray.breaking_scan(ray.default_scan_points()):
    tag = "indeterminate" if row["indeterminate"] else ("agree" if row["agree"] else "DISAGREE")
    print(f"b={row['b']:5.2f} alpha={row['alpha']:.4f} alpha_fs={row['alpha_fs']:.4f} "
          f"deficit={row['deficit']:.3e} {tag}")
