"""
Pointwise identities on random fields
=====================================

The Bochner-type identity and the decomposition of k hold for any smooth
positive field, so we test them on random Gaussian mixtures at random points.
"""

from cknlab import identities as ids

sets = ids.sample_sets(total=600, seed=1)
for name, rep in ids.run_suite(sets).items():
    print(f"{name:22s} samples={rep.samples:5d} max rel residual={rep.max_rel_residual:.2e} "
          f"pass={rep.pass_}")

# The same suite at a fixed (d, n, alpha), as the CLI's verify-identities does.
sets = ids.sample_sets(total=500, seed=1, d=3, n=4.0, alpha=0.6)
worst = max(r.max_rel_residual for r in ids.run_suite(sets).values())
print("fixed d=3 n=4 alpha=0.6, worst residual:", f"{worst:.2e}")
