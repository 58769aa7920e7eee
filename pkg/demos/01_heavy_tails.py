"""Heavy tails: how a Student's t density compares with a Gaussian.

Both distributions below have zero mean and unit variance, yet the t
density puts noticeably more mass far from the centre.  That extra mass is
what lets a t-based search model keep proposing distant candidates.
"""
import numpy as np
from scipy import stats

from estda.distributions import EllipticalParams

# A unit-variance t with v degrees of freedom needs scale (v - 2) / v.
for v in (3, 5, 10, 50):
    t = EllipticalParams([0.0], [[(v - 2) / v]], dof=v)
    g = EllipticalParams([0.0], [[1.0]])
    x = np.array([[0.0], [2.0], [4.0]])
    ratio = np.exp(t.logpdf(x) - g.logpdf(x))
    print(f"v={v:3d}  t/normal density ratio at x=0,2,4: {np.round(ratio, 3)}")

# Tail probability P(|X| > 4) under each law.
print("\nP(|X| > 4):")
print(f"  normal      {2 * stats.norm.sf(4):.2e}")
for v in (3, 5, 10):
    s = np.sqrt((v - 2) / v)
    print(f"  t, v={v:<4d}  {2 * stats.t.sf(4 / s, df=v):.2e}")
