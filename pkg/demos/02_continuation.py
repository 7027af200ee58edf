# %% [markdown]
# # Basic hypergeometric series beyond the unit disk
#
# The power series for r+1 phi r only converges for |z| < 1.  Outside we
# use the fact that phi(x q^n) is the coefficient of t^n in a product of
# infinite q-Pochhammer symbols, and pull that coefficient off a circle
# with the trapezoid rule.  Here we compare the two methods where both
# apply and check the continuation against a closed form where it does not.

# %%
import cmath

import numpy as np

from qbilateral import PhiSpec, QuadratureConfig, phi_continued, phi_series, qpoch_infinite

# %% [markdown]
# Inside the disk: direct summation against forced quadrature.

# %%
spec = PhiSpec([0.2, 0.7], [0.5], 0.3, 0.6)
series = phi_series(spec)
contour = phi_continued(spec, force_quadrature=True)
print("series    ", series.value, series.method)
print("quadrature", contour.value, contour.method, "nodes:", contour.work)
print("difference", abs(series.value - contour.value))

# %% [markdown]
# The q-binomial theorem gives 1phi0(a; -; q, z) = (az; q)_inf / (z; q)_inf
# for every z off the poles, so it is a clean test of the continuation.
# Walk z along a ray from inside the disk out to |z| = 5.

# %%
a, q = 0.4 - 0.2j, 0.5
for modulus in np.linspace(0.5, 5.0, 7):
    z = cmath.rect(modulus, 2.0)
    got = phi_continued(PhiSpec([a], [], q, z)).value
    exact = qpoch_infinite(a * z, q).value / qpoch_infinite(z, q).value
    print(f"|z|={modulus:4.2f}  phi={got:.12f}  |error|={abs(got - exact):.1e}")

# %% [markdown]
# The coefficient does not depend on which circle inside the annulus
# max|a_i| < |t| < 1 we integrate over.  Two radii, one answer.

# %%
spec = PhiSpec([0.2, 0.5], [0.4], 0.3, -3.7)
for radius in (0.6, 0.75, 0.9):
    print(radius, phi_continued(spec, QuadratureConfig(radius=radius)).value)

# %% [markdown]
# Points of q^Z are where the kernel itself vanishes; the contour method
# declines to evaluate there.

# %%
from qbilateral.errors import PoleProximity

try:
    phi_continued(PhiSpec([0.2, 0.5], [0.4], 0.5j, 0.5j), force_quadrature=True)
except PoleProximity as exc:
    print("refused:", exc)
