# %% [markdown]
# # Laurent coefficients of products of q-Pochhammer symbols
#
# A product of (alpha t), (beta/t) over (gamma t), (delta/t) is analytic on
# the ring max|delta| < |t| < 1/max|gamma| and has a Laurent expansion
# there.  `laurent_coeff` extracts individual coefficients numerically.

# %%
from qbilateral import GeneralProductSpec, QuadratureConfig, laurent_coeff, qpoch_ratio

# %% [markdown]
# Euler: 1 / (t; q)_inf = sum_n t^n / (q; q)_n.

# %%
q = 0.5
spec = GeneralProductSpec(gamma=[1.0], q=q)
for n in range(5):
    exact = 1 / qpoch_ratio([q], [q**(n + 1)], q).value  # 1/(q; q)_n
    print(n, laurent_coeff(spec, n).value.real, exact)

# %% [markdown]
# Ramanujan's 1psi1 sum says that (q, b/a, at, q/at) / (b, q/a, t, b/at)
# has Laurent coefficients (a; q)_n / (b; q)_n on |b/a| < |t| < 1.
# Negative n are included; there the coefficients come from the part of
# the product singular at t = 0.

# %%
a, b, q = 0.3 + 0.2j, 0.25, 0.4
spec = GeneralProductSpec(alpha=[a], beta=[q / a], gamma=[1.0], delta=[b / a], q=q)
scale = qpoch_ratio([q, b / a], [b, q / a], q).value


def ratio_poch(n):
    """(a; q)_n / (b; q)_n for any integer n, straight from the products."""
    return qpoch_ratio([a, b * q**n], [b, a * q**n], q).value


for n in (-3, -1, 0, 2):
    print(n, scale * laurent_coeff(spec, n).value, ratio_poch(n))

# %% [markdown]
# The radius can be pinned; the answer should not move.

# %%
for r in (0.75, 0.85, 0.95):
    print(r, laurent_coeff(spec, -2, QuadratureConfig(radius=r)).value)
