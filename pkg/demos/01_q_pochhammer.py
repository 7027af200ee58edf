# %% [markdown]
# # q-Pochhammer symbols
#
# Everything else in the package is built from the products
# (a; q)_n = (1 - a)(1 - a q)...(1 - a q^{n-1}) and their limit n -> inf.
# This walk-through evaluates a few, checks the identities they obey and
# shows what happens at a pole.

# %%
from qbilateral import qpoch_finite, qpoch_infinite, qpoch_ratio
from qbilateral.errors import PoleProximity

# %% [markdown]
# A finite product with two factors: (1 - 0.7)(1 - 0.35).

# %%
print("(0.7; 0.5)_2      =", qpoch_finite(0.7, 0.5, 2))

# %% [markdown]
# Negative indices are defined by (a; q)_{-m} = 1 / (a q^{-m}; q)_m, so the
# product can be inverted term by term.

# %%
m = 3
neg = qpoch_finite(0.7, 0.5, -m)
print("(0.7; 0.5)_-3     =", neg)
print("reciprocity check =", neg * qpoch_finite(0.7 * 0.5**-m, 0.5, m))

# %% [markdown]
# Infinite products come back as an `EvalResult` with an error estimate and
# the number of factors used.  Complex arguments are fine as long as |q| < 1.

# %%
for a, q in [(0.5, 0.5), (0.3 + 0.4j, 0.2 - 0.5j), (0.9, 0.9)]:
    r = qpoch_infinite(a, q)
    print(f"({a}; {q})_inf = {r.value:.15g}  err<={r.err_est:.1e}  factors={r.work}")

# %% [markdown]
# The defining recurrence (a; q)_inf = (1 - a)(aq; q)_inf holds to rounding.

# %%
a, q = 0.3 - 0.6j, 0.45 + 0.3j
lhs = qpoch_infinite(a, q).value
rhs = (1 - a) * qpoch_infinite(a * q, q).value
print("recurrence residual:", abs(lhs - rhs))

# %% [markdown]
# Ratios of infinite products share one truncation, which matters when the
# individual products are tiny or huge.

# %%
print(qpoch_ratio([0.5, 0.2], [0.1], 0.3))

# %% [markdown]
# A factor that vanishes is reported rather than turned into inf.

# %%
try:
    qpoch_finite(0.25, 0.5, -2)
except PoleProximity as exc:
    print("refused:", exc)
