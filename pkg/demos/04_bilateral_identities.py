# %% [markdown]
# # Bilateral sums of basic hypergeometric series
#
# Four summation formulas, each evaluated from both ends: the left side as
# a bilateral sum over n in Z of (continued) phi values at x q^n, the right
# side as a short combination of infinite products times convergent series.

# %%
from qbilateral import (
    CorollarySpec,
    LemmaSpec,
    Psi2Spec,
    TheoremSpec,
    corollary_lhs,
    corollary_rhs,
    lemma_lhs,
    lemma_rhs,
    proof_integral_oracle,
    psi2_lhs,
    psi2_rhs,
    theorem_lhs,
    theorem_rhs,
    validate_domain,
)


def show(name, lhs, rhs):
    gap = abs(lhs.value - rhs.value) / max(1.0, abs(rhs.value))
    print(f"{name:10s} lhs={lhs.value:.14f}\n{'':10s} rhs={rhs.value:.14f}  rel diff {gap:.1e}")


# %% [markdown]
# ## Lemma
# sum_n phi(a; b; q, x q^n) t^n for max|a_i| < |t| < 1.  Most of the
# arguments x q^n with n < 0 lie far outside the unit disk.

# %%
lemma = LemmaSpec([0.2, 0.3], [0.4], -0.7, 0.5, 0.3)
print(validate_domain(lemma))
show("lemma", lemma_lhs(lemma), lemma_rhs(lemma))

# %% [markdown]
# The validator explains what is wrong instead of returning garbage.

# %%
print(validate_domain(LemmaSpec([0.2, 0.3], [0.5], -1, 0.25, 0.3)))

# %% [markdown]
# ## Theorem
# A product of two such series, with the k + 2 term right-hand side
# (one term per a_i plus the leading one).

# %%
thm = TheoremSpec(
    [0.25 + 0.1j, -0.3], [0.2 - 0.3j], [0.4j, 0.35], [-0.5 + 0.2j],
    -0.8 + 0.3j, -0.1 - 0.2j, 0.55, 0.5,
)
show("theorem", theorem_lhs(thm), theorem_rhs(thm))

# %% [markdown]
# For real t with every |a_i|, |c_j| below sqrt(t) the left side is also a
# contour integral of the two generating products, which gives a third,
# independent value.

# %%
print("integral  ", proof_integral_oracle(thm).value)

# %% [markdown]
# ## Corollary
# Weights (c; q)_n / (d; q)_n in front of each phi.

# %%
cor = CorollarySpec([0.3 + 0.1j, -0.25], [0.45j], -0.9 + 0.4j, -0.3 + 0.1j, 0.15 - 0.1j, 0.5, 0.4)
show("corollary", corollary_lhs(cor), corollary_rhs(cor))

# %% [markdown]
# ## A 2psi2 transformation
# With no phi left at all the left side is a plain bilateral series.

# %%
psi = Psi2Spec(0.5 + 0.3j, 0.2 - 0.1j, -0.3 + 0.1j, 0.3 + 0.2j, 0.7, 0.5)
show("2psi2", psi2_lhs(psi), psi2_rhs(psi))
