"""
Cauchy-Riemann as a pair of 2-forms on J^0(2,2)
===============================================
"""

# %%
from gmas import fixtures, gmae_to_gmas, gmas_to_gmae
from gmas.render import equation_text
from gmas.symexpr import x
from gmas.verify import CandidateSolution, check_integral_manifold, oracle_pullback

fx = fixtures.get("cauchy_riemann")
e = gmas_to_gmae(fx.gmas)
for eq in e.equations:
    print(equation_text(eq, e.m, e.k))

# %% [markdown]
# (x1 + i x2)^2 is holomorphic, so its graph is an integral manifold.
# The conjugate-like map (x1, -x2) is not.

# %%
x1, x2 = x(1), x(2)
good = CandidateSolution(2, (x1 ** 2 - x2 ** 2, 2 * x1 * x2))
bad = CandidateSolution(2, (x1, -x2))
print(check_integral_manifold(fx.gmas, good).to_table())
print(check_integral_manifold(fx.gmas, bad).to_table())

# %%
# the numeric oracle works on the tangent frame directly
print(oracle_pullback(fx.gmas.generators[0], bad, [0.3, 0.7], fx.gmas.js))

# %%
back = gmae_to_gmas(e)
print(back.generators)
