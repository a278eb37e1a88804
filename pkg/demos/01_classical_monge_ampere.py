"""
The classical Monge-Ampere equation from a 2-form
==================================================

Compile the most general 2-form on J^1(2,1) into its equation, then go back.
"""

# %%
from gmas import GMAS, JetSpace, generic_form, gmae_to_gmas, gmas_to_gmae
from gmas.render import equation_text, gmae_latex

js = JetSpace(2, 1, 1)
psi = generic_form(js, 2)
print(psi)

# %% [markdown]
# Pulling back to a graph turns every slot into a signed minor of the Hessian.

# %%
e = gmas_to_gmae(GMAS(js, (psi,)))
(eq,) = e.equations
print(equation_text(eq, e.m, e.k))
print(gmae_latex(e))

# %% [markdown]
# The inverse direction picks one representative form. The z_{x1x2}
# coefficient could come from either mixed slot; the leftmost one takes it.

# %%
back = gmae_to_gmas(e)
print(back.generators[0])
assert gmas_to_gmae(back).exprs() == e.exprs()

# %%
from gmas import fixtures
from gmas.verify import CandidateSolution, check_both
from gmas.symexpr import x

fx = fixtures.get("classical_ma")  # Laplace coefficients
sol = CandidateSolution(2, (x(1) ** 2 - x(2) ** 2,))
r1, r2 = check_both(fx.gmas, sol, coefficients=fx.coefficients)
print(r1.to_table())
print(r2.to_table())
