"""
KdV inside the third-order family
=================================

Bind two coefficients of the general third-order system and check the
1-soliton, first with exact derivatives and then with finite differences.
"""

# %%
import numpy as np

from gmas import fixtures, gmas_to_gmae
from gmas.render import equation_text
from gmas.verify import Analytic, CandidateSolution, NumericGrid, lattice_samples, residual

fx = fixtures.get("kdv")
e = gmas_to_gmae(fx.gmas)
print(equation_text(e.equations[0], e.m, e.k))

# %%
sol = CandidateSolution(2, (Analytic("3*sech((x1 - x2)/2)**2", 2),))
rep = residual(e, sol, lattice_samples([(-5, 5, 0.1), (-1, 1, 0.1)]))
print(rep.to_table())

# %% [markdown]
# Sampled values only: central differences are second order, so halving h
# should cut the residual by about four.

# %%
f = lambda a, b: 3 / np.cosh((a - b) / 2) ** 2
pts = lattice_samples([(-3, 3, 0.5), (-0.5, 0.5, 0.5)])
prev = None
for h in (0.1, 0.05, 0.025):
    axes = [np.arange(-4, 4 + 1e-9, h), np.arange(-1, 1 + 1e-9, h)]
    grid = NumericGrid.sample(f, axes)
    r = residual(e, CandidateSolution(2, (grid,)), pts).max_residual
    ratio = "" if prev is None else f"  ratio {prev / r:.2f}"
    print(f"h={h:<6} max residual {r:.3e}{ratio}")
    prev = r
