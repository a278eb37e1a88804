"""Independent reference computations used by the tests.

Nothing here imports the code under test beyond its plain data types.
"""

from __future__ import annotations

from itertools import permutations, product

import sympy as sp


def brute_sk(n, k):
    """All sorted k-tuples over 1..n, via the full product and dedupe."""
    return sorted({tuple(sorted(t)) for t in product(range(1, n + 1), repeat=k)})


def perm_parity(perm):
    perm = list(perm)
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def leibniz_det(rows):
    """Sum over permutations, on sympy entries."""
    size = len(rows)
    if size == 0:
        return sp.Integer(1)
    total = sp.Integer(0)
    for perm in permutations(range(size)):
        term = sp.Integer(perm_parity(perm))
        for i, j in enumerate(perm):
            term *= rows[i][j]
        total += term
    return sp.expand(total)


def deriv_symbol(alpha, index):
    return sp.Symbol(f"z{alpha}_" + "".join(map(str, index)))


def to_sympy(e):
    """Expr -> sympy, atoms mapped to symbols by their keys."""
    from gmas.symexpr import CoeffFn, DerivSym, IndependentVar, JetCoord, Unknown

    def atom(a):
        if isinstance(a, DerivSym):
            return deriv_symbol(a.alpha, a.index)
        if isinstance(a, IndependentVar):
            return sp.Symbol(f"x{a.index}")
        if isinstance(a, Unknown):
            return sp.Symbol(f"z{a.alpha}")
        if isinstance(a, JetCoord):
            return sp.Symbol(f"p{a.alpha}_" + "".join(map(str, a.index)))
        if isinstance(a, CoeffFn):
            return sp.Symbol(a.name)
        raise TypeError(a)

    total = sp.Integer(0)
    for mono, c in e.terms:
        term = sp.Rational(c.numerator, c.denominator)
        for a, k in mono:
            term *= atom(a) ** k
        total += term
    return sp.expand(total)


def kdv_residual(c, x, t):
    """z_t + z z_x + z_xxx for the 1-soliton, computed with sympy."""
    X, T = sp.symbols("X T")
    zz = 3 * c * sp.sech(sp.sqrt(c) / 2 * (X - c * T)) ** 2
    r = sp.diff(zz, T) + zz * sp.diff(zz, X) + sp.diff(zz, X, 3)
    f = sp.lambdify((X, T), r, "numpy")
    return f(x, t)
