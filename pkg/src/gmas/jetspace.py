"""The local jet space ``J^k(n, m)`` and pullback to graphs of functions."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .exterior import (
    DP,
    DX,
    DZ,
    Form,
    Omega,
    Omega0,
    check_covector,
    omega_expansion,
    substitute_covectors,
    to_coordinate_basis,
)
from .multiindex import MAX_DIM, MultiIndex, count_repetitions, enumerate_sk, extend, sigma
from .symexpr import DerivSym, Expr, IndependentVar, JetCoord, Unknown, substitute


@dataclass(frozen=True)
class JetSpace:
    """Canonical coordinates ``x_i, z^a, p^a_I`` (``I`` of order ``1..k``)."""

    n: int
    m: int = 1
    k: int = 1

    def __post_init__(self):
        if not (1 <= self.n <= MAX_DIM):
            raise ValueError(f"n must lie in 1..{MAX_DIM}, got {self.n}")
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        if not (0 <= self.k <= MAX_DIM):
            raise ValueError(f"k must lie in 0..{MAX_DIM}, got {self.k}")

    @cached_property
    def sigma(self) -> tuple[MultiIndex, ...]:
        return tuple(sigma(self.n, self.k))

    @cached_property
    def top_indices(self) -> tuple[MultiIndex, ...]:
        """``S_k``; for ``k == 0`` the single empty index standing for ``z^a``."""
        if self.k == 0:
            return ((),)
        return tuple(enumerate_sk(self.n, self.k))

    @cached_property
    def coordinates(self) -> tuple:
        """Coordinate catalog: ``x``, then ``z``, then ``p`` grouped by ``alpha``."""
        xs = tuple(IndependentVar(i) for i in range(1, self.n + 1))
        zs = tuple(Unknown(a) for a in range(1, self.m + 1))
        ps = tuple(JetCoord(a, I) for a in range(1, self.m + 1) for I in self.sigma)
        return xs + zs + ps

    @property
    def jet_coordinates(self) -> tuple:
        return self.coordinates[self.n + self.m:]

    @property
    def dimension(self) -> int:
        return self.n + self.m + self.m * sum(count_repetitions(self.n, j) for j in range(1, self.k + 1))

    def top_covector(self, alpha: int, index: MultiIndex):
        return DZ(alpha) if self.k == 0 else DP(alpha, index)

    @cached_property
    def top_covectors(self) -> tuple:
        """Highest-order differentials, grouped by ``alpha``, lexicographic in ``I``."""
        return tuple(self.top_covector(a, I) for a in range(1, self.m + 1) for I in self.top_indices)

    def check(self, form: Form) -> None:
        for cov in form.covectors():
            check_covector(cov, self)

    def __str__(self):
        return f"J^{self.k}({self.n},{self.m})"


def canonical_forms(js: JetSpace) -> list[Form]:
    """The contact forms ``omega^a_0`` and ``omega^a_I`` (``|I| < k``), coordinate basis."""
    if js.k == 0:
        return []
    out = []
    for a in range(1, js.m + 1):
        out.append(omega_expansion(Omega0(a), js.n))
    for a in range(1, js.m + 1):
        for I in sigma(js.n, js.k - 1):
            out.append(omega_expansion(Omega(a, I), js.n))
    return out


def graph_substitution(js: JetSpace) -> tuple[dict, dict]:
    """Atom and covector bindings that restrict jet-space objects to a graph.

    ``p^a_I -> z^a_I`` and ``dz^a -> sum_i z^a_i dx_i``,
    ``dp^a_I -> sum_i z^a_{Ii} dx_i``.
    """
    atoms = {JetCoord(a, I): Expr.atom(DerivSym(a, I)) for a in range(1, js.m + 1) for I in js.sigma}
    covectors: dict = {}
    for a in range(1, js.m + 1):
        covectors[DZ(a)] = _graph_differential(js, a, ())
        for I in js.sigma:
            covectors[DP(a, I)] = _graph_differential(js, a, I)
    return atoms, covectors


def _graph_differential(js: JetSpace, alpha: int, index: MultiIndex) -> Form:
    out = Form.zero(1)
    for i in range(1, js.n + 1):
        out = out + Form.basis(DX(i), coeff=Expr.atom(DerivSym(alpha, extend(index, i))))
    return out


def pullback_to_graph(a: Form, js: JetSpace) -> Form:
    """Pull ``a`` back to the prolonged graph of ``z(x)``.

    The result has only ``dx`` keys; its coefficients are expressions in
    ``x``, ``z``, derivative symbols and coefficient functions.
    """
    js.check(a)
    atoms, covectors = graph_substitution(js)
    a = to_coordinate_basis(a, js)

    def image(cov):
        if isinstance(cov, DX):
            return None
        return covectors[cov]

    return substitute_covectors(a, image, coeff_map=lambda c: substitute(c, atoms))
