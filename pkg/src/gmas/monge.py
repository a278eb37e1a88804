"""Generalized Monge-Ampere systems and equations.

Two independent routes produce a generalized Monge-Ampere equation (GMAE):

* :func:`generate_gmae` enumerates signed, coefficient-weighted minors of the
  derivative matrix ``M(n, m; k)`` directly;
* :func:`gmas_to_gmae` reduces each generator of a system modulo the canonical
  system, pulls it back to a graph and reads off the ``dx`` coefficients.

:func:`gmae_to_gmas` inverts the second route by solving the (exact, linear)
coefficient-matching problem.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Callable, Iterable, Sequence

from .exterior import DX, DZ, Form, is_zero_mod_ck, mod_ck_reduce
from .jetspace import JetSpace, graph_substitution, pullback_to_graph
from .multiindex import MultiIndex, extend, format_index
from .symexpr import (
    CoeffFn,
    DerivSym,
    Expr,
    JetCoord,
    Monomial,
    monomial_expr,
    split_by,
    substitute,
)


class NormalFormError(ValueError):
    """An equation cannot be written as a sum of signed minors."""

    def __init__(self, message: str, monomial: Monomial | None = None, rows=None):
        super().__init__(message)
        self.monomial = monomial
        self.rows = rows


# --------------------------------------------------------------------------
# data model


@dataclass(frozen=True)
class GMAS:
    """Canonical system of ``js`` together with extra generators."""

    js: JetSpace
    generators: tuple[Form, ...]

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        for pos, g in enumerate(self.generators):
            if g.degree < 1:
                raise ValueError(f"generator {pos + 1} has degree 0")
            self.js.check(g)
            if is_zero_mod_ck(g, self.js):
                raise ValueError(f"generator {pos + 1} vanishes modulo the canonical system")

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(g.degree for g in self.generators)


@dataclass(frozen=True)
class MinorSpec:
    """Square selection of ``M(n, m; k)``: increasing rows, ``(alpha, I)`` columns."""

    rows: tuple[int, ...]
    columns: tuple[tuple[int, MultiIndex], ...]

    def __post_init__(self):
        if len(self.rows) != len(self.columns):
            raise ValueError(f"minor is not square: {len(self.rows)} rows, {len(self.columns)} columns")
        if len(set(self.rows)) != len(self.rows):
            raise ValueError(f"repeated row in minor: {self.rows}")

    @property
    def size(self) -> int:
        return len(self.rows)


@dataclass(frozen=True)
class GmaeTerm:
    coeff: Expr
    sign: int
    minor: MinorSpec
    dx_indices: tuple[int, ...] = ()


@dataclass(frozen=True)
class Equation:
    rows: tuple[int, ...]
    expr: Expr
    terms: tuple[GmaeTerm, ...] = field(default=(), compare=False)


@dataclass(frozen=True)
class GmaeSystem:
    """Equations ``F(n, m, k, l) = 0``, one per row tuple ``nu``."""

    degree: int
    equations: tuple[Equation, ...]


@dataclass(frozen=True)
class GMAE:
    """System of generalized Monge-Ampere equations of order ``k + 1``."""

    n: int
    m: int
    k: int
    systems: tuple[GmaeSystem, ...]

    @property
    def js(self) -> JetSpace:
        return JetSpace(self.n, self.m, self.k)

    @property
    def order(self) -> int:
        return self.k + 1

    @property
    def equations(self) -> list[Equation]:
        return [eq for s in self.systems for eq in s.equations]

    def exprs(self) -> list[list[Expr]]:
        return [[eq.expr for eq in s.equations] for s in self.systems]


# --------------------------------------------------------------------------
# pruning


def prune_high_degree(g: GMAS) -> tuple[GMAS, list[int]]:
    """Drop generators of degree above ``n``; they vanish on every graph.

    Returns the pruned system and the 0-based positions of dropped generators.
    """
    keep = [gen for gen in g.generators if gen.degree <= g.js.n]
    dropped = [pos for pos, gen in enumerate(g.generators) if gen.degree > g.js.n]
    return GMAS(g.js, tuple(keep)), dropped


# --------------------------------------------------------------------------
# matrices and minors


@dataclass(frozen=True)
class DerivativeMatrix:
    """``M(n, m; k)``: row ``j``, column ``(alpha, I)`` holds ``z^alpha_{Ij}``."""

    n: int
    columns: tuple[tuple[int, MultiIndex], ...]

    def entry(self, row: int, column: tuple[int, MultiIndex]) -> DerivSym:
        alpha, index = column
        return DerivSym(alpha, extend(index, row, self.n))

    @property
    def rows(self) -> list[list[DerivSym]]:
        return [[self.entry(j, c) for c in self.columns] for j in range(1, self.n + 1)]


def matrix_columns(n: int, m: int, k: int) -> tuple[tuple[int, MultiIndex], ...]:
    tops = JetSpace(n, m, k).top_indices
    return tuple((a, I) for a in range(1, m + 1) for I in tops)


def build_matrix(n: int, m: int, k: int) -> DerivativeMatrix:
    """The ``n x (m * nHk)`` matrix of order-``k+1`` derivative symbols."""
    return DerivativeMatrix(n, matrix_columns(n, m, k))


def minor_entries(spec: MinorSpec) -> list[list[DerivSym]]:
    return [[DerivSym(a, extend(I, j)) for a, I in spec.columns] for j in spec.rows]


def det_cofactor(entries: Sequence[Sequence[Expr]]) -> Expr:
    """Determinant by cofactor expansion along the first row."""
    size = len(entries)
    if size == 0:
        return Expr.const(1)
    rows = [[Expr.coerce(v) for v in row] for row in entries]
    for row in rows:
        if len(row) != size:
            raise ValueError("determinant of a non-square matrix")

    def rec(row: int, cols: tuple[int, ...]) -> Expr:
        if len(cols) == 1:
            return rows[row][cols[0]]
        total = Expr()
        for pos, c in enumerate(cols):
            a = rows[row][c]
            if a.is_zero():
                continue
            sub = rec(row + 1, cols[:pos] + cols[pos + 1:])
            total = total + (a * sub if pos % 2 == 0 else -(a * sub))
        return total

    return rec(0, tuple(range(size)))


def minor_det(spec: MinorSpec, matrix: DerivativeMatrix | None = None) -> Expr:
    """Determinant of the selected minor; the empty minor is 1."""
    if spec.size == 0:
        return Expr.const(1)
    if matrix is None:
        entries = minor_entries(spec)
    else:
        entries = [[matrix.entry(j, c) for c in spec.columns] for j in spec.rows]
    return det_cofactor([[Expr.atom(a) for a in row] for row in entries])


def permutation_sign(seq: Sequence[int], target: Sequence[int]) -> int:
    """Sign of the permutation taking ``target`` to ``seq`` (same elements)."""
    pos = {v: i for i, v in enumerate(target)}
    perm = [pos[v] for v in seq]
    inversions = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
    return -1 if inversions % 2 else 1


# --------------------------------------------------------------------------
# coefficient naming


def _column_label(column: tuple[int, MultiIndex], m: int, k: int) -> str:
    alpha, index = column
    if k == 0:
        return str(alpha)
    if m == 1:
        return format_index(index)
    return f"{alpha}:{format_index(index)}"


def coefficient_name(letter: str, dx_indices: Sequence[int], columns: Sequence[tuple[int, MultiIndex]], m: int, k: int) -> str:
    """``A^{I-list}_{i-list}`` with sorted index lists, e.g. ``A^{1}_{2}``, ``A^{11,12}``."""
    name = letter
    if columns:
        name += "^{" + ",".join(_column_label(c, m, k) for c in columns) + "}"
    if dx_indices:
        name += "_{" + "".join(str(i) for i in dx_indices) + "}"
    return name


def coefficient_letter(mu: int) -> str:
    """Letters for successive systems: A, B, C, ..."""
    return chr(ord("A") + mu) if mu < 26 else f"A{mu}"


def generic_coefficient(js: JetSpace, letter: str, dx_indices, columns) -> Expr:
    return Expr.atom(CoeffFn(coefficient_name(letter, dx_indices, columns, js.m, js.k), js.coordinates))


# --------------------------------------------------------------------------
# direct enumeration


def _compositions(total: int, parts: int) -> Iterable[tuple[int, ...]]:
    """Ordered tuples of ``parts`` positive integers summing to ``total``."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_slots(n: int, m: int, k: int, l: int, rows: Sequence[int]):
    """Terms of the equation for row tuple ``rows`` in enumeration order.

    Yields ``(dx_indices, j_rows, columns, sign)`` ordered by ``t``, the
    composition ``(lambda_0, ..., lambda_t)``, the ``alpha`` tuple, the row
    split and the column selection.  ``t == 0`` is the pure ``dx`` term.
    """
    tops = JetSpace(n, m, k).top_indices
    for t in range(0, m + 1):
        for lam0 in range(l, -1, -1):
            for lams in _compositions(l - lam0, t):
                if any(lam > len(tops) for lam in lams):
                    continue
                for alphas in combinations(range(1, m + 1), t):
                    for i_set in combinations(rows, lam0):
                        j_rows = tuple(v for v in rows if v not in i_set)
                        sign = permutation_sign(i_set + j_rows, rows)
                        groups = [
                            [tuple((a, I) for I in sel) for sel in combinations(tops, lam)]
                            for a, lam in zip(alphas, lams)
                        ]
                        for choice in product(*groups):
                            columns = tuple(c for grp in choice for c in grp)
                            yield i_set, j_rows, columns, sign


CoefficientRule = Callable[[int, tuple, tuple], object]


def generate_gmae(n: int, m: int, k: int, degrees: Sequence[int], coefficients: CoefficientRule | None = None) -> GMAE:
    """GMAE built from signed minors of ``M(n, m; k)``.

    ``coefficients(mu, dx_indices, columns)`` supplies the coefficient of each
    slot as an expression in jet coordinates (restricted to the graph before
    use); by default each slot gets its own opaque function named by
    :func:`coefficient_name` with letters A, B, ... per system.
    """
    js = JetSpace(n, m, k)
    atoms, _ = graph_substitution(js)
    matrix = build_matrix(n, m, k)
    systems = []
    for mu, l in enumerate(degrees):
        if not (1 <= l <= n):
            raise ValueError(f"degree {l} must lie in 1..{n}")
        cache: dict = {}

        def slot_coeff(i_set, columns):
            key = (i_set, columns)
            if key not in cache:
                if coefficients is None:
                    c = generic_coefficient(js, coefficient_letter(mu), i_set, columns)
                else:
                    c = substitute(Expr.coerce(coefficients(mu, i_set, columns)), atoms)
                cache[key] = c
            return cache[key]

        equations = []
        for rows in combinations(range(1, n + 1), l):
            terms = []
            total = Expr()
            for i_set, j_rows, columns, sign in enumerate_slots(n, m, k, l, rows):
                c = slot_coeff(i_set, columns)
                if c.is_zero():
                    continue
                spec = MinorSpec(j_rows, columns)
                terms.append(GmaeTerm(c, sign, spec, i_set))
                term = c * minor_det(spec, matrix)
                total = total + (term if sign > 0 else -term)
            equations.append(Equation(rows, total, tuple(terms)))
        systems.append(GmaeSystem(l, tuple(equations)))
    return GMAE(n, m, k, tuple(systems))


def normal_form_basis(js: JetSpace, l: int) -> list[tuple]:
    """Keys ``dx_{i...} ^ dp_{...}`` of degree ``l`` modulo the canonical system."""
    dxs = [DX(i) for i in range(1, js.n + 1)]
    tops = list(js.top_covectors)
    keys = []
    for lam0 in range(0, l + 1):
        for xs in combinations(dxs, lam0):
            for ps in combinations(tops, l - lam0):
                keys.append(xs + ps)
    keys.sort(key=lambda key: tuple(c.key for c in key))
    return keys


def _key_columns(key) -> tuple[tuple[int, ...], tuple]:
    dx_idx = tuple(c.i for c in key if isinstance(c, DX))
    cols = tuple((c.alpha, () if isinstance(c, DZ) else c.index) for c in key if not isinstance(c, DX))
    return dx_idx, cols


def generic_form(js: JetSpace, l: int, letter: str = "A") -> Form:
    """Most general degree-``l`` generator modulo the canonical system."""
    terms = {}
    for key in normal_form_basis(js, l):
        dx_idx, cols = _key_columns(key)
        terms[key] = generic_coefficient(js, letter, dx_idx, cols)
    return Form(terms, l)


# --------------------------------------------------------------------------
# system -> equation


def compile_generator(gen: Form, js: JetSpace) -> GmaeSystem:
    """Equations ``iota^* Psi = 0`` read off coefficient by coefficient."""
    l = gen.degree
    if l > js.n:
        raise ValueError(f"generator of degree {l} exceeds n={js.n}; prune it first")
    reduced = mod_ck_reduce(gen, js)
    pulled = pullback_to_graph(reduced, js)
    atoms, _ = graph_substitution(js)
    slots = []
    for key, c in reduced.terms:
        dx_idx, cols = _key_columns(key)
        slots.append((dx_idx, cols, substitute(c, atoms)))
    equations = []
    for rows in combinations(range(1, js.n + 1), l):
        expr = pulled.coefficient(*[DX(i) for i in rows])
        terms = []
        for dx_idx, cols, c in slots:
            if not set(dx_idx) <= set(rows):
                continue
            j_rows = tuple(v for v in rows if v not in dx_idx)
            terms.append(GmaeTerm(c, permutation_sign(dx_idx + j_rows, rows), MinorSpec(j_rows, cols), dx_idx))
        equations.append(Equation(rows, expr, tuple(terms)))
    return GmaeSystem(l, tuple(equations))


def gmas_to_gmae(g: GMAS) -> GMAE:
    return GMAE(g.js.n, g.js.m, g.js.k, tuple(compile_generator(gen, g.js) for gen in g.generators))


# --------------------------------------------------------------------------
# equation -> system


def _is_top(js: JetSpace):
    top = js.k + 1
    return lambda a: isinstance(a, DerivSym) and a.order == top


def max_minor_degree(atom: DerivSym, js: JetSpace) -> int:
    """Largest power of ``atom`` any minor of ``M(n, m; k)`` can produce.

    ``z^a_J`` sits at every entry ``(j, (a, I))`` with ``Ij = J``; a minor
    uses each row and each column once, so the bound is the smaller of the
    number of rows and of columns the atom occupies.
    """
    if atom.order != js.k + 1:
        return 0
    rows, cols = set(), set()
    for pos, j in enumerate(atom.index):
        I = atom.index[:pos] + atom.index[pos + 1:]
        rows.add(j)
        cols.add((atom.alpha, I))
    return min(len(rows), len(cols))


def multi_affine_violation(expr: Expr, js: JetSpace):
    """First ``(monomial, atom, power)`` exceeding :func:`max_minor_degree`, else ``None``.

    With distinct matrix entries this is plain multi-affinity; symmetric
    multi-indices let an atom fill several entries (``z_{x1x2}`` in the
    Hessian), which raises its admissible degree accordingly.
    """
    top = js.k + 1
    for mono, _ in expr.terms:
        for a, power in mono:
            if isinstance(a, DerivSym) and a.order == top and power > max_minor_degree(a, js):
                return mono, a, power
    return None


def check_multi_affine(expr: Expr, js: JetSpace) -> None:
    from .render import atom_text, expr_text

    for mono, _ in expr.terms:
        for a, _power in mono:
            if isinstance(a, DerivSym) and a.order > js.k + 1:
                raise NormalFormError(
                    f"derivative {atom_text(a, js.m)} exceeds the equation order {js.k + 1}", mono
                )
    bad = multi_affine_violation(expr, js)
    if bad is not None:
        mono, a, power = bad
        raise NormalFormError(
            f"monomial {expr_text(monomial_expr(mono), js.m)} has degree {power} in {atom_text(a, js.m)}; "
            "not a Monge-Ampere term",
            mono,
        )


def _lower_to_jet(js: JetSpace) -> dict:
    return {DerivSym(a, I): Expr.atom(JetCoord(a, I)) for a in range(1, js.m + 1) for I in js.sigma}


def _solve(ncols: int, matrix: list[list[Fraction]], rhs: list[Expr], row_labels: list, m: int):
    """Reduced row echelon solve over Q with expression right-hand sides.

    Free unknowns are set to zero, so earlier columns absorb any ambiguity.
    """
    a = [row[:] for row in matrix]
    b = rhs[:]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        b[r], b[piv] = b[piv], b[r]
        row_labels[r], row_labels[piv] = row_labels[piv], row_labels[r]
        inv = 1 / a[r][c]
        a[r] = [v * inv for v in a[r]]
        b[r] = b[r] * inv
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [vi - f * vr for vi, vr in zip(a[i], a[r])]
                b[i] = b[i] - b[r] * f
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    for i in range(r, len(a)):
        if not b[i].is_zero():
            rows_nu, mono = row_labels[i]
            from .render import expr_text

            raise NormalFormError(
                f"equation for rows {rows_nu} is not a sum of signed minors "
                f"(inconsistent coefficient of {expr_text(monomial_expr(mono), m)})",
                mono,
                rows_nu,
            )
    solution = [Expr() for _ in range(ncols)]
    for i, c in enumerate(pivots):
        solution[c] = b[i]
    return solution


def decompile_system(system: GmaeSystem, js: JetSpace) -> Form:
    """Generator whose pullback reproduces the equations of ``system``."""
    l = system.degree
    if not (1 <= l <= js.n):
        raise ValueError(f"degree {l} must lie in 1..{js.n}")
    expected = list(combinations(range(1, js.n + 1), l))
    got = [eq.rows for eq in system.equations]
    if sorted(got) != expected:
        raise NormalFormError(f"degree-{l} system needs one equation per row tuple {expected}, got {got}")
    by_rows = {eq.rows: eq.expr for eq in system.equations}
    is_top = _is_top(js)

    basis = normal_form_basis(js, l)
    patterns = []
    for key in basis:
        pulled = pullback_to_graph(Form({key: 1}, l), js)
        patterns.append({rows: pulled.coefficient(*[DX(i) for i in rows]) for rows in expected})

    row_index: dict = {}
    row_labels: list = []
    entries: dict = {}
    for col, pat in enumerate(patterns):
        for rows, poly in pat.items():
            for mono, c in poly.items():
                label = (rows, mono)
                if label not in row_index:
                    row_index[label] = len(row_labels)
                    row_labels.append(label)
                entries[(row_index[label], col)] = c

    rhs_parts: dict = {}
    for rows in expected:
        expr = by_rows[rows]
        check_multi_affine(expr, js)
        for mono, c in split_by(expr, is_top).items():
            label = (rows, mono)
            if label not in row_index:
                from .render import expr_text

                raise NormalFormError(
                    f"equation for rows {rows}: {expr_text(monomial_expr(mono), js.m)} "
                    "is not a term of any signed minor",
                    mono,
                    rows,
                )
            rhs_parts[row_index[label]] = c

    matrix = [[Fraction(0)] * len(basis) for _ in row_labels]
    for (r, c), v in entries.items():
        matrix[r][c] = Fraction(v)
    rhs = [rhs_parts.get(r, Expr()) for r in range(len(row_labels))]
    solution = _solve(len(basis), matrix, rhs, list(row_labels), js.m)

    lower = _lower_to_jet(js)
    terms = {}
    for key, c in zip(basis, solution):
        if c.is_zero():
            continue
        for a in c.atoms():
            if isinstance(a, DerivSym) and a.order > js.k:
                raise NormalFormError(f"coefficient of {key} involves a top-order derivative")
        terms[key] = substitute(c, lower)
    return Form(terms, l)


def gmae_to_gmas(e: GMAE) -> GMAS:
    """A system whose integral graphs are the solutions of ``e``.

    Where several generators compile to the same equation (``z_{Ij}`` equal
    across column/row pairs) the lexicographically first slot takes the whole
    coefficient.
    """
    js = e.js
    return GMAS(js, tuple(decompile_system(s, js) for s in e.systems))


def equation_count(degrees: Iterable[int], n: int) -> int:
    return sum(math.comb(n, l) for l in degrees)
