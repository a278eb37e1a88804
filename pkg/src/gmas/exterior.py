"""Differential forms on a jet space.

A :class:`Form` is sparse: a table from strictly increasing covector tuples to
coefficient expressions.  Covectors come from two overlapping bases, the
coordinate differentials ``dx_i, dz^a, dp^a_I`` and the contact basis
``dx_i, omega^a_0, omega^a_J, dp^a_I`` (``J`` below top order, ``I`` at top
order).  The order used for keys is ``dx < dz < omega_0 < omega < dp``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import TYPE_CHECKING, Callable, Iterable, Mapping, Union

from .multiindex import MultiIndex, extend
from .symexpr import (
    Expr,
    IndependentVar,
    JetCoord,
    Unknown,
    coordinate_dependencies,
    partial,
)

if TYPE_CHECKING:
    from .jetspace import JetSpace


@dataclass(frozen=True)
class DX:
    i: int

    @cached_property
    def key(self):
        return (0, self.i)


@dataclass(frozen=True)
class DZ:
    alpha: int

    @cached_property
    def key(self):
        return (1, self.alpha)


@dataclass(frozen=True)
class Omega0:
    alpha: int

    @cached_property
    def key(self):
        return (2, self.alpha)


@dataclass(frozen=True)
class Omega:
    alpha: int
    index: MultiIndex

    @cached_property
    def key(self):
        return (3, self.alpha, len(self.index), self.index)


@dataclass(frozen=True)
class DP:
    alpha: int
    index: MultiIndex

    def __post_init__(self):
        if not self.index or list(self.index) != sorted(self.index):
            raise ValueError(f"dp needs a sorted non-empty multi-index: {self.index}")

    @cached_property
    def key(self):
        return (4, self.alpha, len(self.index), self.index)


Covector = Union[DX, DZ, Omega0, Omega, DP]
CONTACT_TYPES = (Omega0, Omega)

Key = tuple[Covector, ...]


def _sort_with_sign(key: Iterable[Covector]) -> tuple[int, Key]:
    """Sort covectors, returning (sign of the permutation, sorted tuple).

    Sign 0 means a repeated covector.
    """
    items = list(key)
    sign = 1
    # insertion sort, counting transpositions
    for i in range(1, len(items)):
        j = i
        while j > 0 and items[j - 1].key > items[j].key:
            items[j - 1], items[j] = items[j], items[j - 1]
            sign = -sign
            j -= 1
    for a, b in zip(items, items[1:]):
        if a == b:
            return 0, ()
    return sign, tuple(items)


class Form:
    """Homogeneous differential form of a fixed degree."""

    __slots__ = ("degree", "_terms")

    def __init__(self, terms: Mapping[Iterable[Covector], object] | None = None, degree: int | None = None):
        table: dict[Key, Expr] = {}
        for key, c in (terms or {}).items():
            key = tuple(key)
            if degree is None:
                degree = len(key)
            elif len(key) != degree:
                raise ValueError(f"mixed degrees in one form: {len(key)} vs {degree}")
            sign, skey = _sort_with_sign(key)
            if sign == 0:
                continue
            c = Expr.coerce(c)
            if sign < 0:
                c = -c
            table[skey] = table.get(skey, Expr()) + c
        if degree is None:
            raise ValueError("an empty form needs an explicit degree")
        self.degree = degree
        self._terms = {k: c for k, c in table.items() if not c.is_zero()}

    @classmethod
    def zero(cls, degree: int) -> "Form":
        return cls({}, degree)

    @classmethod
    def scalar(cls, e) -> "Form":
        return cls({(): Expr.coerce(e)}, 0)

    @classmethod
    def basis(cls, *covectors: Covector, coeff=1) -> "Form":
        return cls({covectors: coeff}, len(covectors))

    @property
    def terms(self) -> tuple[tuple[Key, Expr], ...]:
        return tuple(sorted(self._terms.items(), key=lambda kc: tuple(c.key for c in kc[0])))

    def items(self):
        return self._terms.items()

    def coefficient(self, *covectors: Covector) -> Expr:
        sign, key = _sort_with_sign(covectors)
        if sign == 0:
            return Expr()
        c = self._terms.get(key, Expr())
        return c if sign > 0 else -c

    def as_expr(self) -> Expr:
        if self.degree != 0:
            raise ValueError("only degree-0 forms are expressions")
        return self._terms.get((), Expr())

    def is_zero(self) -> bool:
        return not self._terms

    def covectors(self) -> set:
        return {c for k in self._terms for c in k}

    def map_coefficients(self, fn: Callable[[Expr], Expr]) -> "Form":
        return Form({k: fn(c) for k, c in self._terms.items()}, self.degree)

    def __add__(self, other: "Form") -> "Form":
        other = _as_form(other)
        if other.degree != self.degree:
            raise ValueError(f"cannot add forms of degrees {self.degree} and {other.degree}")
        table = dict(self._terms)
        for k, c in other._terms.items():
            table[k] = table.get(k, Expr()) + c
        return Form(table, self.degree)

    def __neg__(self):
        return Form({k: -c for k, c in self._terms.items()}, self.degree)

    def __sub__(self, other):
        return self + (-_as_form(other))

    def __mul__(self, scalar):
        if isinstance(scalar, Form):
            return wedge(self, scalar)
        s = Expr.coerce(scalar)
        return Form({k: c * s for k, c in self._terms.items()}, self.degree)

    __rmul__ = __mul__

    def __xor__(self, other):
        return wedge(self, other)

    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        return self.degree == other.degree and self._terms == other._terms

    def __hash__(self):
        return hash((self.degree, frozenset(self._terms.items())))

    def __repr__(self):
        from .render import form_text

        return f"Form({form_text(self)!r})"


def _as_form(a) -> Form:
    return a if isinstance(a, Form) else Form.scalar(a)


def dx(i: int) -> Form:
    return Form.basis(DX(i))


def dz(alpha: int = 1) -> Form:
    return Form.basis(DZ(alpha))


def dp(index: Iterable[int], alpha: int = 1) -> Form:
    return Form.basis(DP(alpha, tuple(sorted(index))))


def wedge(a, b) -> Form:
    """Exterior product; degree-0 operands may be plain expressions."""
    a, b = _as_form(a), _as_form(b)
    table: dict[Key, Expr] = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            sign, key = _sort_with_sign(ka + kb)
            if sign == 0:
                continue
            c = ca * cb
            table[key] = table.get(key, Expr()) + (c if sign > 0 else -c)
    return Form(table, a.degree + b.degree)


def wedge_all(forms: Iterable) -> Form:
    out = Form.scalar(1)
    for f in forms:
        out = wedge(out, f)
    return out


def substitute_covectors(a: Form, image: Callable[[Covector], Form | None], coeff_map: Callable[[Expr], Expr] | None = None) -> Form:
    """Replace each covector by a 1-form (``None`` keeps it) and expand."""
    out = Form.zero(a.degree)
    for key, c in a.items():
        if coeff_map is not None:
            c = coeff_map(c)
        term = Form.scalar(c)
        for cov in key:
            img = image(cov)
            term = wedge(term, img if img is not None else Form.basis(cov))
        if term.degree != a.degree:
            term = Form(dict(term.items()), a.degree)
        out = out + term
    return out


def coordinate_differential(c) -> Covector:
    if isinstance(c, IndependentVar):
        return DX(c.index)
    if isinstance(c, Unknown):
        return DZ(c.alpha)
    if isinstance(c, JetCoord):
        return DP(c.alpha, c.index)
    raise TypeError(f"{c!r} is not a jet-space coordinate")


def _pvar(alpha: int, index: MultiIndex) -> Expr:
    return Expr.atom(JetCoord(alpha, index))


def omega_expansion(cov: Covector, n: int) -> Form | None:
    """Coordinate-basis expansion of a contact covector (``None`` otherwise)."""
    if isinstance(cov, Omega0):
        out = Form.basis(DZ(cov.alpha))
        for i in range(1, n + 1):
            out = out - Form.basis(DX(i), coeff=_pvar(cov.alpha, (i,)))
        return out
    if isinstance(cov, Omega):
        out = Form.basis(DP(cov.alpha, cov.index))
        for i in range(1, n + 1):
            out = out - Form.basis(DX(i), coeff=_pvar(cov.alpha, extend(cov.index, i)))
        return out
    return None


def check_covector(cov: Covector, js: "JetSpace") -> None:
    n, m, k = js.n, js.m, js.k
    ok = True
    if isinstance(cov, DX):
        ok = 1 <= cov.i <= n
    else:
        ok = 1 <= cov.alpha <= m
        idx = getattr(cov, "index", None)
        if idx is not None and (idx and (idx[0] < 1 or idx[-1] > n)):
            ok = False
        if isinstance(cov, DP):
            ok = ok and len(cov.index) <= k
        elif isinstance(cov, Omega0):
            ok = ok and k >= 1
        elif isinstance(cov, Omega):
            ok = ok and 1 <= len(cov.index) <= k - 1
    if not ok:
        from .render import covector_tag

        raise ValueError(f"covector {covector_tag(cov)} does not exist on J^{k}({n},{m})")


def to_coordinate_basis(a: Form, js: "JetSpace | None" = None, n: int | None = None) -> Form:
    """Rewrite every contact covector in terms of ``dx, dz, dp``."""
    if not any(isinstance(c, CONTACT_TYPES) for c in a.covectors()):
        return a
    if n is None:
        if js is None:
            raise ValueError("expanding contact covectors needs the jet space")
        n = js.n
    return substitute_covectors(a, lambda c: omega_expansion(c, n))


def exterior_derivative(a, js: "JetSpace | None" = None) -> Form:
    """Exterior derivative, returned in the coordinate basis."""
    a = to_coordinate_basis(_as_form(a), js)
    out = Form.zero(a.degree + 1)
    for key, c in a.items():
        deps = sorted(coordinate_dependencies(c), key=lambda t: t.key)
        for coord in deps:
            dc = partial(c, coord)
            if dc.is_zero():
                continue
            out = out + Form({(coordinate_differential(coord),) + key: dc}, a.degree + 1)
    return out


def to_contact_basis(a: Form, js: "JetSpace") -> Form:
    """Rewrite ``dz`` and non-top ``dp`` through the contact forms.

    ``dz^a = omega^a_0 + sum_i p^a_i dx_i`` and
    ``dp^a_I = omega^a_I + sum_i p^a_{Ii} dx_i`` for ``|I| < k``; top-order
    ``dp`` and all ``dx`` are kept.  On ``J^0`` nothing changes.
    """
    for cov in a.covectors():
        check_covector(cov, js)
    if js.k == 0:
        return a
    a = to_coordinate_basis(a, js)
    n, k = js.n, js.k

    def image(cov):
        if isinstance(cov, DZ):
            out = Form.basis(Omega0(cov.alpha))
            for i in range(1, n + 1):
                out = out + Form.basis(DX(i), coeff=_pvar(cov.alpha, (i,)))
            return out
        if isinstance(cov, DP) and len(cov.index) < k:
            out = Form.basis(Omega(cov.alpha, cov.index))
            for i in range(1, n + 1):
                out = out + Form.basis(DX(i), coeff=_pvar(cov.alpha, extend(cov.index, i)))
            return out
        return None

    return substitute_covectors(a, image)


def mod_ck_reduce(a: Form, js: "JetSpace") -> Form:
    """Representative modulo the canonical system: drop all contact terms."""
    b = to_contact_basis(a, js)
    return Form({k: c for k, c in b.items() if not any(isinstance(cv, CONTACT_TYPES) for cv in k)}, b.degree)


def is_zero_mod_ck(a: Form, js: "JetSpace") -> bool:
    return mod_ck_reduce(a, js).is_zero()
