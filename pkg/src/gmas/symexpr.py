"""Exact polynomial expressions over jet-space atoms.

An :class:`Expr` is a finite sum of monomials with :class:`~fractions.Fraction`
coefficients; a monomial is a sorted tuple of ``(atom, power)`` pairs.  Every
constructor normalizes, so two expressions are equal exactly when their term
tables are.  Coefficient functions are opaque: :class:`CoeffFn` carries only a
name and the coordinates it depends on, and differentiating it produces a
:class:`FormalPartial`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from numbers import Rational
from typing import Callable, Iterable, Iterator, Mapping, Union

from .multiindex import MultiIndex


# --------------------------------------------------------------------------
# atoms


@dataclass(frozen=True)
class IndependentVar:
    """The independent variable ``x_i``."""

    index: int

    @cached_property
    def key(self) -> tuple:
        return (0, self.index)


@dataclass(frozen=True)
class Unknown:
    """The dependent coordinate ``z^alpha``."""

    alpha: int

    @cached_property
    def key(self) -> tuple:
        return (1, self.alpha)


@dataclass(frozen=True)
class JetCoord:
    """The jet coordinate ``p^alpha_I`` (``I`` of order >= 1)."""

    alpha: int
    index: MultiIndex

    def __post_init__(self):
        if not self.index or list(self.index) != sorted(self.index):
            raise ValueError(f"jet coordinate needs a sorted non-empty multi-index: {self.index}")

    @cached_property
    def key(self) -> tuple:
        return (2, self.alpha, len(self.index), self.index)


@dataclass(frozen=True)
class DerivSym:
    """The derivative symbol ``z^alpha_J`` of a function on the graph."""

    alpha: int
    index: MultiIndex

    def __post_init__(self):
        if not self.index or list(self.index) != sorted(self.index):
            raise ValueError(f"derivative symbol needs a sorted non-empty multi-index: {self.index}")

    @property
    def order(self) -> int:
        return len(self.index)

    @cached_property
    def key(self) -> tuple:
        return (3, self.alpha, len(self.index), self.index)


Coordinate = Union[IndependentVar, Unknown, JetCoord]
COORDINATE_TYPES = (IndependentVar, Unknown, JetCoord)


@dataclass(frozen=True)
class CoeffFn:
    """Opaque coefficient function ``name(args)``.

    ``args`` is the declared dependency set, stored sorted by atom key.
    """

    name: str
    args: tuple[Coordinate, ...] = ()

    def __post_init__(self):
        for a in self.args:
            if not isinstance(a, COORDINATE_TYPES):
                raise TypeError(f"coefficient arguments must be coordinates, got {a!r}")
        object.__setattr__(self, "args", tuple(sorted(set(self.args), key=lambda a: a.key)))

    @cached_property
    def key(self) -> tuple:
        return (4, self.name, tuple(a.key for a in self.args))


@dataclass(frozen=True)
class FormalPartial:
    """Formal partial derivative of a coefficient function.

    ``wrt`` is a sorted multiset of coordinates, so mixed partials commute.
    """

    fn: CoeffFn
    wrt: tuple[Coordinate, ...]

    def __post_init__(self):
        if not self.wrt:
            raise ValueError("a formal partial needs at least one coordinate")
        for c in self.wrt:
            if c not in self.fn.args:
                raise ValueError(f"{self.fn.name} does not depend on {c!r}")
        object.__setattr__(self, "wrt", tuple(sorted(self.wrt, key=lambda a: a.key)))

    @cached_property
    def key(self) -> tuple:
        return (5, self.fn.key, tuple(c.key for c in self.wrt))


Atom = Union[IndependentVar, Unknown, JetCoord, DerivSym, CoeffFn, FormalPartial]
ATOM_TYPES = (IndependentVar, Unknown, JetCoord, DerivSym, CoeffFn, FormalPartial)

Monomial = tuple[tuple[Atom, int], ...]


class MissingBindingError(KeyError):
    """Raised by :func:`evaluate` when an atom has no value."""

    def __init__(self, atom):
        super().__init__(atom)
        self.atom = atom

    def __str__(self):
        from .render import atom_text

        return f"no value bound for {atom_text(self.atom)}"


class CyclicBindingError(ValueError):
    pass


def _monomial_key(mono: Monomial) -> tuple:
    return (sum(p for _, p in mono), tuple((a.key, p) for a, p in mono))


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    powers: dict = dict(a)
    for atom, p in b:
        powers[atom] = powers.get(atom, 0) + p
    return tuple(sorted(powers.items(), key=lambda ap: ap[0].key))


def _as_fraction(value) -> Fraction:
    if isinstance(value, bool):
        raise TypeError("booleans are not expression constants")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    raise TypeError(f"expression constants must be exact rationals, got {type(value).__name__}")


# --------------------------------------------------------------------------
# expressions


class Expr:
    """Normalized polynomial with rational coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Fraction] | Iterable[tuple[Monomial, Fraction]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        table: dict[Monomial, Fraction] = {}
        for mono, c in items:
            c = _as_fraction(c)
            if c:
                table[mono] = table.get(mono, Fraction(0)) + c
        self._terms = {m: c for m, c in table.items() if c}
        self._hash = None

    # construction -------------------------------------------------------
    @classmethod
    def const(cls, value) -> "Expr":
        return cls({(): _as_fraction(value)})

    @classmethod
    def atom(cls, atom: Atom) -> "Expr":
        if not isinstance(atom, ATOM_TYPES):
            raise TypeError(f"not an atom: {atom!r}")
        return cls({((atom, 1),): Fraction(1)})

    @classmethod
    def coerce(cls, value) -> "Expr":
        if isinstance(value, Expr):
            return value
        if isinstance(value, ATOM_TYPES):
            return cls.atom(value)
        return cls.const(value)

    # inspection ---------------------------------------------------------
    @property
    def terms(self) -> tuple[tuple[Monomial, Fraction], ...]:
        """Monomials in normal-form order (total degree, then atom ids)."""
        return tuple(sorted(self._terms.items(), key=lambda mc: _monomial_key(mc[0])))

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not m for m in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("expression is not constant")
        return self._terms.get((), Fraction(0))

    def atoms(self) -> set:
        return {a for m in self._terms for a, _ in m}

    def degree_in(self, atom: Atom) -> int:
        return max((dict(m).get(atom, 0) for m in self._terms), default=0)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        try:
            other = Expr.coerce(other)
        except TypeError:
            return NotImplemented
        table = dict(self._terms)
        for m, c in other._terms.items():
            table[m] = table.get(m, Fraction(0)) + c
        return Expr(table)

    __radd__ = __add__

    def __neg__(self):
        return Expr({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        try:
            other = Expr.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        try:
            other = Expr.coerce(other)
        except TypeError:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        try:
            other = Expr.coerce(other)
        except TypeError:
            return NotImplemented
        table: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                table[m] = table.get(m, Fraction(0)) + c1 * c2
        return Expr(table)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Expr):
            other = other.constant_value()
        c = _as_fraction(other)
        if not c:
            raise ZeroDivisionError("division of an expression by zero")
        return Expr({m: v / c for m, v in self._terms.items()})

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers are supported")
        out = Expr.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # comparison ---------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Expr):
            try:
                other = Expr.coerce(other)
            except TypeError:
                return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self):
        from .render import expr_text

        return f"Expr({expr_text(self)!r})"


ZERO = Expr()
ONE = Expr.const(1)


def atom(a: Atom) -> Expr:
    return Expr.atom(a)


def x(i: int) -> Expr:
    return Expr.atom(IndependentVar(i))


def z(alpha: int = 1) -> Expr:
    return Expr.atom(Unknown(alpha))


def p(index: Iterable[int], alpha: int = 1) -> Expr:
    return Expr.atom(JetCoord(alpha, tuple(sorted(index))))


def zd(index: Iterable[int], alpha: int = 1) -> Expr:
    """Derivative symbol ``z^alpha_index`` as an expression."""
    return Expr.atom(DerivSym(alpha, tuple(sorted(index))))


def coeff(name: str, args: Iterable[Coordinate] = ()) -> Expr:
    return Expr.atom(CoeffFn(name, tuple(args)))


# --------------------------------------------------------------------------
# operations


def normalize(e) -> Expr:
    """Normal form of ``e``; expressions are normalized on construction."""
    return Expr(Expr.coerce(e).items())


def _binding_cycle(bindings: Mapping[Atom, Expr]) -> Atom | None:
    graph = {a: [b for b in Expr.coerce(v).atoms() if b in bindings] for a, v in bindings.items()}
    state: dict = {}

    def visit(a) -> Atom | None:
        state[a] = 1
        for b in graph[a]:
            if state.get(b) == 1:
                return b
            if b not in state:
                hit = visit(b)
                if hit is not None:
                    return hit
        state[a] = 2
        return None

    for a in graph:
        if a not in state:
            hit = visit(a)
            if hit is not None:
                return hit
    return None


def substitute(e: Expr, bindings: Mapping[Atom, object]) -> Expr:
    """Simultaneously replace atoms by expressions.

    A binding for a :class:`CoeffFn` also rewrites its formal partials by
    differentiating the bound expression.  Coefficient-function arguments are
    not rewritten: the opaque symbol keeps its identity.
    """
    if not bindings:
        return e
    bound = {a: Expr.coerce(v) for a, v in bindings.items()}
    hit = _binding_cycle(bound)
    if hit is not None:
        from .render import atom_text

        raise CyclicBindingError(f"cyclic binding through {atom_text(hit)}")

    cache: dict = {}

    def image(a: Atom) -> Expr | None:
        if a in cache:
            return cache[a]
        out = bound.get(a)
        if out is None and isinstance(a, FormalPartial) and a.fn in bound:
            out = bound[a.fn]
            for c in a.wrt:
                out = partial(out, c)
        cache[a] = out
        return out

    total = Expr()
    acc: dict[Monomial, Fraction] = {}
    for mono, c in e.items():
        if not any(image(a) is not None for a, _ in mono):
            acc[mono] = acc.get(mono, Fraction(0)) + c
            continue
        term = Expr.const(c)
        for a, k in mono:
            img = image(a)
            term = term * (img ** k if img is not None else Expr.atom(a) ** k)
        total = total + term
    return total + Expr(acc)


def _datom(a: Atom, c: Coordinate) -> Expr:
    if a == c:
        return ONE
    if isinstance(a, CoeffFn):
        return Expr.atom(FormalPartial(a, (c,))) if c in a.args else ZERO
    if isinstance(a, FormalPartial):
        return Expr.atom(FormalPartial(a.fn, a.wrt + (c,))) if c in a.fn.args else ZERO
    return ZERO


def partial(e: Expr, c: Coordinate) -> Expr:
    """Formal partial derivative with respect to a coordinate atom."""
    if not isinstance(c, COORDINATE_TYPES):
        raise TypeError(f"can only differentiate with respect to a coordinate, got {c!r}")
    table: dict[Monomial, Fraction] = {}
    for mono, coef in e.items():
        for pos, (a, k) in enumerate(mono):
            da = _datom(a, c)
            if da.is_zero():
                continue
            rest = mono[:pos] + ((a, k - 1),) + mono[pos + 1:] if k > 1 else mono[:pos] + mono[pos + 1:]
            for dm, dc in da.items():
                m = _mono_mul(rest, dm)
                table[m] = table.get(m, Fraction(0)) + coef * k * dc
    return Expr(table)


def coordinate_dependencies(e: Expr) -> set:
    """Coordinates that ``e`` depends on, directly or through coefficient functions."""
    out = set()
    for a in e.atoms():
        if isinstance(a, COORDINATE_TYPES):
            out.add(a)
        elif isinstance(a, CoeffFn):
            out.update(a.args)
        elif isinstance(a, FormalPartial):
            out.update(a.fn.args)
    return out


def split_by(e: Expr, selector: Callable[[Atom], bool]) -> dict[Monomial, Expr]:
    """Group ``e`` by its monomial in the selected atoms.

    Returns ``{selected monomial: coefficient expression in the other atoms}``.
    """
    groups: dict[Monomial, dict] = {}
    for mono, c in e.items():
        sel = tuple((a, k) for a, k in mono if selector(a))
        rest = tuple((a, k) for a, k in mono if not selector(a))
        bucket = groups.setdefault(sel, {})
        bucket[rest] = bucket.get(rest, Fraction(0)) + c
    return {m: Expr(t) for m, t in groups.items()}


def monomial_expr(mono: Monomial) -> Expr:
    return Expr({mono: Fraction(1)})


def evaluate(e: Expr, env: Mapping[Atom, object], functions: Mapping[object, Callable] | None = None):
    """Numeric value of ``e``.

    ``env`` binds atoms to numbers (or numpy arrays for vectorized use).
    A coefficient function missing from ``env`` is looked up in ``functions``
    by atom, then by name, and called with its argument values in declared
    order.  With only exact rational inputs the sum is exact and converted to
    ``float`` at the end.
    """
    functions = functions or {}
    values: dict = {}

    def value(a: Atom):
        if a in values:
            return values[a]
        if a in env:
            v = env[a]
        elif isinstance(a, (CoeffFn, FormalPartial)):
            fn = functions.get(a)
            if fn is None and isinstance(a, CoeffFn):
                fn = functions.get(a.name)
            if fn is None:
                raise MissingBindingError(a)
            args = a.args if isinstance(a, CoeffFn) else a.fn.args
            v = fn(*[value(b) for b in args])
        else:
            raise MissingBindingError(a)
        values[a] = v
        return v

    used = {a: value(a) for a in e.atoms()}
    exact = all(isinstance(v, (int, Fraction)) and not isinstance(v, bool) for v in used.values())
    total = Fraction(0) if exact else 0.0
    for mono, c in e.items():
        term = c if exact else float(c)
        for a, k in mono:
            term = term * used[a] ** k
        total = total + term
    return float(total) if exact else total


def iter_atoms(exprs: Iterable[Expr]) -> Iterator[Atom]:
    seen = set()
    for e in exprs:
        for a in sorted(e.atoms(), key=lambda a: a.key):
            if a not in seen:
                seen.add(a)
                yield a
