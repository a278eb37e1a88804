"""Checking candidate solutions against equations and systems.

A candidate solution gives each unknown ``z^a`` as one of

* :class:`ClosedForm` -- a polynomial :class:`~gmas.symexpr.Expr` in ``x``;
  derivatives are exact and residuals are computed symbolically;
* :class:`Analytic` -- a sympy expression; derivatives come from
  ``sympy.diff`` and are evaluated in floating point;
* :class:`NumericGrid` -- values on an axis-aligned lattice; derivatives come
  from second-order central differences.

:func:`residual` evaluates compiled equations, :func:`check_integral_manifold`
evaluates the pullback of each generator, and :func:`oracle_pullback` is an
independent evaluation of a form on the tangent frame of the prolonged graph.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from typing import Callable, Mapping, Sequence, Union

import numpy as np

from .exterior import DP, DX, DZ, Form, Omega, Omega0
from .jetspace import JetSpace, canonical_forms, pullback_to_graph
from .monge import GMAE, GMAS, gmas_to_gmae
from .multiindex import MultiIndex, extend, sigma
from .symexpr import (
    CoeffFn,
    DerivSym,
    Expr,
    IndependentVar,
    JetCoord,
    MissingBindingError,
    Unknown,
    evaluate,
    partial,
    substitute,
)

EXACT_TOLERANCE = 0.0
ANALYTIC_TOLERANCE = 1e-8
FD_TOLERANCE_FACTOR = 10.0


# --------------------------------------------------------------------------
# solution components


@dataclass(frozen=True)
class ClosedForm:
    """Polynomial in the independent variables."""

    expr: Expr

    def __post_init__(self):
        object.__setattr__(self, "expr", Expr.coerce(self.expr))
        bad = [a for a in self.expr.atoms() if not isinstance(a, IndependentVar)]
        if bad:
            raise ValueError(f"closed-form solution may only involve x_i, found {bad[0]!r}")

    method = "exact"

    def derivative_expr(self, index: MultiIndex) -> Expr:
        e = self.expr
        for i in index:
            e = partial(e, IndependentVar(i))
        return e

    def derivative(self, index: MultiIndex) -> Callable:
        e = self.derivative_expr(index)

        def fn(points):
            env = {IndependentVar(i + 1): points[:, i] for i in range(points.shape[1])}
            return np.broadcast_to(np.asarray(evaluate(e, env), dtype=float), (points.shape[0],)).copy()

        return fn


class Analytic:
    """Closed form handled by sympy (transcendental functions allowed)."""

    method = "analytic"

    def __init__(self, expr, n: int):
        import sympy

        self._sympy = sympy
        self.n = n
        self.symbols = sympy.symbols([f"x{i}" for i in range(1, n + 1)])
        if isinstance(expr, str):
            expr = sympy.sympify(expr, locals={str(s): s for s in self.symbols})
        extra = expr.free_symbols - set(self.symbols)
        if extra:
            raise ValueError(f"analytic solution uses unknown symbols {sorted(map(str, extra))}")
        self.expr = expr
        self._cache: dict = {}

    @classmethod
    def from_sympy(cls, expr, n: int) -> "Analytic":
        return cls(expr, n)

    def derivative(self, index: MultiIndex) -> Callable:
        if index not in self._cache:
            d = self.expr
            for i in index:
                d = self._sympy.diff(d, self.symbols[i - 1])
            f = self._sympy.lambdify(self.symbols, d, "numpy")

            def fn(points, f=f):
                out = f(*[points[:, i] for i in range(self.n)])
                return np.broadcast_to(np.asarray(out, dtype=float), (points.shape[0],)).copy()

            self._cache[index] = fn
        return self._cache[index]

    def __call__(self, *coords):
        return self.derivative(())(np.column_stack(coords))

    def __repr__(self):
        return f"Analytic({self.expr})"


def fd_weights(order: int) -> tuple[int, np.ndarray]:
    """Second-order central stencil for a ``d``-th derivative: (half width, weights)."""
    if order < 1:
        raise ValueError("stencils are for derivatives of order >= 1")
    r = (order + 1) // 2
    offsets = np.arange(-r, r + 1, dtype=float)
    vander = np.vander(offsets, increasing=True).T
    rhs = np.zeros(2 * r + 1)
    rhs[order] = math.factorial(order)
    return r, np.linalg.solve(vander, rhs)


def _apply_stencil(values: np.ndarray, axis: int, order: int, h: float) -> np.ndarray:
    r, w = fd_weights(order)
    size = values.shape[axis]
    out = np.full(values.shape, np.nan)
    if size <= 2 * r:
        return out
    inner = [slice(None)] * values.ndim
    inner[axis] = slice(r, size - r)
    acc = np.zeros(out[tuple(inner)].shape)
    for j, wj in zip(range(-r, r + 1), w):
        sl = [slice(None)] * values.ndim
        sl[axis] = slice(r + j, size - r + j)
        acc = acc + wj * values[tuple(sl)]
    out[tuple(inner)] = acc / h ** order
    return out


class NumericGrid:
    """Values on a uniform lattice; derivatives by central differences.

    ``derivatives`` may supply exact callbacks for selected multi-indices,
    which then take precedence over the stencils.
    """

    method = "finite-difference"

    def __init__(self, axes: Sequence[np.ndarray], values: np.ndarray, derivatives: Mapping[MultiIndex, Callable] | None = None):
        self.axes = tuple(np.asarray(a, dtype=float) for a in axes)
        self.values = np.asarray(values, dtype=float)
        if self.values.shape != tuple(len(a) for a in self.axes):
            raise ValueError(f"grid values have shape {self.values.shape}, axes give {tuple(len(a) for a in self.axes)}")
        self.spacing = []
        for pos, a in enumerate(self.axes):
            if len(a) < 2:
                raise ValueError(f"axis {pos + 1} needs at least two points")
            d = np.diff(a)
            if not np.allclose(d, d[0], rtol=1e-9, atol=0) or d[0] <= 0:
                raise ValueError(f"axis {pos + 1} is not uniformly increasing")
            self.spacing.append(float(d[0]))
        self.extra = dict(derivatives or {})
        self._tables: dict = {}

    @classmethod
    def sample(cls, fn: Callable, axes: Sequence[np.ndarray], derivatives=None) -> "NumericGrid":
        mesh = np.meshgrid(*[np.asarray(a, dtype=float) for a in axes], indexing="ij")
        return cls(axes, fn(*mesh), derivatives)

    @property
    def n(self) -> int:
        return len(self.axes)

    @property
    def h(self) -> float:
        return max(self.spacing)

    def check_order(self, order: int) -> None:
        need = 2 * (order + 1)
        for pos, a in enumerate(self.axes):
            if len(a) < need:
                raise ValueError(
                    f"grid axis {pos + 1} has {len(a)} points; order {order} needs at least {need}"
                )

    def margin(self, order: int) -> int:
        return (order + 1) // 2

    def table(self, index: MultiIndex) -> np.ndarray:
        if index not in self._tables:
            arr = self.values
            for axis in range(self.n):
                d = index.count(axis + 1)
                if d:
                    arr = _apply_stencil(arr, axis, d, self.spacing[axis])
            self._tables[index] = arr
        return self._tables[index]

    def lattice_index(self, points: np.ndarray) -> tuple:
        idx = []
        for axis, a in enumerate(self.axes):
            pos = (points[:, axis] - a[0]) / self.spacing[axis]
            r = np.rint(pos).astype(int)
            if np.any(np.abs(pos - r) > 1e-6) or np.any(r < 0) or np.any(r >= len(a)):
                raise ValueError("sample point outside the grid lattice")
            idx.append(r)
        return tuple(idx)

    def derivative(self, index: MultiIndex) -> Callable:
        if index in self.extra:
            return self.extra[index]

        def fn(points):
            out = self.table(index)[self.lattice_index(points)]
            if np.any(np.isnan(out)):
                raise ValueError("sample point lies inside the stencil margin of the grid")
            return out

        return fn

    def points(self, order: int) -> np.ndarray:
        """Lattice points where every stencil up to ``order`` is defined."""
        r = self.margin(order)
        inner = [a[r: len(a) - r] for a in self.axes]
        mesh = np.meshgrid(*inner, indexing="ij")
        return np.column_stack([mm.ravel() for mm in mesh])


Component = Union[ClosedForm, Analytic, NumericGrid]


@dataclass(frozen=True)
class CandidateSolution:
    """``z^a = components[a - 1]`` as functions of ``x_1..x_n``."""

    n: int
    components: tuple

    def __post_init__(self):
        comps = []
        for c in self.components:
            if isinstance(c, (Expr, int, Fraction)):
                c = ClosedForm(Expr.coerce(c))
            if not isinstance(c, (ClosedForm, Analytic, NumericGrid)):
                raise TypeError(f"unsupported solution component {c!r}")
            if isinstance(c, (Analytic, NumericGrid)) and c.n != self.n:
                raise ValueError(f"component defined on {c.n} variables, expected {self.n}")
            if isinstance(c, ClosedForm):
                for a in c.expr.atoms():
                    if a.index > self.n:
                        raise ValueError(f"closed form uses x{a.index} but n = {self.n}")
            comps.append(c)
        object.__setattr__(self, "components", tuple(comps))

    @property
    def m(self) -> int:
        return len(self.components)

    @property
    def exact(self) -> bool:
        return all(isinstance(c, ClosedForm) for c in self.components)

    @property
    def methods(self) -> tuple[str, ...]:
        return tuple(c.method for c in self.components)

    def default_tolerance(self) -> float:
        tol = EXACT_TOLERANCE
        for c in self.components:
            if isinstance(c, Analytic):
                tol = max(tol, ANALYTIC_TOLERANCE)
            elif isinstance(c, NumericGrid):
                tol = max(tol, FD_TOLERANCE_FACTOR * c.h ** 2)
        return tol


# --------------------------------------------------------------------------
# prolongation


@dataclass
class Prolongation:
    """Derivative table ``(alpha, J) -> function of sample points``, ``|J| <= order``."""

    solution: CandidateSolution
    order: int
    table: dict = field(default_factory=dict)

    def __call__(self, alpha: int, index: MultiIndex, points: np.ndarray) -> np.ndarray:
        return self.table[(alpha, tuple(index))](points)

    def expr(self, alpha: int, index: MultiIndex) -> Expr:
        comp = self.solution.components[alpha - 1]
        if not isinstance(comp, ClosedForm):
            raise TypeError("symbolic derivatives need a closed-form component")
        return comp.derivative_expr(tuple(index))


def prolong(sol: CandidateSolution, order: int) -> Prolongation:
    """All partial derivatives of the solution up to ``order``."""
    if order < 0:
        raise ValueError("order must be non-negative")
    table = {}
    for alpha, comp in enumerate(sol.components, start=1):
        if isinstance(comp, NumericGrid):
            comp.check_order(order)
        table[(alpha, ())] = comp.derivative(())
        for I in sigma(sol.n, order):
            table[(alpha, I)] = comp.derivative(I)
    return Prolongation(sol, order, table)


# --------------------------------------------------------------------------
# samples


@dataclass(frozen=True)
class SampleSet:
    points: np.ndarray
    description: str

    def __len__(self):
        return len(self.points)


def random_samples(n: int, count: int = 20, bounds: Sequence[tuple[float, float]] | None = None, seed: int = 0) -> SampleSet:
    bounds = list(bounds or [(-1.0, 1.0)] * n)
    rng = np.random.default_rng(seed)
    lo = np.array([b[0] for b in bounds])
    hi = np.array([b[1] for b in bounds])
    pts = lo + (hi - lo) * rng.random((count, n))
    box = " x ".join(f"[{a:g},{b:g}]" for a, b in bounds)
    return SampleSet(pts, f"{count} random points in {box} (seed {seed})")


def lattice_axes(spec: Sequence[tuple[float, float, float]]) -> list[np.ndarray]:
    axes = []
    for a, b, h in spec:
        if h <= 0 or b < a:
            raise ValueError(f"bad lattice axis {a}:{b}:{h}")
        count = int(round((b - a) / h)) + 1
        axes.append(a + h * np.arange(count))
    return axes


def lattice_samples(spec: Sequence[tuple[float, float, float]], margin: int = 0) -> SampleSet:
    axes = lattice_axes(spec)
    inner = [ax[margin: len(ax) - margin] for ax in axes]
    mesh = np.meshgrid(*inner, indexing="ij")
    pts = np.column_stack([mm.ravel() for mm in mesh])
    shape = "x".join(str(len(ax)) for ax in inner)
    box = " x ".join(f"[{a:g},{b:g}]" for a, b, _ in spec)
    return SampleSet(pts, f"{shape} lattice on {box}")


def grid_samples(grid: NumericGrid, order: int) -> SampleSet:
    pts = grid.points(order)
    r = grid.margin(order)
    return SampleSet(pts, f"{len(pts)} interior lattice points (margin {r}, h={grid.h:g})")


def _as_samples(samples, n: int) -> SampleSet:
    if isinstance(samples, SampleSet):
        return samples
    pts = np.atleast_2d(np.asarray(samples, dtype=float))
    if pts.shape[1] != n:
        raise ValueError(f"sample points must have {n} coordinates")
    return SampleSet(pts, f"{len(pts)} given points")


# --------------------------------------------------------------------------
# evaluation environment

CoefficientBinding = Union[Expr, int, Fraction, Callable]


def _jet_env(js: JetSpace, pro: Prolongation, points: np.ndarray) -> dict:
    env: dict = {IndependentVar(i): points[:, i - 1] for i in range(1, js.n + 1)}
    for a in range(1, js.m + 1):
        env[Unknown(a)] = pro(a, (), points)
        for I in sigma(js.n, pro.order):
            v = pro(a, I, points)
            env[DerivSym(a, I)] = v
            if len(I) <= js.k:
                env[JetCoord(a, I)] = v
    return env


def _functions(js: JetSpace, exprs: Sequence[Expr], coefficients: Mapping[str, CoefficientBinding], env: dict) -> dict:
    """Callbacks for every coefficient function, keyed by atom."""
    n, m = js.n, js.m
    out = {}
    for e in exprs:
        for a in e.atoms():
            if not isinstance(a, CoeffFn) or a in out:
                continue
            if a.name not in coefficients:
                raise MissingBindingError(a)
            b = coefficients[a.name]
            npts = len(env[IndependentVar(1)])
            if callable(b) and not isinstance(b, Expr):
                X = np.column_stack([env[IndependentVar(i)] for i in range(1, n + 1)])
                Z = np.column_stack([env[Unknown(al)] for al in range(1, m + 1)])
                P = np.column_stack([env[c] for c in js.jet_coordinates]) if js.jet_coordinates else np.zeros((npts, 0))
                val = np.asarray(b(X, Z, P), dtype=float)
            else:
                val = np.asarray(evaluate(Expr.coerce(b), env), dtype=float)
            out[a] = (lambda v: (lambda *args: v))(np.broadcast_to(val, (npts,)))
    return out


def _symbolic_bindings(coefficients: Mapping[str, CoefficientBinding]) -> dict | None:
    for b in coefficients.values():
        if callable(b) and not isinstance(b, Expr):
            return None
    return {name: Expr.coerce(b) for name, b in coefficients.items()}


def _graph_exprs(js: JetSpace, sol: CandidateSolution, order: int) -> dict:
    pro = prolong(sol, 0)
    table = {}
    for a in range(1, js.m + 1):
        table[Unknown(a)] = pro.expr(a, ())
        for I in sigma(js.n, order):
            e = pro.expr(a, I)
            table[DerivSym(a, I)] = e
            if len(I) <= js.k:
                table[JetCoord(a, I)] = e
    return table


def _exact_values(js: JetSpace, sol, exprs: Sequence[Expr], coefficients, points: np.ndarray):
    """Residual expressions in ``x`` and their exact values at ``points`` (or ``None``)."""
    bindings = _symbolic_bindings(coefficients)
    if bindings is None or not sol.exact:
        return None
    graph = _graph_exprs(js, sol, js.k + 1)
    out = []
    for e in exprs:
        coeff_map = {}
        for a in e.atoms():
            if isinstance(a, CoeffFn):
                if a.name not in bindings:
                    raise MissingBindingError(a)
                coeff_map[a] = bindings[a.name]
        r = substitute(substitute(e, coeff_map), graph)
        if r.is_zero():
            out.append((r, np.zeros(len(points))))
            continue
        vals = []
        for pt in points:
            env = {IndependentVar(i + 1): Fraction(float(v)) for i, v in enumerate(pt)}
            vals.append(evaluate(r, env))
        out.append((r, np.array(vals, dtype=float)))
    return out


# --------------------------------------------------------------------------
# reports


@dataclass
class ReportEntry:
    label: str
    values: np.ndarray
    group: int = 0
    exact_expr: Expr | None = None

    @property
    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values))) if len(self.values) else 0.0


@dataclass
class VerificationReport:
    kind: str
    entries: list
    tolerance: float
    samples: str
    method: str
    canonical_exact: bool | None = None
    dropped: list = field(default_factory=list)

    @property
    def residuals(self) -> list[float]:
        return [e.max_abs for e in self.entries]

    @property
    def max_residual(self) -> float:
        return max(self.residuals, default=0.0)

    @property
    def passed(self) -> bool:
        return all(r <= self.tolerance for r in self.residuals)

    @property
    def verdicts(self) -> np.ndarray:
        """Per-sample pass flags (all entries within tolerance at that point)."""
        if not self.entries:
            return np.ones(0, dtype=bool)
        stack = np.abs(np.vstack([e.values for e in self.entries]))
        return np.all(stack <= self.tolerance, axis=0)

    def per_group(self) -> list[float]:
        groups: dict = {}
        for e in self.entries:
            groups[e.group] = max(groups.get(e.group, 0.0), e.max_abs)
        return [groups[g] for g in sorted(groups)]

    def failures(self) -> list[ReportEntry]:
        return [e for e in self.entries if e.max_abs > self.tolerance]

    def to_dict(self) -> dict:
        out = {
            "kind": self.kind,
            "method": self.method,
            "samples": self.samples,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "max_residual": self.max_residual,
            "entries": [{"label": e.label, "max_abs_residual": e.max_abs, "passed": e.max_abs <= self.tolerance} for e in self.entries],
        }
        if self.canonical_exact is not None:
            out["canonical_forms_vanish_exactly"] = self.canonical_exact
        if self.dropped:
            out["dropped_generators"] = self.dropped
        return out

    def to_table(self) -> str:
        width = max([len(e.label) for e in self.entries] + [10])
        lines = [f"{self.kind} [{self.method}; {self.samples}; tolerance {self.tolerance:.3g}]"]
        for e in self.entries:
            mark = "ok" if e.max_abs <= self.tolerance else "FAIL"
            lines.append(f"  {e.label:<{width}}  max|r| = {e.max_abs:.3e}  {mark}")
        if self.canonical_exact is not None:
            lines.append(f"  canonical forms pull back to 0 exactly: {'yes' if self.canonical_exact else 'no'}")
        for pos in self.dropped:
            lines.append(f"  generator {pos + 1} dropped (degree > n)")
        lines.append(f"  => {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)


def _method(sol: CandidateSolution, exact: bool) -> str:
    if exact:
        return "exact symbolic"
    return "+".join(sorted(set(sol.methods)))


def _check_dims(js: JetSpace, sol: CandidateSolution):
    if sol.n != js.n or sol.m != js.m:
        raise ValueError(f"solution has (n, m) = ({sol.n}, {sol.m}), jet space {js} needs ({js.n}, {js.m})")


def _evaluate_entries(js, sol, labelled: list[tuple[str, int, Expr]], samples: SampleSet, coefficients, tolerance):
    exprs = [e for _, _, e in labelled]
    exact = _exact_values(js, sol, exprs, coefficients, samples.points)
    entries = []
    if exact is not None:
        for (label, group, _), (r, vals) in zip(labelled, exact):
            entries.append(ReportEntry(label, vals, group, r))
    else:
        pro = prolong(sol, js.k + 1)
        env = _jet_env(js, pro, samples.points)
        fns = _functions(js, exprs, coefficients, env)
        npts = len(samples.points)
        for label, group, e in labelled:
            v = np.broadcast_to(np.asarray(evaluate(e, env, fns), dtype=float), (npts,)).copy()
            entries.append(ReportEntry(label, v, group))
    tol = (EXACT_TOLERANCE if exact is not None else sol.default_tolerance()) if tolerance is None else tolerance
    return entries, tol, exact is not None


def residual(e: GMAE, sol: CandidateSolution, samples=None, coefficients: Mapping[str, CoefficientBinding] | None = None, tolerance: float | None = None) -> VerificationReport:
    """Evaluate every equation of ``e`` on the prolonged solution."""
    js = e.js
    _check_dims(js, sol)
    coefficients = coefficients or {}
    samples = default_samples(sol, js) if samples is None else _as_samples(samples, js.n)
    labelled = []
    for mu, system in enumerate(e.systems, start=1):
        for eq in system.equations:
            labelled.append((f"F{mu}({','.join(map(str, eq.rows))})", mu, eq.expr))
    entries, tol, exact = _evaluate_entries(js, sol, labelled, samples, coefficients, tolerance)
    return VerificationReport("equation residual", entries, tol, samples.description, _method(sol, exact))


def check_integral_manifold(g: GMAS, sol: CandidateSolution, samples=None, coefficients: Mapping[str, CoefficientBinding] | None = None, tolerance: float | None = None) -> VerificationReport:
    """Evaluate the pullback of every generator to the prolonged graph."""
    js = g.js
    _check_dims(js, sol)
    coefficients = coefficients or {}
    samples = default_samples(sol, js) if samples is None else _as_samples(samples, js.n)
    canonical_exact = all(pullback_to_graph(w, js).is_zero() for w in canonical_forms(js))
    labelled, dropped = [], []
    for mu, gen in enumerate(g.generators, start=1):
        if gen.degree > js.n:
            dropped.append(mu - 1)
            continue
        pulled = pullback_to_graph(gen, js)
        for rows in combinations(range(1, js.n + 1), gen.degree):
            c = pulled.coefficient(*[DX(i) for i in rows])
            labelled.append((f"Psi{mu}[{'^'.join(f'dx{i}' for i in rows)}]", mu, c))
    entries, tol, exact = _evaluate_entries(js, sol, labelled, samples, coefficients, tolerance)
    return VerificationReport(
        "integral manifold", entries, tol, samples.description, _method(sol, exact), canonical_exact, dropped
    )


def check_both(g: GMAS, sol, samples=None, coefficients=None, tolerance=None):
    """Equation residual of the compiled system and the integral-manifold check."""
    from .monge import prune_high_degree

    pruned, _ = prune_high_degree(g)
    samples = default_samples(sol, g.js) if samples is None else _as_samples(samples, g.js.n)
    r1 = residual(gmas_to_gmae(pruned), sol, samples, coefficients, tolerance)
    r2 = check_integral_manifold(g, sol, samples, coefficients, tolerance)
    return r1, r2


def default_samples(sol: CandidateSolution, js: JetSpace, count: int = 20, seed: int = 0) -> SampleSet:
    grids = [c for c in sol.components if isinstance(c, NumericGrid)]
    if grids:
        return grid_samples(grids[0], js.k + 1)
    return random_samples(js.n, count, seed=seed)


# --------------------------------------------------------------------------
# independent pullback oracle


def oracle_pullback(a: Form, sol: CandidateSolution, point, js: JetSpace, coefficients: Mapping[str, CoefficientBinding] | None = None, domain=None) -> np.ndarray:
    """Values ``a(T_{nu_1}, ..., T_{nu_l})`` on the graph's tangent frame.

    ``T_nu`` is the push-forward of ``d/dx_nu``: it has ``dx_i``-component
    ``delta``, ``dz^a``-component ``z^a_nu`` and ``dp^a_I``-component
    ``z^a_{I nu}``.  Each basis key contributes its coefficient times the
    determinant of covector values on the frame; no symbolic pullback is used.
    Returns a fully antisymmetric array of shape ``(n,) * degree``.
    """
    _check_dims(js, sol)
    js.check(a)
    pt = np.asarray(point, dtype=float).reshape(1, js.n)
    if domain is not None:
        for i, (lo, hi) in enumerate(domain):
            if not (lo <= pt[0, i] <= hi):
                raise ValueError(f"point {pt[0].tolist()} lies outside the sample domain")
    pro = prolong(sol, js.k + 1)
    env = _jet_env(js, pro, pt)
    n = js.n

    def d(alpha, index):
        return float(pro(alpha, index, pt)[0])

    def p_val(alpha, index):
        return float(env[JetCoord(alpha, index)][0])

    def cov_on(cov, nu: int) -> float:
        if isinstance(cov, DX):
            return 1.0 if cov.i == nu else 0.0
        if isinstance(cov, DZ):
            return d(cov.alpha, (nu,))
        if isinstance(cov, DP):
            return d(cov.alpha, extend(cov.index, nu))
        if isinstance(cov, Omega0):
            return d(cov.alpha, (nu,)) - p_val(cov.alpha, (nu,))
        if isinstance(cov, Omega):
            return d(cov.alpha, extend(cov.index, nu)) - p_val(cov.alpha, extend(cov.index, nu))
        raise TypeError(cov)

    l = a.degree
    coeff_exprs = [c for _, c in a.items()]
    fns = _functions(js, coeff_exprs, coefficients or {}, env)
    keys = [(key, float(np.asarray(evaluate(c, env, fns)).reshape(-1)[0])) for key, c in a.items()]
    out = np.zeros((n,) * l) if l else np.zeros(())
    if l == 0:
        return np.array(sum(v for _, v in keys))
    for rows in combinations(range(1, n + 1), l):
        total = 0.0
        for key, c in keys:
            mat = np.array([[cov_on(cov, nu) for nu in rows] for cov in key])
            total += c * float(np.linalg.det(mat))
        for perm in permutations(range(l)):
            sign = _perm_sign(perm)
            out[tuple(rows[q] - 1 for q in perm)] = sign * total
    return out


def _perm_sign(perm) -> int:
    inv = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
    return -1 if inv % 2 else 1


def symbolic_pullback_values(a: Form, sol: CandidateSolution, point, js: JetSpace, coefficients=None) -> dict:
    """``dx``-tuple coefficients of the symbolic pullback at one point."""
    pulled = pullback_to_graph(a, js)
    pt = np.asarray(point, dtype=float).reshape(1, js.n)
    pro = prolong(sol, js.k + 1)
    env = _jet_env(js, pro, pt)
    exprs = [c for _, c in pulled.items()]
    fns = _functions(js, exprs, coefficients or {}, env)
    out = {}
    for rows in combinations(range(1, js.n + 1), a.degree):
        c = pulled.coefficient(*[DX(i) for i in rows])
        out[rows] = float(np.asarray(evaluate(c, env, fns)).reshape(-1)[0])
    return out
