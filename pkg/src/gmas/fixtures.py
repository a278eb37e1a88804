"""Named example systems with a sample solution and coefficient bindings each."""

from __future__ import annotations

from dataclasses import dataclass, field

from .exterior import DP, DX, DZ, Form
from .jetspace import JetSpace
from .monge import GMAS, generic_form
from .symexpr import CoeffFn, Expr, p, z


@dataclass(frozen=True)
class Fixture:
    name: str
    description: str
    gmas: GMAS
    # solution components: expression strings in x1..xn (sympy syntax)
    solution: tuple[str, ...]
    coefficients: dict = field(default_factory=dict)
    expected: tuple[str, ...] = ()


def _named(js: JetSpace, name: str) -> Expr:
    return Expr.atom(CoeffFn(name, js.coordinates))


def _slots(js: JetSpace, layout) -> Form:
    """Form from ``(name, covectors)`` pairs with opaque coefficients."""
    out = None
    for name, covs in layout:
        term = Form({covs: _named(js, name)}, len(covs))
        out = term if out is None else out + term
    return out


def classical_ma() -> Fixture:
    js = JetSpace(2, 1, 1)
    g = GMAS(js, (generic_form(js, 2),))
    zero = {c.name: 0 for _, e in g.generators[0].terms for c in e.atoms()}
    # Laplace: A = -A^{1}_{2} = 1, C = A^{2}_{1} = 1
    coeffs = {**zero, "A^{1}_{2}": -1, "A^{2}_{1}": 1}
    return Fixture(
        "classical_ma",
        "generic 2-form on J^1(2,1); compiles to the classical Monge-Ampere equation",
        g,
        ("x1**2 - x2**2",),
        coeffs,
    )


def overdetermined_2x1() -> Fixture:
    js = JetSpace(2, 1, 1)
    g = GMAS(js, (generic_form(js, 1),))
    # z11 - 2 = 0 and z12 = 0
    coeffs = {"A^{1}": 1, "A^{2}": 0, "A_{1}": -2, "A_{2}": 0}
    return Fixture(
        "overdetermined_2x1",
        "generic 1-form on J^1(2,1); an overdetermined pair of second-order equations",
        g,
        ("x1**2 + x2**2",),
        coeffs,
    )


def _third_order_layout():
    return [
        ("A", (DX(1), DX(2))),
        ("B1", (DX(2), DP(1, (1, 1)))),
        ("B2", (DX(2), DP(1, (1, 2)))),
        ("B3", (DX(2), DP(1, (2, 2)))),
        ("B4", (DX(1), DP(1, (1, 1)))),
        ("B5", (DX(1), DP(1, (1, 2)))),
        ("B6", (DX(1), DP(1, (2, 2)))),
        ("C1", (DP(1, (1, 1)), DP(1, (1, 2)))),
        ("C2", (DP(1, (1, 1)), DP(1, (2, 2)))),
        ("C3", (DP(1, (1, 2)), DP(1, (2, 2)))),
    ]


def third_order_exceptional() -> Fixture:
    js = JetSpace(2, 1, 2)
    g = GMAS(js, (_slots(js, _third_order_layout()),))
    coeffs = {name: 0 for name, _ in _third_order_layout()}
    coeffs.update({"A": 6, "B1": 1})  # 6 - z111 = 0
    return Fixture(
        "third_order_exceptional",
        "general third-order completely exceptional equation on J^2(2,1)",
        g,
        ("x1**3 + x1*x2 - x2**2",),
        coeffs,
    )


def kdv() -> Fixture:
    js = JetSpace(2, 1, 2)
    psi = Form.basis(DX(1), DX(2), coeff=p([2]) + z() * p([1])) - Form.basis(DX(2), DP(1, (1, 1)))
    return Fixture(
        "kdv",
        "third-order system with A = p2 + z p1, B1 = -1: the Korteweg-de Vries equation",
        GMAS(js, (psi,)),
        ("3*sech((x1 - x2)/2)**2",),
        {},
        ("z_{x2} + z z_{x1} + z_{x1x1x1} = 0",),
    )


def cauchy_riemann_layout():
    """Opaque two-form pair on J^0(2,2) in the slot order used by the CR example."""
    def one(letter):
        return [
            (letter, (DX(1), DX(2))),
            (f"{letter}1", (DX(2), DZ(1))),
            (f"{letter}2", (DX(2), DZ(2))),
            (f"{letter}3", (DX(1), DZ(1))),
            (f"{letter}4", (DX(1), DZ(2))),
            (f"{letter}5", (DZ(1), DZ(2))),
        ]
    return one("A"), one("B")


def cauchy_riemann() -> Fixture:
    js = JetSpace(2, 2, 0)
    psi1 = -Form.basis(DX(2), DZ(1)) - Form.basis(DX(1), DZ(2))
    psi2 = -Form.basis(DX(2), DZ(2)) + Form.basis(DX(1), DZ(1))
    return Fixture(
        "cauchy_riemann",
        "pair of 2-forms on J^0(2,2); the Cauchy-Riemann equations",
        GMAS(js, (psi1, psi2)),
        ("x1**2 - x2**2", "2*x1*x2"),
        {},
        ("z^1_{x1} - z^2_{x2} = 0", "z^1_{x2} + z^2_{x1} = 0"),
    )


FIXTURES = {
    f.__name__: f
    for f in (classical_ma, overdetermined_2x1, third_order_exceptional, kdv, cauchy_riemann)
}


def names() -> list[str]:
    return list(FIXTURES)


def get(name: str) -> Fixture:
    try:
        return FIXTURES[name]()
    except KeyError:
        raise KeyError(f"unknown example {name!r}; available: {', '.join(FIXTURES)}") from None


__all__ = ["Fixture", "FIXTURES", "names", "get", "cauchy_riemann_layout"]
