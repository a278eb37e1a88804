"""Plain-text and LaTeX rendering of atoms, expressions, forms and equations.

Plain text follows the document syntax where it can (``x1``, ``p[1](1,2)``)
except for derivative symbols, which use the compact ``z_{x1x2}`` spelling.
LaTeX output uses ``x_{i}``, ``z^{a}``, ``p^{a}_{I}`` and ``z_{x_{1}x_{2}}``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Callable

from .symexpr import CoeffFn, DerivSym, Expr, FormalPartial, IndependentVar, JetCoord, Unknown


def _idx(index, sep=","):
    return sep.join(str(i) for i in index)


# --------------------------------------------------------------------------
# atoms


def atom_tag(a) -> str:
    """Document spelling of a coordinate or derivative atom."""
    if isinstance(a, IndependentVar):
        return f"x{a.index}"
    if isinstance(a, Unknown):
        return f"z[{a.alpha}]"
    if isinstance(a, JetCoord):
        return f"p[{a.alpha}]({_idx(a.index)})"
    if isinstance(a, DerivSym):
        return f"z[{a.alpha}]({_idx(a.index)})"
    raise TypeError(f"no tag for {a!r}")


def atom_text(a, m: int = 1) -> str:
    sup = (lambda alpha: "") if m == 1 else (lambda alpha: f"^{alpha}")
    if isinstance(a, IndependentVar):
        return f"x{a.index}"
    if isinstance(a, Unknown):
        return "z" + sup(a.alpha)
    if isinstance(a, JetCoord):
        return f"p{sup(a.alpha)}_{{{_idx(a.index, '')}}}"
    if isinstance(a, DerivSym):
        return f"z{sup(a.alpha)}_{{{''.join(f'x{i}' for i in a.index)}}}"
    if isinstance(a, CoeffFn):
        return a.name
    if isinstance(a, FormalPartial):
        wrt = "".join(f"d{atom_text(c, m)}" for c in a.wrt)
        return f"d{len(a.wrt) if len(a.wrt) > 1 else ''}{a.fn.name}/{wrt}"
    raise TypeError(f"not an atom: {a!r}")


_PLAIN_NAME = re.compile(r"^([A-Za-z]+)(\d+)$")


def coeff_name_latex(name: str) -> str:
    m = _PLAIN_NAME.match(name)
    if m:
        return f"{m.group(1)}_{{{m.group(2)}}}"
    return name


def atom_latex(a, m: int = 1) -> str:
    sup = (lambda alpha: "") if m == 1 else (lambda alpha: f"^{{{alpha}}}")
    if isinstance(a, IndependentVar):
        return f"x_{{{a.index}}}"
    if isinstance(a, Unknown):
        return "z" + sup(a.alpha)
    if isinstance(a, JetCoord):
        return f"p{sup(a.alpha)}_{{{_idx(a.index, '')}}}"
    if isinstance(a, DerivSym):
        return f"z{sup(a.alpha)}_{{{''.join(f'x_{{{i}}}' for i in a.index)}}}"
    if isinstance(a, CoeffFn):
        return coeff_name_latex(a.name)
    if isinstance(a, FormalPartial):
        order = len(a.wrt)
        head = r"\partial" if order == 1 else rf"\partial^{{{order}}}"
        wrt = " ".join(rf"\partial {atom_latex(c, m)}" for c in a.wrt)
        return rf"\frac{{{head} {coeff_name_latex(a.fn.name)}}}{{{wrt}}}"
    raise TypeError(f"not an atom: {a!r}")


# --------------------------------------------------------------------------
# expressions


def _monomial(mono, atom_fn: Callable, pow_fmt: str, sep: str) -> str:
    parts = []
    for a, k in mono:
        s = atom_fn(a)
        parts.append(s if k == 1 else pow_fmt.format(s, k))
    return sep.join(parts)


def _number(c: Fraction, latex: bool) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    if latex:
        return rf"\frac{{{c.numerator}}}{{{c.denominator}}}"
    return f"{c.numerator}/{c.denominator}"


def _render(e: Expr, atom_fn, latex: bool, order_key=None) -> str:
    terms = list(e.terms)
    if order_key is not None:
        terms.sort(key=order_key)
    if not terms:
        return "0"
    pow_fmt = "{}^{{{}}}" if latex else "{}^{}"
    sep = " "
    out = []
    for pos, (mono, c) in enumerate(terms):
        neg = c < 0
        mag = -c if neg else c
        body = _monomial(mono, atom_fn, pow_fmt, sep)
        if not mono:
            s = _number(mag, latex)
        elif mag == 1:
            s = body
        else:
            s = f"{_number(mag, latex)}{sep}{body}"
        if pos == 0:
            out.append(f"-{s}" if neg else s)
        else:
            out.append(f" - {s}" if neg else f" + {s}")
    return "".join(out)


def expr_text(e: Expr, m: int = 1, order_key=None) -> str:
    return _render(e, lambda a: atom_text(a, m), False, order_key)


def expr_latex(e: Expr, m: int = 1, order_key=None) -> str:
    return _render(e, lambda a: atom_latex(a, m), True, order_key)


def expr_source(e: Expr) -> str:
    """Expression string in the document input syntax (round-trips through the parser
    when every coefficient name is an identifier)."""
    def fn(a):
        if isinstance(a, CoeffFn):
            return a.name
        return atom_tag(a)

    terms = e.terms
    if not terms:
        return "0"
    out = []
    for pos, (mono, c) in enumerate(terms):
        neg = c < 0
        mag = -c if neg else c
        body = "*".join(fn(a) if k == 1 else f"{fn(a)}**{k}" for a, k in mono)
        num = _number(mag, False)
        if not mono:
            s = num
        elif mag == 1:
            s = body
        else:
            s = f"{num}*{body}"
        out.append((f"-{s}" if neg else s) if pos == 0 else (f" - {s}" if neg else f" + {s}"))
    return "".join(out)


# --------------------------------------------------------------------------
# forms


def covector_tag(c) -> str:
    from .exterior import DP, DX, DZ, Omega, Omega0

    if isinstance(c, DX):
        return f"dx{c.i}"
    if isinstance(c, DZ):
        return f"dz{c.alpha}"
    if isinstance(c, DP):
        return f"dp[{c.alpha}]({_idx(c.index)})"
    if isinstance(c, Omega0):
        return f"omega0[{c.alpha}]"
    if isinstance(c, Omega):
        return f"omega[{c.alpha}]({_idx(c.index)})"
    raise TypeError(f"not a covector: {c!r}")


def covector_latex(c, m: int = 1) -> str:
    from .exterior import DP, DX, DZ, Omega, Omega0

    sup = "" if m == 1 else f"^{{{c.alpha}}}" if hasattr(c, "alpha") else ""
    if isinstance(c, DX):
        return f"dx_{{{c.i}}}"
    if isinstance(c, DZ):
        return "dz" + sup
    if isinstance(c, DP):
        return "dp" + sup + f"_{{{_idx(c.index, '')}}}"
    if isinstance(c, Omega0):
        return r"\omega" + sup + "_{0}"
    if isinstance(c, Omega):
        return r"\omega" + sup + f"_{{{_idx(c.index, '')}}}"
    raise TypeError(f"not a covector: {c!r}")


def _paren(s: str, e: Expr) -> str:
    return f"({s})" if len(e) > 1 else s


def form_text(f, m: int = 1) -> str:
    if f.is_zero():
        return "0"
    parts = []
    for key, c in f.terms:
        wedge = "^".join(covector_tag(cv) for cv in key)
        coef = expr_text(c, m)
        if not key:
            parts.append(coef)
        elif c == 1:
            parts.append(wedge)
        elif c == -1:
            parts.append(f"-{wedge}")
        else:
            parts.append(f"{_paren(coef, c)} {wedge}")
    return " + ".join(parts).replace("+ -", "- ")


def form_latex(f, m: int = 1) -> str:
    if f.is_zero():
        return "0"
    parts = []
    for key, c in f.terms:
        wedge = r" \wedge ".join(covector_latex(cv, m) for cv in key)
        coef = expr_latex(c, m)
        if not key:
            parts.append(coef)
        elif c == 1:
            parts.append(wedge)
        elif c == -1:
            parts.append(f"-{wedge}")
        else:
            parts.append(rf"{_paren(coef, c)}\, {wedge}")
    return " + ".join(parts).replace("+ -", "- ")


# --------------------------------------------------------------------------
# equations


def equation_order_key(top_order: int):
    """Display order: by degree in top-order derivatives, then normal-form order."""
    def key(term):
        mono, _ = term
        top = sum(k for a, k in mono if isinstance(a, DerivSym) and a.order == top_order)
        return top
    return key


def _minor_latex(minor, m: int) -> str:
    from .monge import minor_entries

    rows = minor_entries(minor)
    if not rows:
        return "1"
    if len(rows) == 1:
        return atom_latex(rows[0][0], m)
    body = r" \\ ".join(" & ".join(atom_latex(a, m) for a in row) for row in rows)
    return r"\begin{vmatrix} " + body + r" \end{vmatrix}"


def _minor_text(minor, m: int) -> str:
    from .monge import minor_entries

    rows = minor_entries(minor)
    if not rows:
        return "1"
    if len(rows) == 1:
        return atom_text(rows[0][0], m)
    return "det[" + "; ".join(", ".join(atom_text(a, m) for a in row) for row in rows) + "]"


def _generic_terms(eq) -> bool:
    if not eq.terms:
        return False
    for t in eq.terms:
        atoms = t.coeff.atoms()
        if len(t.coeff) != 1 or len(atoms) != 1 or not isinstance(next(iter(atoms)), CoeffFn):
            return False
    return True


def _term_render(eq, m, latex: bool) -> str:
    out = []
    for pos, t in enumerate(eq.terms):
        (mono, c), = t.coeff.terms
        sign = t.sign * (1 if c > 0 else -1)
        mag = abs(c)
        At = (atom_latex if latex else atom_text)(mono[0][0], m)
        if mag != 1:
            At = f"{_number(mag, latex)} {At}"
        minor = (_minor_latex if latex else _minor_text)(t.minor, m)
        body = At if minor == "1" else f"{At} {minor}"
        if pos == 0:
            out.append(body if sign > 0 else f"-{body}")
        else:
            out.append(f" + {body}" if sign > 0 else f" - {body}")
    return "".join(out)


def equation_text(eq, m: int = 1, k: int = 1) -> str:
    if _generic_terms(eq):
        return _term_render(eq, m, False) + " = 0"
    return expr_text(eq.expr, m, equation_order_key(k + 1)) + " = 0"


def equation_latex(eq, m: int = 1, k: int = 1) -> str:
    if _generic_terms(eq):
        return _term_render(eq, m, True) + " = 0"
    return expr_latex(eq.expr, m, equation_order_key(k + 1)) + " = 0"


def gmae_latex(gmae) -> str:
    lines = [r"\begin{align*}"]
    eqs = [eq for system in gmae.systems for eq in system.equations]
    for pos, eq in enumerate(eqs):
        tail = r" \\" if pos < len(eqs) - 1 else ""
        lines.append("  " + equation_latex(eq, gmae.m, gmae.k).replace(" = 0", " &= 0") + tail)
    lines.append(r"\end{align*}")
    return "\n".join(lines) + "\n"


def gmas_latex(gmas) -> str:
    lines = [r"\begin{align*}"]
    gens = gmas.generators
    for pos, g in enumerate(gens):
        tail = r" \\" if pos < len(gens) - 1 else ""
        lines.append(rf"  \Psi_{{{pos + 1}}} &= {form_latex(g, gmas.js.m)}{tail}")
    lines.append(r"\end{align*}")
    return "\n".join(lines) + "\n"
