"""Structured documents: parsing, prefix ASTs and (de)serialization.

Expression strings use Python operator syntax over these names:

=====================  ==========================================
``x1``, ``x2``         independent variables
``z``, ``z[2]``        unknowns (``z`` means ``z[1]``)
``p12``, ``p[2](1,2)`` jet coordinates (digits form only when m = 1)
``z_12``, ``z[2](1,2)`` derivative symbols ``z^a_{x1x2}``
any other identifier   opaque coefficient function
=====================  ==========================================

Multi-indices must be written sorted.  Prefix ASTs are JSON arrays such as
``["+", ["*", 2, ["p", 1, [1]]], ["fn", "A", ["x1", "z[1]"]]]``.
"""

from __future__ import annotations

import ast
import json
import re
from fractions import Fraction
from importlib import resources
from typing import Any

import jsonschema

from .exterior import DP, DX, DZ, Form, Omega, Omega0, check_covector
from .jetspace import JetSpace
from .monge import GMAE, GMAS, Equation, GmaeSystem
from .render import atom_tag, covector_tag
from .symexpr import CoeffFn, DerivSym, Expr, FormalPartial, IndependentVar, JetCoord, Unknown

FORMAT = "gmas-document"
VERSION = 1


class DocumentError(ValueError):
    """Malformed or inconsistent input document."""


# --------------------------------------------------------------------------
# atoms and covector tags

_TAG_PATTERNS = [
    (re.compile(r"^x(\d+)$"), "x"),
    (re.compile(r"^z\[(\d+)\]$"), "z"),
    (re.compile(r"^p\[(\d+)\]\(([\d,\s]+)\)$"), "p"),
    (re.compile(r"^z\[(\d+)\]\(([\d,\s]+)\)$"), "d"),
]


def _sorted_index(text: str, what: str) -> tuple[int, ...]:
    idx = tuple(int(t) for t in text.split(",") if t.strip())
    if not idx:
        raise DocumentError(f"{what}: empty multi-index")
    if list(idx) != sorted(idx):
        raise DocumentError(f"{what}: multi-index {idx} must be written sorted, e.g. {tuple(sorted(idx))}")
    return idx


def parse_atom_tag(tag: str, js: JetSpace | None = None):
    """Inverse of :func:`gmas.render.atom_tag`."""
    for pat, kind in _TAG_PATTERNS:
        mt = pat.match(tag.strip())
        if not mt:
            continue
        if kind == "x":
            a = IndependentVar(int(mt.group(1)))
        elif kind == "z":
            a = Unknown(int(mt.group(1)))
        elif kind == "p":
            a = JetCoord(int(mt.group(1)), _sorted_index(mt.group(2), tag))
        else:
            a = DerivSym(int(mt.group(1)), _sorted_index(mt.group(2), tag))
        if js is not None:
            _check_atom(a, js, tag)
        return a
    raise DocumentError(f"unrecognized coordinate tag {tag!r}")


def _check_atom(a, js: JetSpace, where: str) -> None:
    ok = True
    if isinstance(a, IndependentVar):
        ok = 1 <= a.index <= js.n
    elif isinstance(a, (Unknown, JetCoord, DerivSym)):
        ok = 1 <= a.alpha <= js.m
        if isinstance(a, (JetCoord, DerivSym)):
            ok = ok and a.index[0] >= 1 and a.index[-1] <= js.n
        if isinstance(a, JetCoord):
            ok = ok and len(a.index) <= js.k
    if not ok:
        raise DocumentError(f"{where}: {atom_tag(a)} does not exist on {js}")


_COVECTOR_PATTERNS = [
    (re.compile(r"^dx(\d+)$"), "dx"),
    (re.compile(r"^dz(\d+)$"), "dz"),
    (re.compile(r"^dp\[(\d+)\]\(([\d,\s]+)\)$"), "dp"),
    (re.compile(r"^omega0\[(\d+)\]$"), "o0"),
    (re.compile(r"^omega\[(\d+)\]\(([\d,\s]+)\)$"), "o"),
]


def parse_covector(tag: str, js: JetSpace):
    """``dx1``, ``dz2``, ``dp[1](1,2)``, ``omega0[1]``, ``omega[1](2)``."""
    for pat, kind in _COVECTOR_PATTERNS:
        mt = pat.match(tag.strip())
        if not mt:
            continue
        v = int(mt.group(1))
        if kind == "dx":
            cov = DX(v)
        elif kind == "dz":
            cov = DZ(v)
        elif kind == "dp":
            cov = DP(v, _sorted_index(mt.group(2), tag))
        elif kind == "o0":
            cov = Omega0(v)
        else:
            cov = Omega(v, _sorted_index(mt.group(2), tag))
        try:
            check_covector(cov, js)
        except ValueError as exc:
            raise DocumentError(str(exc)) from None
        return cov
    raise DocumentError(f"unrecognized covector tag {tag!r}")


# --------------------------------------------------------------------------
# expression strings

_NAME_X = re.compile(r"^x(\d+)$")
_NAME_P = re.compile(r"^p(\d+)$")
_NAME_D = re.compile(r"^z_(\d+)$")


class _Parser:
    def __init__(self, js: JetSpace, declared: dict | None, allow_coefficients: bool, source: str):
        self.js = js
        self.declared = declared or {}
        self.allow = allow_coefficients
        self.source = source

    def fail(self, msg: str):
        raise DocumentError(f"in {self.source!r}: {msg}")

    def digits(self, text: str) -> tuple[int, ...]:
        idx = tuple(int(c) for c in text)
        if list(idx) != sorted(idx):
            self.fail(f"multi-index {text} must be written sorted ({''.join(sorted(text))})")
        return idx

    def atom(self, a) -> Expr:
        _check_atom(a, self.js, self.source)
        return Expr.atom(a)

    def name(self, ident: str) -> Expr:
        js = self.js
        if mt := _NAME_X.match(ident):
            return self.atom(IndependentVar(int(mt.group(1))))
        if ident == "z":
            return self.atom(Unknown(1))
        if mt := _NAME_P.match(ident):
            if js.m != 1:
                self.fail(f"{ident}: with m > 1 write p[alpha](...)")
            return self.atom(JetCoord(1, self.digits(mt.group(1))))
        if mt := _NAME_D.match(ident):
            if js.m != 1:
                self.fail(f"{ident}: with m > 1 write z[alpha](...)")
            return self.atom(DerivSym(1, self.digits(mt.group(1))))
        if not self.allow:
            self.fail(f"unknown name {ident!r}")
        args = self.declared.get(ident)
        if args is None:
            args = js.coordinates
        return Expr.atom(CoeffFn(ident, tuple(args)))

    def node(self, nd) -> Expr:
        if isinstance(nd, ast.Expression):
            return self.node(nd.body)
        if isinstance(nd, ast.Constant):
            if isinstance(nd.value, bool) or not isinstance(nd.value, (int, float)):
                self.fail(f"unsupported constant {nd.value!r}")
            if isinstance(nd.value, float):
                return Expr.const(Fraction(str(nd.value)))
            return Expr.const(nd.value)
        if isinstance(nd, ast.Name):
            return self.name(nd.id)
        if isinstance(nd, ast.UnaryOp) and isinstance(nd.op, (ast.USub, ast.UAdd)):
            v = self.node(nd.operand)
            return -v if isinstance(nd.op, ast.USub) else v
        if isinstance(nd, ast.BinOp):
            a, b = self.node(nd.left), self.node(nd.right)
            if isinstance(nd.op, ast.Add):
                return a + b
            if isinstance(nd.op, ast.Sub):
                return a - b
            if isinstance(nd.op, ast.Mult):
                return a * b
            if isinstance(nd.op, ast.Div):
                if not b.is_constant() or b.is_zero():
                    self.fail("division only by non-zero numbers")
                return a / b.constant_value()
            if isinstance(nd.op, ast.Pow):
                if not b.is_constant() or b.constant_value().denominator != 1 or b.constant_value() < 0:
                    self.fail("exponents must be non-negative integers")
                return a ** int(b.constant_value())
            self.fail(f"unsupported operator {type(nd.op).__name__}")
        if isinstance(nd, ast.Subscript) and isinstance(nd.value, ast.Name) and nd.value.id == "z":
            return self.atom(Unknown(self._int(nd.slice)))
        if isinstance(nd, ast.Call) and isinstance(nd.func, ast.Subscript) and isinstance(nd.func.value, ast.Name):
            head = nd.func.value.id
            if head not in ("p", "z") or nd.keywords:
                self.fail(f"unsupported call {ast.unparse(nd)}")
            alpha = self._int(nd.func.slice)
            idx = tuple(self._int(a) for a in nd.args)
            if not idx:
                self.fail(f"{ast.unparse(nd)}: empty multi-index")
            if list(idx) != sorted(idx):
                self.fail(f"multi-index {idx} must be written sorted, e.g. {tuple(sorted(idx))}")
            return self.atom(JetCoord(alpha, idx) if head == "p" else DerivSym(alpha, idx))
        self.fail(f"unsupported syntax {ast.unparse(nd)}")

    def _int(self, nd) -> int:
        if isinstance(nd, ast.Constant) and isinstance(nd.value, int) and not isinstance(nd.value, bool):
            return nd.value
        self.fail(f"expected an integer, got {ast.unparse(nd)}")


def parse_expr(text: str, js: JetSpace, declared: dict | None = None, allow_coefficients: bool = True) -> Expr:
    """Parse an expression string in the document syntax."""
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise DocumentError(f"cannot parse {text!r}: {exc.msg}") from None
    return _Parser(js, declared, allow_coefficients, text).node(tree)


# --------------------------------------------------------------------------
# prefix AST


def _number_ast(c: Fraction):
    return c.numerator if c.denominator == 1 else ["q", c.numerator, c.denominator]


def atom_ast(a) -> list:
    if isinstance(a, IndependentVar):
        return ["x", a.index]
    if isinstance(a, Unknown):
        return ["z", a.alpha]
    if isinstance(a, JetCoord):
        return ["p", a.alpha, list(a.index)]
    if isinstance(a, DerivSym):
        return ["d", a.alpha, list(a.index)]
    if isinstance(a, CoeffFn):
        return ["fn", a.name, [atom_tag(c) for c in a.args]]
    if isinstance(a, FormalPartial):
        return ["partial", atom_ast(a.fn), [atom_tag(c) for c in a.wrt]]
    raise TypeError(a)


def to_ast(e: Expr):
    """Canonical prefix AST: a sum of products in normal-form term order."""
    terms = []
    for mono, c in e.terms:
        factors = [] if c == 1 and mono else [_number_ast(c)]
        for a, k in mono:
            factors.append(atom_ast(a) if k == 1 else ["^", atom_ast(a), k])
        terms.append(factors[0] if len(factors) == 1 else ["*", *factors])
    if not terms:
        return 0
    return terms[0] if len(terms) == 1 else ["+", *terms]


def _atom_from_ast(node, js: JetSpace | None):
    head = node[0]
    if head == "x":
        a = IndependentVar(int(node[1]))
    elif head == "z":
        a = Unknown(int(node[1]))
    elif head in ("p", "d"):
        idx = tuple(int(i) for i in node[2])
        if not idx or list(idx) != sorted(idx):
            raise DocumentError(f"multi-index {list(idx)} must be non-empty and sorted")
        a = JetCoord(int(node[1]), idx) if head == "p" else DerivSym(int(node[1]), idx)
    elif head == "fn":
        a = CoeffFn(str(node[1]), tuple(parse_atom_tag(t, js) for t in node[2]))
        return a
    elif head == "partial":
        fn = _atom_from_ast(node[1], js)
        try:
            return FormalPartial(fn, tuple(parse_atom_tag(t, js) for t in node[2]))
        except ValueError as exc:
            raise DocumentError(str(exc)) from None
    else:
        raise DocumentError(f"unknown AST node {head!r}")
    if js is not None:
        _check_atom(a, js, f"AST {node!r}")
    return a


def from_ast(node, js: JetSpace | None = None) -> Expr:
    if isinstance(node, bool):
        raise DocumentError("booleans are not expressions")
    if isinstance(node, int):
        return Expr.const(node)
    if isinstance(node, str):
        if js is None:
            raise DocumentError("string expressions need a jet space")
        return parse_expr(node, js)
    if not isinstance(node, list) or not node:
        raise DocumentError(f"malformed AST node {node!r}")
    head = node[0]
    if head == "+":
        out = Expr()
        for t in node[1:]:
            out = out + from_ast(t, js)
        return out
    if head == "*":
        out = Expr.const(1)
        for t in node[1:]:
            out = out * from_ast(t, js)
        return out
    if head == "-":
        if len(node) == 2:
            return -from_ast(node[1], js)
        return from_ast(node[1], js) - from_ast(node[2], js)
    if head == "^":
        k = node[2]
        if not isinstance(k, int) or isinstance(k, bool) or k < 0:
            raise DocumentError("exponents must be non-negative integers")
        return from_ast(node[1], js) ** k
    if head == "q":
        if node[2] == 0:
            raise DocumentError("zero denominator")
        return Expr.const(Fraction(int(node[1]), int(node[2])))
    return Expr.atom(_atom_from_ast(node, js))


# --------------------------------------------------------------------------
# schema


def schema() -> dict:
    return json.loads(resources.files("gmas").joinpath("schema.json").read_text())


def validate(doc: Any) -> None:
    try:
        jsonschema.validate(doc, schema())
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise DocumentError(f"schema violation at {where}: {exc.message}") from None


def _jet(doc: dict) -> JetSpace:
    j = doc["jet"]
    try:
        return JetSpace(j["n"], j.get("m", 1), j["k"])
    except ValueError as exc:
        raise DocumentError(str(exc)) from None


def _declared(doc: dict, js: JetSpace) -> dict:
    out = {}
    for name, args in doc.get("declare", {}).items():
        out[name] = tuple(parse_atom_tag(t, js) for t in args)
        for a in out[name]:
            if isinstance(a, DerivSym):
                raise DocumentError(f"coefficient {name} cannot depend on derivative symbols")
    return out


def _coeff(value, js: JetSpace, declared: dict) -> Expr:
    if isinstance(value, str):
        return parse_expr(value, js, declared)
    if isinstance(value, dict):
        args = value.get("args")
        args = js.coordinates if args is None else tuple(parse_atom_tag(t, js) for t in args)
        return Expr.atom(CoeffFn(value["name"], args))
    return from_ast(value, js)


# --------------------------------------------------------------------------
# GMAS documents


def gmas_from_doc(doc: dict) -> tuple[GMAS, list[int]]:
    """System and the 0-based positions of generators of degree above ``n``.

    High-degree generators are kept in the returned system (they are
    harmless for verification); :func:`gmas.monge.prune_high_degree` drops them.
    """
    validate(doc)
    if "generators" not in doc:
        raise DocumentError("document has no generators")
    js = _jet(doc)
    declared = _declared(doc, js)
    gens = []
    for pos, g in enumerate(doc["generators"]):
        form = None
        for t in g["terms"]:
            key = tuple(parse_covector(c, js) for c in t["covectors"])
            if form is not None and len(key) != form.degree:
                raise DocumentError(f"generator {pos + 1} mixes degrees {form.degree} and {len(key)}")
            c = _coeff(t["coeff"], js, declared)
            if any(isinstance(a, DerivSym) for a in c.atoms()):
                raise DocumentError(f"generator {pos + 1}: coefficients cannot involve derivative symbols")
            term = Form({key: c}, len(key))
            form = term if form is None else form + term
        if form.degree == 0:
            raise DocumentError(f"generator {pos + 1} has degree 0")
        if "degree" in g and form.degree != g["degree"]:
            raise DocumentError(f"generator {pos + 1} declares degree {g['degree']} but has {form.degree}-form terms")
        gens.append(form)
    dropped = [pos for pos, f in enumerate(gens) if f.degree > js.n]
    try:
        return GMAS(js, tuple(gens)), dropped
    except ValueError as exc:
        raise DocumentError(str(exc)) from None


def _header(js: JetSpace) -> dict:
    return {"format": FORMAT, "version": VERSION, "jet": {"n": js.n, "m": js.m, "k": js.k}}


def gmas_to_doc(g: GMAS) -> dict:
    doc = _header(g.js)
    doc["generators"] = [
        {
            "degree": f.degree,
            "terms": [{"covectors": [covector_tag(c) for c in key], "coeff": to_ast(c)} for key, c in f.terms],
        }
        for f in g.generators
    ]
    return doc


# --------------------------------------------------------------------------
# GMAE documents


def gmae_to_doc(e: GMAE) -> dict:
    from .render import equation_text

    doc = _header(e.js)
    doc["order"] = e.order
    doc["systems"] = [
        {
            "degree": s.degree,
            "equations": [
                {"rows": list(eq.rows), "expr": to_ast(eq.expr), "text": equation_text(Equation(eq.rows, eq.expr), e.m, e.k)}
                for eq in s.equations
            ],
        }
        for s in e.systems
    ]
    return doc


def gmae_from_doc(doc: dict) -> GMAE:
    validate(doc)
    if "systems" not in doc:
        raise DocumentError("document has no equation systems")
    js = _jet(doc)
    if "order" in doc and doc["order"] != js.k + 1:
        raise DocumentError(f"order {doc['order']} does not match k + 1 = {js.k + 1}")
    declared = _declared(doc, js)
    systems = []
    for s in doc["systems"]:
        eqs = []
        for eq in s["equations"]:
            rows = tuple(eq["rows"])
            if list(rows) != sorted(set(rows)) or len(rows) != s["degree"] or rows[0] < 1 or rows[-1] > js.n:
                raise DocumentError(f"rows {list(rows)} must be {s['degree']} increasing indices in 1..{js.n}")
            eqs.append(Equation(rows, _coeff(eq["expr"], js, declared)))
        eqs.sort(key=lambda q: q.rows)
        systems.append(GmaeSystem(s["degree"], tuple(eqs)))
    return GMAE(js.n, js.m, js.k, tuple(systems))


def load_document(doc: dict):
    """``GMAS`` or ``GMAE`` depending on the document body."""
    validate(doc)
    if "generators" in doc:
        return gmas_from_doc(doc)[0]
    return gmae_from_doc(doc)


def _contains_object(v) -> bool:
    return isinstance(v, dict) or (isinstance(v, list) and any(_contains_object(x) for x in v))


def _dump(v, indent: int) -> str:
    pad = "  " * (indent + 1)
    if isinstance(v, dict):
        if not v:
            return "{}"
        body = ",\n".join(f"{pad}{json.dumps(k)}: {_dump(x, indent + 1)}" for k, x in v.items())
        return "{\n" + body + "\n" + "  " * indent + "}"
    if isinstance(v, list) and _contains_object(v):
        body = ",\n".join(pad + _dump(x, indent + 1) for x in v)
        return "[\n" + body + "\n" + "  " * indent + "]"
    return json.dumps(v, ensure_ascii=False, separators=(", ", ": "))


def dumps(doc) -> str:
    """Deterministic serialization; arrays without objects stay on one line."""
    return _dump(doc, 0) + "\n"


def normalized(e: GMAE) -> GMAE:
    """Drop display terms so documents compare by expressions only."""
    return GMAE(e.n, e.m, e.k, tuple(GmaeSystem(s.degree, tuple(Equation(q.rows, q.expr) for q in s.equations)) for s in e.systems))


__all__ = [
    "DocumentError", "parse_expr", "parse_covector", "parse_atom_tag", "to_ast", "from_ast", "schema",
    "validate", "gmas_from_doc", "gmas_to_doc", "gmae_from_doc", "gmae_to_doc", "load_document", "dumps",
]
