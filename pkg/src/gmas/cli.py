"""Command-line front end (``gmas compile | decompile | check | generate | examples``).

Exit status: 0 success or pass, 1 verification failure, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import fixtures
from .documents import (
    DocumentError,
    dumps,
    gmae_from_doc,
    gmae_to_doc,
    gmas_from_doc,
    gmas_to_doc,
    parse_expr,
    validate,
)
from .monge import NormalFormError, generate_gmae, gmae_to_gmas, gmas_to_gmae, prune_high_degree
from .render import equation_text, gmae_latex, gmas_latex
from .symexpr import IndependentVar, MissingBindingError
from .verify import (
    Analytic,
    CandidateSolution,
    ClosedForm,
    NumericGrid,
    check_both,
    lattice_axes,
    lattice_samples,
    random_samples,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


# --------------------------------------------------------------------------
# io helpers


def _read_json(path: str) -> dict:
    if path.startswith("example:"):
        return gmas_to_doc(fixtures.get(path.split(":", 1)[1]).gmas)
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def _emit(doc: dict, latex: str | None, text_lines: list[str] | None, args) -> None:
    if args.out:
        out = Path(args.out)
        out.write_text(dumps(doc))
        if latex is not None:
            out.with_suffix(".tex").write_text(latex)
        return
    if text_lines is not None:
        sys.stdout.write("\n".join(text_lines) + "\n")
    elif latex is not None:
        sys.stdout.write(latex)
    else:
        sys.stdout.write(dumps(doc))


def _warn(msg: str) -> None:
    print(f"warning: {msg}", file=sys.stderr)


# --------------------------------------------------------------------------
# commands


def cmd_compile(args) -> int:
    doc = _read_json(args.input)
    g, _ = gmas_from_doc(doc)
    pruned, dropped = prune_high_degree(g)
    for pos in dropped:
        _warn(f"generator {pos + 1} has degree {g.generators[pos].degree} > n = {g.js.n}; it vanishes on every graph and is dropped")
    if not pruned.generators:
        raise InputError("no generators left after dropping those of degree > n")
    e = gmas_to_gmae(pruned)
    text = [equation_text(eq, e.m, e.k) for eq in e.equations] if args.text else None
    _emit(gmae_to_doc(e), gmae_latex(e) if args.latex else None, text, args)
    return EXIT_OK


def cmd_decompile(args) -> int:
    e = gmae_from_doc(_read_json(args.input))
    g = gmae_to_gmas(e)
    _emit(gmas_to_doc(g), gmas_latex(g) if args.latex else None, None, args)
    return EXIT_OK


def cmd_generate(args) -> int:
    try:
        e = generate_gmae(args.n, args.m, args.k, args.degrees)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    text = [equation_text(eq, e.m, e.k) for eq in e.equations] if args.text else None
    _emit(gmae_to_doc(e), gmae_latex(e) if args.latex else None, text, args)
    return EXIT_OK


def cmd_examples(args) -> int:
    if args.name is None:
        for name in fixtures.names():
            print(f"{name:<26}{fixtures.get(name).description}")
        return EXIT_OK
    try:
        fx = fixtures.get(args.name)
    except KeyError as exc:
        raise InputError(exc.args[0]) from None
    doc = gmas_to_doc(fx.gmas)
    doc = {**doc, "description": fx.description}
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{fx.name}.json").write_text(dumps(doc))
        (out / f"{fx.name}.solution.json").write_text(dumps({"components": list(fx.solution)}))
        if fx.coefficients:
            (out / f"{fx.name}.coeff.json").write_text(dumps({k: str(v) for k, v in fx.coefficients.items()}))
        return EXIT_OK
    sys.stdout.write(dumps(doc))
    return EXIT_OK


def _parse_grid(text: str, n: int) -> list[tuple[float, float, float]]:
    specs = []
    for part in text.split(","):
        bits = part.split(":")
        if len(bits) != 3:
            raise InputError(f"grid axis {part!r} must be a:b:h")
        try:
            specs.append(tuple(float(b) for b in bits))
        except ValueError:
            raise InputError(f"grid axis {part!r} must be numeric") from None
    if len(specs) == 1:
        specs = specs * n
    if len(specs) != n:
        raise InputError(f"grid has {len(specs)} axes, the system has n = {n}")
    return specs


def _solution_strings(spec: str) -> list[str]:
    path = Path(spec)
    if path.suffix == ".json" or path.is_file():
        doc = _read_json(spec)
        comps = doc.get("components") if isinstance(doc, dict) else None
        if not isinstance(comps, list) or not all(isinstance(c, str) for c in comps):
            raise InputError(f"{spec}: expected {{\"components\": [expression strings]}}")
        return comps
    return [s.strip() for s in spec.split(";") if s.strip()]


def _component(text: str, js, fd_axes):
    try:
        e = parse_expr(text, js, allow_coefficients=False)
        if all(isinstance(a, IndependentVar) for a in e.atoms()):
            comp = ClosedForm(e)
        else:
            raise InputError(f"solution {text!r} may only involve x1..x{js.n}")
    except DocumentError:
        try:
            comp = Analytic(text, js.n)
        except Exception as exc:  # sympy raises a variety of parse errors
            raise InputError(f"cannot parse solution {text!r}: {exc}") from None
    if fd_axes is None:
        return comp
    fn = comp.derivative(())
    mesh = np.meshgrid(*fd_axes, indexing="ij")
    pts = np.column_stack([mm.ravel() for mm in mesh])
    return NumericGrid(fd_axes, fn(pts).reshape(mesh[0].shape))


def _coefficients(path: str | None, js) -> dict:
    if path is None:
        return {}
    doc = _read_json(path)
    if not isinstance(doc, dict):
        raise InputError(f"{path}: expected an object mapping coefficient names to expressions")
    out = {}
    for name, value in doc.items():
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            value = repr(value)
        if not isinstance(value, str):
            raise InputError(f"{path}: binding for {name} must be an expression string")
        out[name] = parse_expr(value, js, allow_coefficients=False)
    return out


def cmd_check(args) -> int:
    doc = _read_json(args.system)
    validate(doc)
    if "generators" in doc:
        g, _ = gmas_from_doc(doc)
    else:
        g = gmae_to_gmas(gmae_from_doc(doc))
    js = g.js
    grid = _parse_grid(args.grid, js.n) if args.grid else None
    if args.fd and grid is None:
        raise InputError("--fd needs --grid")
    fd_axes = lattice_axes(grid) if args.fd else None
    comps = [_component(s, js, fd_axes) for s in _solution_strings(args.solution)]
    if len(comps) != js.m:
        raise InputError(f"solution has {len(comps)} components, the system has m = {js.m}")
    sol = CandidateSolution(js.n, tuple(comps))
    coeffs = _coefficients(args.coeff, js)
    if args.fd:
        samples = None
    elif grid is not None:
        samples = lattice_samples(grid)
    else:
        samples = random_samples(js.n, args.samples, seed=args.seed)
    r1, r2 = check_both(g, sol, samples, coeffs, args.tolerance)
    if r1.passed != r2.passed:
        # cannot happen for a correct compiler; surface it loudly
        print("error: equation and integral-manifold verdicts disagree", file=sys.stderr)
        return EXIT_FAIL
    if args.json:
        sys.stdout.write(dumps({"equation_residual": r1.to_dict(), "integral_manifold": r2.to_dict(), "passed": r1.passed and r2.passed}))
    else:
        print(r1.to_table())
        print(r2.to_table())
    return EXIT_OK if (r1.passed and r2.passed) else EXIT_FAIL


# --------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gmas", description="Compile, decompile and verify generalized Monge-Ampere systems.")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compile", help="system document -> equation document")
    c.add_argument("input", help="document path, '-' for stdin, or example:NAME")
    c.add_argument("--out", help="write the document here (LaTeX goes next to it as .tex)")
    c.add_argument("--latex", action="store_true", help="emit LaTeX")
    c.add_argument("--text", action="store_true", help="print the equations as plain text")
    c.set_defaults(func=cmd_compile)

    d = sub.add_parser("decompile", help="equation document -> system document")
    d.add_argument("input")
    d.add_argument("--out")
    d.add_argument("--latex", action="store_true")
    d.set_defaults(func=cmd_decompile)

    k = sub.add_parser("check", help="verify a candidate solution")
    k.add_argument("system", help="system or equation document (or example:NAME)")
    k.add_argument("solution", help="JSON file with {\"components\": [...]} or expressions separated by ';'")
    k.add_argument("--coeff", help="JSON file binding coefficient names to expressions in jet coordinates")
    k.add_argument("--tolerance", type=float, help="override the method tolerance")
    k.add_argument("--grid", help="sample lattice 'a:b:h,...' (a single axis applies to every axis)")
    k.add_argument("--fd", action="store_true", help="sample the solution on --grid and use finite differences")
    k.add_argument("--seed", type=int, default=0, help="seed for random sample points")
    k.add_argument("--samples", type=int, default=20, help="number of random sample points")
    k.add_argument("--json", action="store_true", help="print the reports as JSON")
    k.set_defaults(func=cmd_check)

    g = sub.add_parser("generate", help="generic equation system from signed minors")
    g.add_argument("n", type=int)
    g.add_argument("m", type=int)
    g.add_argument("k", type=int)
    g.add_argument("degrees", type=int, nargs="+", metavar="l")
    g.add_argument("--out")
    g.add_argument("--latex", action="store_true")
    g.add_argument("--text", action="store_true")
    g.set_defaults(func=cmd_generate)

    e = sub.add_parser("examples", help="list or materialize the bundled examples")
    e.add_argument("name", nargs="?")
    e.add_argument("--out", help="directory for the system, solution and coefficient files")
    e.set_defaults(func=cmd_examples)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, DocumentError, NormalFormError, MissingBindingError, ValueError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        if isinstance(exc, MissingBindingError):
            msg = f"{exc} (supply it with --coeff)"
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
