"""Generalized Monge-Ampere systems on jet spaces: compile, decompile, verify."""

from .exterior import DP, DX, DZ, Form, Omega, Omega0, dp, dx, dz, exterior_derivative, mod_ck_reduce, wedge
from .jetspace import JetSpace, canonical_forms, pullback_to_graph
from .monge import (
    GMAE,
    GMAS,
    MinorSpec,
    NormalFormError,
    build_matrix,
    generate_gmae,
    generic_form,
    gmae_to_gmas,
    gmas_to_gmae,
    minor_det,
    prune_high_degree,
)
from .symexpr import CoeffFn, DerivSym, Expr, coeff, p, x, z, zd

__version__ = "0.1.0"

__all__ = [
    "DP", "DX", "DZ", "Form", "Omega", "Omega0", "dp", "dx", "dz", "exterior_derivative",
    "mod_ck_reduce", "wedge", "JetSpace", "canonical_forms", "pullback_to_graph", "GMAE", "GMAS",
    "MinorSpec", "NormalFormError", "build_matrix", "generate_gmae", "generic_form", "gmae_to_gmas",
    "gmas_to_gmae", "minor_det", "prune_high_degree", "CoeffFn", "DerivSym", "Expr", "coeff", "p",
    "x", "z", "zd",
]
