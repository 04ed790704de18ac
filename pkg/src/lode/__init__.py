"""Classification of singular points of second-order linear ODEs under point transformations."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .jets import INF, Jet, exact
from .lde import Lde, PointTransformation, apply_transformation, discriminant, schwarzian
from .classify import (
    Kind,
    classify,
    formal_equivalence,
    formal_invariants,
    formal_normal_form,
    normalize_quadratic_differential,
)
from .regular import frobenius, monodromy_type, reduce_to_normal_form
from .reduce import factor, expand, reducibility_report, riccati_formal, symmetric_power_kernel
from .stokes import StokesCollection, gamma_stokes, numeric_monodromy, nu1_invariants, stokes_equivalent
from .symmetry import SymmetryGenerator, symmetry_algebra, verify_symmetry

__all__ = [
    "INF",
    "Jet",
    "exact",
    "Lde",
    "PointTransformation",
    "apply_transformation",
    "discriminant",
    "schwarzian",
    "Kind",
    "classify",
    "formal_equivalence",
    "formal_invariants",
    "formal_normal_form",
    "normalize_quadratic_differential",
    "frobenius",
    "monodromy_type",
    "reduce_to_normal_form",
    "factor",
    "expand",
    "reducibility_report",
    "riccati_formal",
    "symmetric_power_kernel",
    "StokesCollection",
    "gamma_stokes",
    "numeric_monodromy",
    "nu1_invariants",
    "stokes_equivalent",
    "SymmetryGenerator",
    "symmetry_algebra",
    "verify_symmetry",
]
