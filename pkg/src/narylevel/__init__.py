"""Exact computations with n-ary algebras of level one."""

from .classification import Kind, Status, enumerate_level_one, is_infinite_level_one, recognize_level_one
from .degeneration import BasisFamily, DegenerationWitness, apply_witness, iw_contraction
from .errors import NaryError
from .fileformats import parse_structure, parse_witness, render_structure, render_witness
from .properties import form_decomposition, is_p_anticommutative, is_p_attractive, is_subalgebraic
from .scalars import LaurentPoly, MultiPoly, RatMatrix
from .structures import AlgebraStructure, Partition, Subspace, direct_sum_zero, gl_action

__all__ = [
    "AlgebraStructure",
    "BasisFamily",
    "DegenerationWitness",
    "Kind",
    "LaurentPoly",
    "MultiPoly",
    "NaryError",
    "Partition",
    "RatMatrix",
    "Status",
    "Subspace",
    "apply_witness",
    "direct_sum_zero",
    "enumerate_level_one",
    "form_decomposition",
    "gl_action",
    "is_infinite_level_one",
    "is_p_anticommutative",
    "is_p_attractive",
    "is_subalgebraic",
    "iw_contraction",
    "parse_structure",
    "parse_witness",
    "recognize_level_one",
    "render_structure",
    "render_witness",
]

__version__ = "0.1.0"
