"""Generating sets of finite direct sums of matrix rings.

Decision, construction, counting and certification of generating sets of
direct sums of full matrix rings over finite fields, the integers and the
rationals, with exact arithmetic throughout.
"""

from .domains import QQ, ZZ, ExtField, PrimeField, build_ext_field, field_of_order
from .generation import (
    DirectSumShape,
    GenReport,
    MatTuple,
    common_eigenline,
    closure_generates,
    det_commutator_generates,
    lattice_generates_MnZ,
    mat_tuple,
    tuple_criterion_generates,
    flatten_det,
)
from .linalg import Mat, identity, mat, unit_mat, zero_mat

__version__ = "0.1.0"

__all__ = [
    "QQ", "ZZ", "ExtField", "PrimeField", "build_ext_field", "field_of_order",
    "DirectSumShape", "GenReport", "MatTuple", "common_eigenline",
    "closure_generates", "det_commutator_generates", "lattice_generates_MnZ",
    "mat_tuple", "tuple_criterion_generates", "flatten_det",
    "Mat", "identity", "mat", "unit_mat", "zero_mat",
    "__version__",
]
