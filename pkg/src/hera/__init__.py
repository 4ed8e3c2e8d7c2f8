"""Secure distributed matrix multiplication over one-point Hermitian codes."""

from hera.curve import CurvePoint, CurveTable, curve_enumerate, gamma_set
from hera.field import (
    FieldElement,
    FieldMatrix,
    FieldSpec,
    field_arith,
    field_make,
    hermitian_field,
    mat_inverse,
    mat_rank,
    mat_solve,
)
from hera.hermcode import (
    HermitianCode,
    code_build,
    dual_check,
    dual_m,
    min_distance_bruteforce,
)
from hera.kernels import BACKEND
from hera.rrspace import Monomial, RRFunction, monomial_basis, rr_dim, rr_eval
from hera.scheme import (
    EncodedPair,
    PointAssignment,
    SchemeParams,
    assign_points,
    audit_tmds,
    decode,
    encode,
    lagrange_basis_f,
    lagrange_basis_g,
    leakage_experiment,
    params_validate,
)
from hera.simnet import Transcript, rate_eval, run_protocol

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CurvePoint",
    "CurveTable",
    "EncodedPair",
    "FieldElement",
    "FieldMatrix",
    "FieldSpec",
    "HermitianCode",
    "Monomial",
    "PointAssignment",
    "RRFunction",
    "SchemeParams",
    "Transcript",
    "assign_points",
    "audit_tmds",
    "code_build",
    "curve_enumerate",
    "decode",
    "dual_check",
    "dual_m",
    "encode",
    "field_arith",
    "field_make",
    "gamma_set",
    "hermitian_field",
    "lagrange_basis_f",
    "lagrange_basis_g",
    "leakage_experiment",
    "mat_inverse",
    "mat_rank",
    "mat_solve",
    "min_distance_bruteforce",
    "monomial_basis",
    "params_validate",
    "rate_eval",
    "rr_dim",
    "rr_eval",
    "run_protocol",
]
