"""Exact-arithmetic construction and machine verification of the bivariate
(and one trivariate) orthogonal polynomial families on quadratic lattices:
divided-difference equations, derivative ladders, three-term-recurrence
matrices, monic families and connection coefficients.
"""

from .exactfield import GaussianRational, Rational, field_arithmetic, pochhammer, rat, rat_str
from .families import (
    ALL_FAMILIES,
    CDH,
    CH,
    CH_BAR,
    CH_TRI,
    RACAH,
    RACAH_BAR,
    WILSON,
    WILSON_BAR,
    DegenerateParameterError,
    FamilySpec,
    derivative_ladder_check,
    eval_family,
)
from .fbasis import BivarPoly, MPoly, OperatorMatrices, f_basis_eval, operator_matrices, structure_scalars
from .latticeops import LatticeSpec, SingularPointError, apply_D, apply_S, lattice_value
from .matrix import ExactMatrix, exact_inverse
from .pdeverify import (
    CoeffTable,
    coefficients,
    derived_coefficients,
    difference_form_residual,
    recover_coefficients,
    residual,
    second_order_residual,
    trivariate_residual,
    verify_table,
)
from .ttrr import (
    GChain,
    PolyVector,
    abc_matrices,
    connection,
    generate,
    g_corrections,
    g_primes,
    leading_matrix,
    sn_tn,
    sn_tn_derived,
)

__version__ = "1.0.0"

__all__ = [
    "ALL_FAMILIES",
    "BivarPoly",
    "CDH",
    "CH",
    "CH_BAR",
    "CH_TRI",
    "CoeffTable",
    "DegenerateParameterError",
    "ExactMatrix",
    "FamilySpec",
    "GChain",
    "GaussianRational",
    "LatticeSpec",
    "MPoly",
    "OperatorMatrices",
    "PolyVector",
    "RACAH",
    "RACAH_BAR",
    "Rational",
    "SingularPointError",
    "WILSON",
    "WILSON_BAR",
    "abc_matrices",
    "apply_D",
    "apply_S",
    "coefficients",
    "connection",
    "derivative_ladder_check",
    "derived_coefficients",
    "difference_form_residual",
    "eval_family",
    "exact_inverse",
    "f_basis_eval",
    "field_arithmetic",
    "generate",
    "g_corrections",
    "g_primes",
    "lattice_value",
    "leading_matrix",
    "operator_matrices",
    "pochhammer",
    "rat",
    "rat_str",
    "recover_coefficients",
    "residual",
    "second_order_residual",
    "sn_tn",
    "sn_tn_derived",
    "structure_scalars",
    "trivariate_residual",
    "verify_table",
]
