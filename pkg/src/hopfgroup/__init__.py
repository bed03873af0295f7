"""Exact Hopf-algebraic computations on totally disconnected groups.

Bruhat-Schwartz functions are finite combinations of coset indicators
chi(r H_n) over a filtration of compact open subgroups, with coefficients in
cyclotomic fields.  Every operation (coproducts, antipode, integrals,
convolution, Fourier transforms, operator matrices) is computed exactly.
"""

from .convalg import (
    ConvElement,
    cond_expectation,
    conv_mul,
    conv_star,
    dual_antipode,
    dual_coproduct,
    dual_counit,
    dual_membership_certificate,
    haar_weight,
    projection_pH,
    vector_state_tau,
)
from .dsl import format_function, parse_function, parse_scalar
from .errors import (
    ConductorError,
    ElementError,
    HopfError,
    LeakageError,
    LevelRangeError,
    UnsupportedOperation,
    UsageError,
    ValidationError,
)
from .fourier import dual_group, plancherel_check
from .group import parse_group
from .harness import GenConfig, SuiteReport, run_suite, run_suites
from .operator import Truncation, commutator_is_zero, exact_rank, matrix_of_conv, matrix_of_mult
from .scalar import CycScalar, root_of_unity
from .schwartz import (
    BSFunction,
    TensorDecomposition,
    antipode,
    coproduct_left,
    coproduct_right,
    counit,
    from_subgroup,
    galois_inverse,
    indicator,
    integral,
    is_group_like,
    membership_certificate,
)

__version__ = "0.1.0"

__all__ = [
    "BSFunction",
    "ConductorError",
    "ConvElement",
    "CycScalar",
    "ElementError",
    "GenConfig",
    "HopfError",
    "LeakageError",
    "LevelRangeError",
    "SuiteReport",
    "TensorDecomposition",
    "Truncation",
    "UnsupportedOperation",
    "UsageError",
    "ValidationError",
    "antipode",
    "commutator_is_zero",
    "cond_expectation",
    "conv_mul",
    "conv_star",
    "coproduct_left",
    "coproduct_right",
    "counit",
    "dual_antipode",
    "dual_coproduct",
    "dual_counit",
    "dual_group",
    "dual_membership_certificate",
    "exact_rank",
    "format_function",
    "from_subgroup",
    "galois_inverse",
    "haar_weight",
    "indicator",
    "integral",
    "is_group_like",
    "matrix_of_conv",
    "matrix_of_mult",
    "membership_certificate",
    "parse_function",
    "parse_group",
    "parse_scalar",
    "plancherel_check",
    "projection_pH",
    "root_of_unity",
    "run_suite",
    "run_suites",
    "vector_state_tau",
]
