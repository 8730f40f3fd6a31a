"""Exact learning of multilinear polynomials over finite fields by
counted oracle queries: a classical baseline, a one-query linear learner,
the full exact quantum learner, a dense state-vector simulator, and
brute-force verifiers for the identities the algorithms rely on."""

from .errors import (
    BudgetExceeded,
    ContextMismatch,
    DimensionMismatch,
    InconsistentCoefficients,
    InvalidDegree,
    MemoryLimitExceeded,
    PromiseViolated,
)
from .field import BUILTIN_MODULI, FieldCtx, parse_field_spec
from .learn import (
    LearnReport,
    classical_learn,
    classical_query_count,
    learn_top_degree,
    lower_bound,
    quantum_learn,
    quantum_learn_linear,
    quantum_query_count,
)
from .oracle import FsPhaseOracle, HiddenOracle, QueryLedger, ReducedOracle
from .poly import (
    MultilinearPoly,
    add_points,
    basis_point,
    coefficient_count,
    derive_seed,
    index_to_point,
    point_to_index,
    poly_equal,
    random_poly,
    subset_from_members,
    subset_members,
    subsets_of_size,
    subsets_up_to,
    zero_point,
)
from .statevector import (
    DEFAULT_AMPLITUDE_CAP,
    QftMatrix,
    StateVector,
    apply_single,
    build_qft,
    measure_computational,
    prepare_uniform,
    sample_computational,
)
from .verify import verify_counting, verify_derivative_form, verify_kickback

__version__ = "0.1.0"

__all__ = [
    "BUILTIN_MODULI",
    "BudgetExceeded",
    "ContextMismatch",
    "DEFAULT_AMPLITUDE_CAP",
    "DimensionMismatch",
    "FieldCtx",
    "FsPhaseOracle",
    "HiddenOracle",
    "InconsistentCoefficients",
    "InvalidDegree",
    "LearnReport",
    "MemoryLimitExceeded",
    "MultilinearPoly",
    "PromiseViolated",
    "QftMatrix",
    "QueryLedger",
    "ReducedOracle",
    "StateVector",
    "add_points",
    "apply_single",
    "basis_point",
    "build_qft",
    "classical_learn",
    "classical_query_count",
    "coefficient_count",
    "derive_seed",
    "index_to_point",
    "learn_top_degree",
    "lower_bound",
    "measure_computational",
    "parse_field_spec",
    "point_to_index",
    "poly_equal",
    "prepare_uniform",
    "quantum_learn",
    "quantum_learn_linear",
    "quantum_query_count",
    "random_poly",
    "sample_computational",
    "subset_from_members",
    "subset_members",
    "subsets_of_size",
    "subsets_up_to",
    "verify_counting",
    "verify_derivative_form",
    "verify_kickback",
    "zero_point",
]
