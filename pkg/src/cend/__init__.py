"""Exact arithmetic in the conformal endomorphism algebra.

Matrices over k[D, v] with the family of n-products from composition of
matrix differential operators, their operator realization inside matrices
over the Weyl algebra, automorphisms, one-sided ideals, and desk-scale
classification checks for irreducible subalgebras.

The commonly used names are re-exported here; the submodules stay importable
on their own (``cend.poly``, ``cend.weyl``, ``cend.conformal``,
``cend.operators``, ``cend.classify``, ``cend.verify``).
"""

from .classify import (
    AutomorphismSpec,
    Classification,
    ClosureResult,
    KvClosureResult,
    SubalgebraPresentation,
    apply_autom,
    apply_autom_weyl,
    canonicalize_Q,
    classify_irreducible,
    compose_autom,
    e_nq,
    kv_closure,
    left_ideal_member,
    right_ideal_member,
    subalgebra_closure,
)
from .conformal import (
    ConformalElement,
    bracket,
    check_associativity,
    check_lie,
    curr_embed,
    d_id,
    locality,
    locality_bound,
    nproduct,
    phi,
    phi_inv,
    sigma,
    v_id,
)
from .errors import (
    BoundTooSmallError,
    CendError,
    DimensionMismatchError,
    InsufficientSamplesError,
    NotClosedError,
    NotDifferentialError,
    NotUnimodularError,
    SingularMatrixError,
)
from .operators import (
    DifferentialSequence,
    OperatorSample,
    act,
    element_sequence,
    fit_differential_sequence,
    orbit_density_check,
    reconstruct,
    symbol,
    verify_composition,
)
from .poly import BiPoly, PolyMatrix, UniPoly, smith_normal_form
from .verify import verify_suite
from .weyl import (
    HSeqPair,
    WeylElement,
    WeylMatrix,
    h_sequences,
    q_truncate,
    q_valuation,
    rebase_coefficients,
    rebase_inverse,
    split_by_shift,
    verify_h_identities,
    weyl_mul,
)

__version__ = "0.1.0"

__all__ = [
    "AutomorphismSpec",
    "BiPoly",
    "BoundTooSmallError",
    "CendError",
    "Classification",
    "ClosureResult",
    "ConformalElement",
    "DifferentialSequence",
    "DimensionMismatchError",
    "HSeqPair",
    "InsufficientSamplesError",
    "KvClosureResult",
    "NotClosedError",
    "NotDifferentialError",
    "NotUnimodularError",
    "OperatorSample",
    "PolyMatrix",
    "SingularMatrixError",
    "SubalgebraPresentation",
    "UniPoly",
    "WeylElement",
    "WeylMatrix",
    "act",
    "apply_autom",
    "apply_autom_weyl",
    "bracket",
    "canonicalize_Q",
    "check_associativity",
    "check_lie",
    "classify_irreducible",
    "compose_autom",
    "curr_embed",
    "d_id",
    "e_nq",
    "element_sequence",
    "fit_differential_sequence",
    "h_sequences",
    "kv_closure",
    "left_ideal_member",
    "locality",
    "locality_bound",
    "nproduct",
    "orbit_density_check",
    "phi",
    "phi_inv",
    "q_truncate",
    "q_valuation",
    "rebase_coefficients",
    "rebase_inverse",
    "reconstruct",
    "right_ideal_member",
    "sigma",
    "smith_normal_form",
    "split_by_shift",
    "subalgebra_closure",
    "symbol",
    "v_id",
    "verify_composition",
    "verify_h_identities",
    "verify_suite",
    "weyl_mul",
]
