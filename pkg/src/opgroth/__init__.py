"""Finite operadic coherence workbench.

Finite categories, arity-truncated symmetric operads, discrete
fibrations, indexed sets, the Grothendieck construction and its
operad-structured refinement, with every coherence law checkable by
exhaustive enumeration at desk scale.
"""

from .report import CheckRecord, CheckReport, REPORT_SCHEMA_VERSION
from .fincore import (
    CatFunctor,
    FinCat,
    FinMap,
    NatTransform,
    block_permutation,
    factorize_monotone_perm,
    fiber,
    flatten_by_fibers,
    induced_fiber_map,
    product_category,
    reindex_by_fibers,
    validate_category,
    validate_functor,
    validate_natural_transformation,
)
from .operads import (
    Operad,
    OperadMorphism,
    Semiring,
    boolean_semiring,
    build_assoc,
    build_comm,
    build_qconv,
    check_operad_axioms,
    check_operad_morphism,
    check_semiring,
    terminal_morphism,
)
from .fib2cat import (
    DiscreteFibration,
    IndexedSet,
    check_discrete_fibration,
    lift,
    product_dfib,
    product_iset,
    validate_dfib_cell,
    validate_indexed_set,
    validate_iset_cell,
)
from .groth import (
    groth_apply,
    make_corpus,
    phi_component,
    psi_component,
    roundtrip_report,
    transpose_apply,
)
from .omon import (
    LaxOMonFunctor,
    LaxSetFunctor,
    OMonCategory,
    OMonTransformation,
    UnbiasedData,
    check_lax_omon_functor,
    check_omon_category,
    check_omon_transformation,
    extend_unbiased_to_assoc,
    forget_assoc_to_unbiased,
    omon_from_set_algebra,
    restrict_along_operad_morphism,
)
from .ogroth import (
    LaxToSet,
    OFibObject,
    check_laxtoset,
    check_ofib_object,
    make_o_corpus,
    omon_groth,
    omon_roundtrip_check,
    omon_transpose,
    restriction_report,
)
from .dsl import parse_spec_file, pretty_print
from .cli import run_command

__all__ = [
    "CheckRecord",
    "CheckReport",
    "REPORT_SCHEMA_VERSION",
    "FinMap",
    "FinCat",
    "CatFunctor",
    "NatTransform",
    "fiber",
    "induced_fiber_map",
    "block_permutation",
    "factorize_monotone_perm",
    "reindex_by_fibers",
    "flatten_by_fibers",
    "validate_category",
    "validate_functor",
    "validate_natural_transformation",
    "product_category",
    "Operad",
    "OperadMorphism",
    "Semiring",
    "boolean_semiring",
    "build_comm",
    "build_assoc",
    "build_qconv",
    "check_operad_axioms",
    "check_operad_morphism",
    "check_semiring",
    "terminal_morphism",
    "DiscreteFibration",
    "IndexedSet",
    "check_discrete_fibration",
    "lift",
    "product_dfib",
    "product_iset",
    "validate_dfib_cell",
    "validate_iset_cell",
    "validate_indexed_set",
    "groth_apply",
    "transpose_apply",
    "phi_component",
    "psi_component",
    "roundtrip_report",
    "make_corpus",
    "OMonCategory",
    "LaxOMonFunctor",
    "LaxSetFunctor",
    "OMonTransformation",
    "UnbiasedData",
    "check_omon_category",
    "check_lax_omon_functor",
    "check_omon_transformation",
    "restrict_along_operad_morphism",
    "extend_unbiased_to_assoc",
    "forget_assoc_to_unbiased",
    "omon_from_set_algebra",
    "OFibObject",
    "LaxToSet",
    "check_ofib_object",
    "check_laxtoset",
    "omon_groth",
    "omon_transpose",
    "omon_roundtrip_check",
    "make_o_corpus",
    "restriction_report",
    "parse_spec_file",
    "pretty_print",
    "run_command",
]
__version__ = "0.1.0"
