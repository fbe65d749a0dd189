"""Finite groupoids, distributors between them, and their compositions.

The external layer works with explicit finite groupoids; the internal layer
repeats the constructions inside finite sets and finite G-sets.
"""

from .base import FINSET, Base, gset_base, parse_base
from .composition import (
    canonical_comparison,
    check_associativity,
    check_units,
    compose_distributors,
    compose_spans,
    reflect_span,
)
from .distributors import (
    Distributor,
    Span,
    check_dfib_into_product,
    check_opfib_into_product,
    check_two_sided,
    elements_span,
    hom_distributor,
    span_to_distributor,
    validate_distributor,
)
from .factorization import comprehensive_factorization, is_discrete_fibration, is_discrete_opfibration, is_final
from .groupoid import FinGroupoid, GpdFunctor, Verdict, is_eso, is_full, validate_functor, validate_groupoid
from .internal import (
    alan_cc_check,
    compose_internal_distributors,
    distributor_to_internal_groupoid,
    externalize,
    internalize,
    is_internal_final,
    support,
    validate_internal_distributor,
    validate_internal_groupoid,
    verify_last_lemma,
)

__version__ = "0.1.0"
