"""Predicate framework for identities whose size n is a parameter."""

from .framework import (
    Grade,
    Identity,
    IdentityReport,
    NotRepresentable,
    PredicateElement,
    RangeSpec,
    decompose,
    phi_direct,
    phi_expand,
    scalar_value,
    verify_parametric_identity,
)
from .intpoly import IntPoly, parse_intpoly
from .predicates import (
    Conjunction,
    EqConst,
    GeConst,
    NeqCoord,
    ProductFamily,
    brute_force_count,
    check_independence,
    count_satisfying,
    parse_conjunction,
    parse_family,
)
