"""The shipped identities, built from summation ranges.

Each summand of an identity is written down as signed summation ranges per
polynomial degree; ranges are decomposed over the predicate family of their
grade and added up.  ``summand_polynomial`` rebuilds the same summand from
the relation constructors so the ranges can be checked against it.
"""

from __future__ import annotations

from importlib import resources
from typing import Dict, List, Tuple

from ..algebra import Polynomial
from .framework import Grade, Identity, PredicateElement, R, RangeSpec, decompose
from .intpoly import IntPoly
from .predicates import ProductFamily, parse_family

n_ = "n"
N = IntPoly.n()


def _coord_alts(t: int, link: int = 0) -> str:
    alts = [f"i{t}=1", f"i{t}=2", f"i{t}=3", f"i{t}>=4"]
    if link:
        alts.append(f"i{t}>=4 & i{t}!=i{link}")
    return " | ".join(alts)


def quartic_family(distinct: bool = True) -> ProductFamily:
    """Four coordinates; the last two may additionally differ from the first two."""
    spec = " ; ".join([_coord_alts(1), _coord_alts(2), _coord_alts(3, 1), _coord_alts(4, 2)])
    return parse_family(("distinct: " if distinct else "") + spec, 4)


def quadratic_family() -> ProductFamily:
    return parse_family(" ; ".join([_coord_alts(1), _coord_alts(2)]), 2)


def linear_family() -> ProductFamily:
    return parse_family(_coord_alts(1), 1)


def split_family() -> ProductFamily:
    """The four-element family {i1=1, i1>=2} x {i2=1, i2>=2}."""
    return parse_family("i1=1 | i1>=2 ; i2=1 | i2>=2", 2)


Contribution = Dict[int, List[Tuple[IntPoly, RangeSpec]]]


def _c(v) -> IntPoly:
    return IntPoly.lift(v)


def rwel23_lhs() -> Contribution:
    return {
        2: [(_c(1), R((2, 2), (2, 2), (3, n_), (3, 3))),
            (_c(-1), R((3, n_), (2, 2), (1, 1), (3, 3)))],
        1: [(_c(1), R((1, 1), (3, 3))), (_c(-1), R((2, 2), (2, 2)))],
    }


def rwel23_summands() -> List[Tuple[str, Contribution]]:
    """Signed summands of the right-hand side, degree by degree."""
    nm2, nm3 = N - 2, N - 3
    not3 = [(2, 2), (4, n_)]
    s = []
    s.append(("sum rinjcs_i", {
        2: [(_c(1), R((2, n_), (2, 2), (2, n_), (3, n_), neq=[(3, 1)])),
            (_c(-1), R((2, n_), (3, n_), (2, n_), (1, 1), neq=[(3, 1)]))],
        1: [(nm2, R((2, n_), (1, 1))), (-nm2, R((2, n_), (2, 2)))],
    }))
    s.append(("-sum rwelcs_i", {
        2: [(_c(-1), R((2, 2), (2, n_), (3, n_), x, neq=[(4, 2)])) for x in not3]
         + [(_c(1), R((3, n_), (2, n_), (1, 1), x, neq=[(4, 2)])) for x in not3],
        1: [(-nm2, R((1, 1), x)) for x in not3]
         + [(nm3, R((2, 2), x)) for x in not3]
         + [(nm2, R((2, 2), (3, 3)))],
    }))
    s.append(("-sum rcs_i2", {
        2: [(_c(-1), R((3, n_), (2, 2), (1, n_), (3, n_))),
            (_c(1), R((3, n_), (2, 2), (1, n_), (3, n_), eq=[(3, 1)]))],
        1: [(nm2, R((3, n_), (2, 2)))],
    }))
    s.append(("sum rrs_2j", {
        2: [(_c(1), R((2, 2), (3, n_), (3, n_), (1, n_))),
            (_c(-1), R((2, 2), (3, n_), (3, n_), (1, n_), eq=[(4, 2)]))],
        1: [(-nm2, R((2, 2), (3, n_)))],
    }))
    s.append(("sum (rrs_ij - rcs_ij)", {
        2: [(_c(1), R((3, n_), (3, n_), (2, n_), (1, n_), neq=[(3, 1)])),
            (_c(-1), R((3, n_), (3, n_), (2, n_), (1, n_), neq=[(3, 1)], eq=[(4, 2)])),
            (_c(-1), R((3, n_), (3, n_), (1, n_), (2, n_), neq=[(4, 2)])),
            (_c(1), R((3, n_), (3, n_), (1, n_), (2, n_), neq=[(4, 2)], eq=[(3, 1)]))],
    }))
    s.append(("-sum rwel_i3", {
        2: [(_c(-1), R((2, 2), (4, n_), (3, n_), (3, 3))),
            (_c(1), R((3, n_), (4, n_), (1, 1), (3, 3)))],
        1: [(-nm3, R((1, 1), (3, 3))), (_c(1), R((2, 2), (4, n_)))],
    }))
    s.append(("-(n-2) sum rs_i", {
        1: [(-nm2, R((2, n_), (1, n_)))],
        0: [(nm2, R((2, n_)))],
    }))
    s.append(("(n-2) sum cs_i", {
        1: [(nm2, R((1, n_), (2, n_)))],
        0: [(-nm2, R((2, n_)))],
    }))
    return s


def summand_polynomial(name: str, n: int) -> Polynomial:
    """The same summand built directly from the relation constructors."""
    from ..relations import make_relation as M

    z = Polynomial.zero(n)
    rng = range(2, n + 1)
    if name == "sum rinjcs_i":
        return sum((M("rinjcs", (i,), n) for i in rng), z)
    if name == "-sum rwelcs_i":
        return -sum((M("rwelcs", (i,), n) for i in rng if i != 3), z)
    if name == "-sum rcs_i2":
        return -sum((M("rcs", (i, 2), n) for i in range(3, n + 1)), z)
    if name == "sum rrs_2j":
        return sum((M("rrs", (2, j), n) for j in range(3, n + 1)), z)
    if name == "sum (rrs_ij - rcs_ij)":
        return sum((M("rrs", (i, j), n) - M("rcs", (i, j), n)
                    for i in range(3, n + 1) for j in range(3, n + 1)), z)
    if name == "-sum rwel_i3":
        return -sum((M("rwel", (i, 3), n) for i in range(4, n + 1)), z)
    if name == "-(n-2) sum rs_i":
        return sum((M("rs", (i,), n) for i in rng), z).scale(-(n - 2))
    if name == "(n-2) sum cs_i":
        return sum((M("cs", (i,), n) for i in rng), z).scale(n - 2)
    raise KeyError(name)


def _families() -> Dict[int, ProductFamily]:
    return {0: linear_family(), 1: quadratic_family(), 2: quartic_family()}


def element_of(contrib: Contribution, degree: int, family: ProductFamily) -> PredicateElement:
    acc = PredicateElement(family.arity)
    for coeff, spec in contrib.get(degree, []):
        acc = acc + decompose(spec, family).scale(coeff)
    return acc


def build_rwel23_identity() -> Identity:
    fams = _families()
    lhs = rwel23_lhs()
    summands = rwel23_summands()
    ident = Identity("rwel23 as a combination of reduced generators")
    for d in (2, 1, 0):
        fam = fams[d]
        left = element_of(lhs, d, fam)
        parts = [(name, element_of(contrib, d, fam)) for name, contrib in summands]
        parts = [(name, e) for name, e in parts if not e.is_zero()]
        right = PredicateElement(fam.arity)
        for _, e in parts:
            right = right + e
        ident.grades.append(Grade(d, fam.arity, fam if d else None, left, right,
                                  [("rwel_23", left)], parts))
    return ident


def build_rowcol_identity() -> Identity:
    """rs_1 = sum_j cs_j - sum_{i>=2} rs_i over the four-element family."""
    fam1 = split_family()
    fam0 = parse_family("i1=1 | i1>=2", 1)
    lhs = {1: [(_c(1), R((1, 1), (1, n_)))], 0: [(_c(-1), R((1, 1)))]}
    rhs = {1: [(_c(1), R((1, n_), (1, n_))), (_c(-1), R((2, n_), (1, n_)))],
           0: [(_c(-1), R((1, n_))), (_c(1), R((2, n_)))]}
    ident = Identity("rs_1 from column sums and the other row sums")
    for d, fam in ((1, fam1), (0, fam0)):
        left = element_of(lhs, d, fam)
        cols = element_of({d: rhs[d][:1]}, d, fam)
        rows = element_of({d: rhs[d][1:]}, d, fam)
        ident.grades.append(Grade(d, fam.arity, fam if d else None, left, cols + rows,
                                  [("rs_1", left)], [("sum cs_j", cols), ("-sum rs_i, i>=2", rows)]))
    return ident


FIXTURES = {"rwel23": "rwel23.identity", "rowcol": "rowcol.identity"}


def fixture_text(name: str) -> str:
    return resources.files("qsymgb").joinpath("data", FIXTURES[name]).read_text(encoding="utf-8")


def fixture_path(name: str):
    return resources.files("qsymgb").joinpath("data", FIXTURES[name])
