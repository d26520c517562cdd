"""Formal Z[n]-combinations of index predicates and their expansion into polynomials."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..algebra import Polynomial, rank
from .intpoly import IntPoly
from .predicates import (
    Conjunction,
    EqConst,
    GeConst,
    NeqCoord,
    ProductFamily,
    check_independence,
    count_satisfying,
    grid,
    solve_rational,
)


class PredicateElement:
    """Finite sum of ``coefficient * conjunction`` with coefficients in Z[n]."""

    __slots__ = ("arity", "terms")

    def __init__(self, arity: int, terms: Union[Dict[Conjunction, IntPoly], Iterable[Tuple[IntPoly, Conjunction]], None] = None):
        self.arity = arity
        acc: Dict[Conjunction, IntPoly] = {}
        if terms is not None:
            items = terms.items() if isinstance(terms, dict) else ((c, k) for k, c in terms)
            for conj, coeff in items:
                if conj.arity != arity:
                    raise ValueError(f"conjunction {conj} has arity {conj.arity}, expected {arity}")
                acc[conj] = acc.get(conj, IntPoly()) + IntPoly.lift(coeff)
        self.terms = {c: v for c, v in acc.items() if v}

    def __add__(self, other: "PredicateElement") -> "PredicateElement":
        self._same(other)
        acc = dict(self.terms)
        for c, v in other.terms.items():
            acc[c] = acc.get(c, IntPoly()) + v
        return PredicateElement(self.arity, acc)

    def __neg__(self):
        return PredicateElement(self.arity, {c: -v for c, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, lam) -> "PredicateElement":
        lam = IntPoly.lift(lam)
        return PredicateElement(self.arity, {c: v * lam for c, v in self.terms.items()})

    def _same(self, other):
        if self.arity != other.arity:
            raise ValueError(f"arity mismatch: {self.arity} vs {other.arity}")

    def __eq__(self, other):
        return isinstance(other, PredicateElement) and self.arity == other.arity and self.terms == other.terms

    def __len__(self):
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def sorted_terms(self) -> List[Tuple[Conjunction, IntPoly]]:
        return sorted(self.terms.items(), key=lambda kv: str(kv[0]))

    def canonical(self, family: ProductFamily) -> "PredicateElement":
        return PredicateElement(self.arity, [(v, family.canonical(c)) for c, v in self.terms.items()])

    def __repr__(self):
        body = " + ".join(f"({v})*[{c}]" for c, v in self.sorted_terms())
        return f"PredicateElement({self.arity}, {body or '0'})"


def phi_expand(e: PredicateElement, n: int) -> Polynomial:
    """Sum of c(n) * u[i1,i2] * u[i3,i4] * ... over the satisfying tuples."""
    if e.arity % 2:
        raise ValueError(f"odd arity {e.arity} has no polynomial expansion")
    acc: Dict[tuple, int] = {}
    g = grid(n, e.arity)
    if e.arity:
        ranks = (g[:, 0::2] - 1) * n + g[:, 1::2]
    else:
        ranks = np.zeros((1, 0), dtype=np.int64)
    for conj, coeff in e.terms.items():
        c = coeff(n)
        if c == 0:
            continue
        for row in ranks[conj.mask(g)]:
            w = tuple(int(r) for r in row)
            acc[w] = acc.get(w, 0) + c
    return Polynomial(n, acc)


def phi_direct(e: PredicateElement, n: int) -> Polynomial:
    """Reference expansion by plain loops over [n]^k."""
    acc: Dict[tuple, int] = {}
    for x in product(range(1, n + 1), repeat=e.arity):
        for conj, coeff in e.terms.items():
            if conj.holds(x):
                w = tuple(rank(x[2 * t], x[2 * t + 1], n) for t in range(e.arity // 2))
                acc[w] = acc.get(w, 0) + coeff(n)
    return Polynomial(n, acc)


def scalar_value(e: PredicateElement) -> Tuple[IntPoly, int]:
    """Sum of c(n) times the number of satisfying tuples, with its validity bound."""
    total = IntPoly()
    n0 = 1
    for conj, coeff in e.terms.items():
        cnt, m = count_satisfying(conj)
        total = total + coeff * cnt
        n0 = max(n0, m)
    return total, n0


# ---------------------------------------------------------------------------
# ranges
# ---------------------------------------------------------------------------

Bound = Union[int, str]


@dataclass(frozen=True)
class RangeSpec:
    """Summation range: an interval per coordinate plus coordinate links.

    Interval ends are integers or the symbol ``"n"``; ``neq`` and ``eq`` hold
    pairs of coordinates that must differ or coincide.
    """

    intervals: Tuple[Tuple[Bound, Bound], ...]
    neq: Tuple[Tuple[int, int], ...] = ()
    eq: Tuple[Tuple[int, int], ...] = ()

    @property
    def arity(self) -> int:
        return len(self.intervals)

    def min_size(self) -> int:
        """Smallest n with every interval non-empty."""
        n0 = 1
        for lo, hi in self.intervals:
            if lo != "n":
                n0 = max(n0, lo)
            if hi != "n" and lo != "n":
                if hi < lo:
                    raise ValueError(f"empty interval [{lo},{hi}]")
        return n0

    def mask(self, g: np.ndarray, n: int) -> np.ndarray:
        m = np.ones(len(g), dtype=bool)
        for t, (lo, hi) in enumerate(self.intervals):
            lo_v = n if lo == "n" else lo
            hi_v = n if hi == "n" else hi
            m &= (g[:, t] >= lo_v) & (g[:, t] <= hi_v)
        for a, b in self.neq:
            m &= g[:, a - 1] != g[:, b - 1]
        for a, b in self.eq:
            m &= g[:, a - 1] == g[:, b - 1]
        return m

    def holds(self, x, n: int) -> bool:
        for v, (lo, hi) in zip(x, self.intervals):
            if not (n if lo == "n" else lo) <= v <= (n if hi == "n" else hi):
                return False
        return all(x[a - 1] != x[b - 1] for a, b in self.neq) and all(x[a - 1] == x[b - 1] for a, b in self.eq)

    def coords_linked(self):
        return list(self.neq) + list(self.eq)


def R(*intervals, neq=(), eq=()) -> RangeSpec:
    return RangeSpec(tuple(intervals), tuple(neq), tuple(eq))


class NotRepresentable(ValueError):
    pass


def _restrict(spec: RangeSpec, block: Sequence[int]) -> RangeSpec:
    pos = {c: k + 1 for k, c in enumerate(block)}
    return RangeSpec(
        tuple(spec.intervals[c - 1] for c in block),
        tuple((pos[a], pos[b]) for a, b in spec.neq if a in pos),
        tuple((pos[a], pos[b]) for a, b in spec.eq if a in pos),
    )


def _relabel(conj: Conjunction, block: Sequence[int], arity: int) -> Conjunction:
    out = []
    for a in conj.atoms:
        if isinstance(a, NeqCoord):
            out.append(NeqCoord(block[a.coord - 1], block[a.other - 1]))
        else:
            out.append(type(a)(block[a.coord - 1], a.value))
    return Conjunction(arity, out)


def _local(conj: Conjunction, block: Sequence[int]) -> Conjunction:
    pos = {c: k + 1 for k, c in enumerate(block)}
    out = []
    for a in conj.atoms:
        if isinstance(a, NeqCoord):
            out.append(NeqCoord(pos[a.coord], pos[a.other]))
        else:
            out.append(type(a)(pos[a.coord], a.value))
    return Conjunction(len(block), out)


def decompose(spec: RangeSpec, family: ProductFamily, N: Optional[int] = None) -> PredicateElement:
    """Integer combination of family members whose indicator is the range's indicator.

    The family is split into coordinate blocks (coordinates tied by links);
    each block is solved exactly and the blocks are multiplied back together.
    The result is checked pointwise on [N]^k.
    """
    if spec.arity != family.arity:
        raise ValueError("range and family have different arity")
    k = family.arity
    N = N or max(family.test_size(), max((b for iv in spec.intervals for b in iv if b != "n"), default=1) + k + 2)
    blocks = family.blocks()
    for a, b in spec.coords_linked():
        if not any(a in blk and b in blk for blk in blocks):
            raise NotRepresentable(f"range links i{a} and i{b} across independent coordinate blocks")
    factors = []
    for blk in blocks:
        alts = [family.alternatives[c - 1] for c in blk]
        local_members = []
        seen = {}
        g = grid(N, len(blk))
        for combo in product(*alts):
            conj = _local(Conjunction(k, [a for c in combo for a in c.atoms]), blk)
            key = conj.mask(g).tobytes()
            if family.distinct and key in seen:
                continue
            seen[key] = conj
            local_members.append(conj)
        A = np.array([c.mask(g) for c in local_members], dtype=np.int64)
        target = _restrict(spec, blk).mask(g, N).astype(np.int64)
        both = np.unique(np.vstack([A, target[None, :]]), axis=1)
        x = solve_rational([list(map(int, r)) for r in both[:-1]], [int(v) for v in both[-1]])
        if x is None:
            raise NotRepresentable(f"block {blk} of the range is not a combination of the family")
        if any(v.denominator != 1 for v in x):
            raise NotRepresentable(f"block {blk} needs non-integer coefficients")
        factors.append([(int(v), _relabel(c, blk, k)) for v, c in zip(x, local_members) if v != 0])
    terms: Dict[Conjunction, IntPoly] = {}
    for combo in product(*factors):
        coeff = 1
        atoms = []
        for v, c in combo:
            coeff *= v
            atoms.extend(c.atoms)
        conj = Conjunction(k, atoms)
        terms[conj] = terms.get(conj, IntPoly()) + coeff
    e = PredicateElement(k, terms)
    g = grid(N, k)
    total = np.zeros(len(g), dtype=np.int64)
    for conj, v in e.terms.items():
        total += v(0) * conj.mask(g)
    if not np.array_equal(total, spec.mask(g, N).astype(np.int64)):
        raise NotRepresentable("block solutions do not reassemble into the range")
    return e


# ---------------------------------------------------------------------------
# identities
# ---------------------------------------------------------------------------

@dataclass
class Grade:
    degree: int
    arity: int
    family: Optional[ProductFamily]
    lhs: PredicateElement
    rhs: PredicateElement
    # optional labelled pieces of each side, kept for writing the file
    lhs_parts: List[Tuple[str, PredicateElement]] = field(default_factory=list)
    rhs_parts: List[Tuple[str, PredicateElement]] = field(default_factory=list)


@dataclass
class Identity:
    name: str
    grades: List[Grade] = field(default_factory=list)

    def grade(self, d: int) -> Grade:
        for g in self.grades:
            if g.degree == d:
                return g
        raise KeyError(d)

    def expand(self, side: str, n: int) -> Polynomial:
        """Polynomial obtained by expanding one side at size ``n`` over all grades."""
        acc = Polynomial.zero(n)
        for g in self.grades:
            e = getattr(g, side)
            if g.degree == 0:
                val, _ = scalar_value(e)
                acc = acc + Polynomial.constant(val(n), n)
            else:
                acc = acc + phi_expand(e, n)
        return acc


@dataclass
class IdentityReport:
    name: str
    ok: bool = True
    lines: List[str] = field(default_factory=list)
    offending: List[Tuple[int, Conjunction, IntPoly]] = field(default_factory=list)

    def fail(self, msg: str):
        self.ok = False
        self.lines.append("FAIL " + msg)

    def note(self, msg: str):
        self.lines.append("ok   " + msg)

    def __str__(self):
        head = f"{self.name}: {'PASS' if self.ok else 'FAIL'}"
        return "\n".join([head] + ["  " + ln for ln in self.lines])


def verify_parametric_identity(identity: Identity, samples: Sequence[int] = range(4, 10)) -> IdentityReport:
    """Compare both sides grade by grade in Z[n] and cross-check expansions at sampled n."""
    rep = IdentityReport(identity.name)
    for g in identity.grades:
        if g.lhs.arity != g.rhs.arity or g.lhs.arity != g.arity:
            raise ValueError(f"grade {g.degree}: arity mismatch")
        if g.degree == 0:
            lv, l0 = scalar_value(g.lhs)
            rv, r0 = scalar_value(g.rhs)
            n0 = max(l0, r0)
            if lv == rv:
                rep.note(f"grade 0: both sides equal {lv} for n >= {n0}")
            else:
                rep.fail(f"grade 0: {lv} != {rv}")
            for n in samples:
                if n >= n0 and lv(n) != rv(n):
                    rep.fail(f"grade 0 at n={n}: {lv(n)} != {rv(n)}")
            continue
        if g.arity != 2 * g.degree:
            raise ValueError(f"grade {g.degree} needs arity {2 * g.degree}, got {g.arity}")
        fam = g.family
        if fam is None:
            rep.fail(f"grade {g.degree}: no predicate family given")
            continue
        if not check_independence(fam.members):
            rep.fail(f"grade {g.degree}: family of {len(fam)} conjunctions is not independent")
            continue
        try:
            lhs = g.lhs.canonical(fam)
            rhs = g.rhs.canonical(fam)
        except KeyError as exc:
            rep.fail(f"grade {g.degree}: {exc.args[0]}")
            continue
        diff = lhs - rhs
        if diff.is_zero():
            rep.note(f"grade {g.degree}: coefficient maps agree on {len(lhs)} conjunctions")
        else:
            for conj, v in diff.sorted_terms():
                rep.offending.append((g.degree, conj, v))
                rep.fail(f"grade {g.degree}: [{conj}] differs by {v}")
        for n in samples:
            if phi_expand(g.lhs, n) != phi_expand(g.rhs, n):
                rep.fail(f"grade {g.degree}: expansions differ at n={n}")
        rep.note(f"grade {g.degree}: expansions compared at n={','.join(map(str, samples))}")
    return rep
