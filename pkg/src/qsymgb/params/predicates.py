"""Index predicates on tuples in [n]^k and the operations that only need the predicates."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .intpoly import IntPoly


@dataclass(frozen=True, order=True)
class EqConst:
    coord: int
    value: int

    def holds(self, x) -> bool:
        return x[self.coord - 1] == self.value

    def __str__(self):
        return f"i{self.coord}={self.value}"


@dataclass(frozen=True, order=True)
class GeConst:
    coord: int
    value: int

    def holds(self, x) -> bool:
        return x[self.coord - 1] >= self.value

    def __str__(self):
        return f"i{self.coord}>={self.value}"


@dataclass(frozen=True, order=True)
class NeqCoord:
    coord: int
    other: int

    def holds(self, x) -> bool:
        return x[self.coord - 1] != x[self.other - 1]

    def __str__(self):
        return f"i{self.coord}!=i{self.other}"


Atom = Union[EqConst, GeConst, NeqCoord]
_KIND = {EqConst: 0, GeConst: 1, NeqCoord: 2}


def _atom_key(a: Atom):
    return (a.coord, _KIND[type(a)], a.value if not isinstance(a, NeqCoord) else a.other)


def _check_atom(a: Atom, arity: int):
    coords = (a.coord, a.other) if isinstance(a, NeqCoord) else (a.coord,)
    for c in coords:
        if not 1 <= c <= arity:
            raise ValueError(f"coordinate i{c} outside arity {arity}")
    if isinstance(a, NeqCoord):
        if a.coord == a.other:
            raise ValueError(f"{a} links a coordinate to itself")
    elif a.value < 1:
        raise ValueError(f"{a} uses a constant below 1")


class Conjunction:
    """A conjunction of atoms over k index coordinates."""

    __slots__ = ("arity", "atoms", "_key")

    def __init__(self, arity: int, atoms: Iterable[Atom] = ()):
        if arity < 0:
            raise ValueError("arity must be non-negative")
        canon = set()
        for a in atoms:
            _check_atom(a, arity)
            if isinstance(a, NeqCoord) and a.coord < a.other:
                a = NeqCoord(a.other, a.coord)
            canon.add(a)
        self.arity = arity
        self.atoms: Tuple[Atom, ...] = tuple(sorted(canon, key=_atom_key))
        self._key = (arity, self.atoms)

    def __eq__(self, other):
        return isinstance(other, Conjunction) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __and__(self, other: "Conjunction") -> "Conjunction":
        return Conjunction(max(self.arity, other.arity), self.atoms + other.atoms)

    def holds(self, x: Sequence[int]) -> bool:
        return all(a.holds(x) for a in self.atoms)

    def max_constant(self) -> int:
        return max((a.value for a in self.atoms if not isinstance(a, NeqCoord)), default=1)

    def coords(self) -> FrozenSet[int]:
        out = set()
        for a in self.atoms:
            out.add(a.coord)
            if isinstance(a, NeqCoord):
                out.add(a.other)
        return frozenset(out)

    def mask(self, grid: np.ndarray) -> np.ndarray:
        """Boolean indicator over the rows of ``grid`` (shape points x arity)."""
        m = np.ones(len(grid), dtype=bool)
        for a in self.atoms:
            col = grid[:, a.coord - 1]
            if isinstance(a, EqConst):
                m &= col == a.value
            elif isinstance(a, GeConst):
                m &= col >= a.value
            else:
                m &= col != grid[:, a.other - 1]
        return m

    def __str__(self):
        return " & ".join(str(a) for a in self.atoms) if self.atoms else "true"

    def __repr__(self):
        return f"Conjunction({self.arity}, {str(self)!r})"


_ATOM = re.compile(r"^i(\d+)\s*(>=|!=|=)\s*(i?)(\d+)$")


def parse_atom(text: str) -> Atom:
    m = _ATOM.match(text.strip())
    if m is None:
        raise ValueError(f"unsupported atom {text.strip()!r}; expected i<t>=<c>, i<t>>=<c> or i<t>!=i<s>")
    t, op, is_coord, v = int(m.group(1)), m.group(2), m.group(3), int(m.group(4))
    if op == "!=":
        if not is_coord:
            raise ValueError(f"unsupported atom {text.strip()!r}; != only links two coordinates")
        return NeqCoord(t, v)
    if is_coord:
        raise ValueError(f"unsupported atom {text.strip()!r}; coordinates can only be compared with !=")
    return EqConst(t, v) if op == "=" else GeConst(t, v)


def parse_conjunction(text: str, arity: int) -> Conjunction:
    text = text.strip()
    if text in ("", "true"):
        return Conjunction(arity)
    return Conjunction(arity, [parse_atom(p) for p in text.split("&")])


def grid(N: int, arity: int) -> np.ndarray:
    """All tuples of [N]^arity as rows, lexicographic."""
    if arity == 0:
        return np.zeros((1, 0), dtype=np.int64)
    axes = np.meshgrid(*[np.arange(1, N + 1)] * arity, indexing="ij")
    return np.stack([a.ravel() for a in axes], axis=1).astype(np.int64)


def indicator_matrix(family: Sequence[Conjunction], N: int, arity: int) -> np.ndarray:
    g = grid(N, arity)
    return np.array([c.mask(g) for c in family], dtype=np.int64).reshape(len(family), len(g))


def default_test_size(family: Iterable[Conjunction], arity: int) -> int:
    return max((c.max_constant() for c in family), default=1) + arity + 2


# ---------------------------------------------------------------------------
# independence
# ---------------------------------------------------------------------------

_PRIME = 2147483629


def _rank_mod_p(M: np.ndarray, p: int = _PRIME) -> int:
    A = (M % p).astype(np.int64)
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = np.nonzero(A[r:, c])[0]
        if len(piv) == 0:
            continue
        k = r + piv[0]
        if k != r:
            A[[r, k]] = A[[k, r]]
        inv = pow(int(A[r, c]), p - 2, p)
        A[r] = (A[r] * inv) % p
        others = np.nonzero(A[:, c])[0]
        for o in others:
            if o != r:
                f = int(A[o, c])
                # two 31-bit operands: split to keep products inside int64
                A[o] = (A[o] - ((A[r] * (f >> 16)) % p * 65536 + A[r] * (f & 0xFFFF)) % p) % p
        r += 1
    return r


def rational_rank(M) -> int:
    """Exact rank over the rationals by fraction-free elimination."""
    A = [[int(x) for x in row] for row in np.asarray(M)]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    r = 0
    prev = 1
    for c in range(cols):
        piv = next((k for k in range(r, rows) if A[k][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        for k in range(r + 1, rows):
            for j in range(c + 1, cols):
                A[k][j] = (A[r][c] * A[k][j] - A[k][c] * A[r][j]) // prev
            A[k][c] = 0
        prev = A[r][c]
        r += 1
        if r == rows:
            break
    return r


def check_independence(family: Sequence[Conjunction], N: Optional[int] = None) -> bool:
    """Rational linear independence of the indicator vectors over [N]^k."""
    family = list(family)
    if not family:
        return True
    arity = family[0].arity
    if any(c.arity != arity for c in family):
        raise ValueError("conjunctions of different arity")
    need = default_test_size(family, arity)
    if N is None:
        N = need
    elif N < need:
        raise ValueError(f"test size N={N} too small; need at least {need}")
    if len(set(family)) != len(family):
        return False
    M = indicator_matrix(family, N, arity)
    if not M.any(axis=1).all():
        return False
    M = np.unique(M, axis=1)
    if len(np.unique(M, axis=0)) != len(M) or M.shape[1] < M.shape[0]:
        return False
    if _rank_mod_p(M) == len(M):
        return True
    return rational_rank(M) == len(M)


# ---------------------------------------------------------------------------
# counting
# ---------------------------------------------------------------------------

def _class_count(eqs: set, ge: int) -> IntPoly:
    if len(eqs) > 1:
        return IntPoly()
    if eqs:
        (c,) = eqs
        return IntPoly.const(1 if c >= ge else 0)
    return IntPoly((1 - ge, 1))


def _count_merged(arity: int, eq_atoms, ge_atoms, merges) -> IntPoly:
    parent = list(range(arity + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in merges:
        parent[find(a)] = find(b)
    eqs: Dict[int, set] = {}
    ge: Dict[int, int] = {}
    for a in eq_atoms:
        eqs.setdefault(find(a.coord), set()).add(a.value)
    for a in ge_atoms:
        r = find(a.coord)
        ge[r] = max(ge.get(r, 1), a.value)
    total = IntPoly.const(1)
    for root in {find(c) for c in range(1, arity + 1)}:
        total = total * _class_count(eqs.get(root, set()), ge.get(root, 1))
    return total


def count_satisfying(p: Conjunction) -> Tuple[IntPoly, int]:
    """Number of tuples in [n]^k satisfying ``p`` as a polynomial in n.

    Inclusion-exclusion over the coordinate inequalities; returns the
    polynomial together with the smallest n from which it is exact.
    """
    eq_atoms = [a for a in p.atoms if isinstance(a, EqConst)]
    ge_atoms = [a for a in p.atoms if isinstance(a, GeConst)]
    links = [(a.coord, a.other) for a in p.atoms if isinstance(a, NeqCoord)]
    total = IntPoly()
    for r in range(len(links) + 1):
        for subset in combinations(links, r):
            term = _count_merged(p.arity, eq_atoms, ge_atoms, subset)
            total = total + (term if r % 2 == 0 else -term)
    n0 = max([1] + [a.value for a in eq_atoms] + [a.value - 1 for a in ge_atoms])
    return total, n0


def brute_force_count(p: Conjunction, n: int) -> int:
    return sum(1 for x in product(range(1, n + 1), repeat=p.arity) if p.holds(x))


# ---------------------------------------------------------------------------
# product families
# ---------------------------------------------------------------------------

class ProductFamily:
    """Conjunctions formed by choosing one alternative for every coordinate.

    ``alternatives[t]`` lists the choices for coordinate t+1; each choice is a
    conjunction that may also mention other coordinates (``i3>=4 & i3!=i1``).
    With ``distinct`` the members with identical indicator are collapsed,
    keeping the first in product order.
    """

    def __init__(self, arity: int, alternatives: Sequence[Sequence[Conjunction]], distinct: bool = False):
        if len(alternatives) != arity:
            raise ValueError(f"need {arity} coordinate alternative lists, got {len(alternatives)}")
        self.arity = arity
        self.alternatives = [list(alts) for alts in alternatives]
        self.distinct = distinct
        raw = [Conjunction(arity, [a for c in combo for a in c.atoms]) for combo in product(*self.alternatives)]
        if distinct:
            raw = _dedupe(raw, arity)
        self.members: List[Conjunction] = raw
        self._index = {c: k for k, c in enumerate(raw)}

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def test_size(self) -> int:
        return default_test_size(self.members, self.arity)

    def blocks(self) -> List[List[int]]:
        """Coordinates grouped by the links appearing in the alternatives."""
        parent = list(range(self.arity + 1))

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x

        for alts in self.alternatives:
            for c in alts:
                for a in c.atoms:
                    if isinstance(a, NeqCoord):
                        parent[find(a.coord)] = find(a.other)
        groups: Dict[int, List[int]] = {}
        for t in range(1, self.arity + 1):
            groups.setdefault(find(t), []).append(t)
        return sorted(groups.values())

    def canonical(self, conj: Conjunction, N: Optional[int] = None) -> Conjunction:
        """The family member with the same indicator as ``conj``."""
        if conj in self._index:
            return conj
        N = N or max(self.test_size(), default_test_size([conj], self.arity))
        g = grid(N, self.arity)
        target = conj.mask(g)
        for c in self.members:
            if np.array_equal(c.mask(g), target):
                return c
        raise KeyError(f"{conj} is not a member of the family")

    def spec(self) -> str:
        body = " ; ".join(" | ".join(str(c) for c in alts) for alts in self.alternatives)
        return ("distinct: " if self.distinct else "") + body


def _dedupe(members: List[Conjunction], arity: int) -> List[Conjunction]:
    N = default_test_size(members, arity)
    g = grid(N, arity)
    seen = set()
    out = []
    for c in members:
        key = c.mask(g).tobytes()
        if key not in seen:
            seen.add(key)
            out.append(c)
    return out


def parse_family(text: str, arity: int) -> ProductFamily:
    """``[distinct:] alt | alt ; alt | alt ; ...`` with one ``;`` group per coordinate."""
    text = text.strip()
    distinct = False
    if text.startswith("distinct:"):
        distinct = True
        text = text[len("distinct:"):]
    groups = [g for g in text.split(";")] if text else []
    alts = [[parse_conjunction(a, arity) for a in g.split("|")] for g in groups]
    return ProductFamily(arity, alts, distinct)


def solve_rational(A: List[List[Fraction]], t: List[Fraction]) -> Optional[List[Fraction]]:
    """Solve x A = t exactly; free variables are set to 0.  None if inconsistent."""
    m = len(A)
    cols = len(t)
    # work on the transpose: A^T x = t
    rows = [[Fraction(A[i][j]) for i in range(m)] + [Fraction(t[j])] for j in range(cols)]
    pivots = []
    r = 0
    for c in range(m):
        piv = next((k for k in range(r, len(rows)) if rows[k][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for k in range(len(rows)):
            if k != r and rows[k][c] != 0:
                f = rows[k][c]
                rows[k] = [a - f * b for a, b in zip(rows[k], rows[r])]
        pivots.append(c)
        r += 1
    for k in range(r, len(rows)):
        if rows[k][m] != 0:
            return None
    x = [Fraction(0)] * m
    for k, c in enumerate(pivots):
        x[c] = rows[k][m]
    return x
