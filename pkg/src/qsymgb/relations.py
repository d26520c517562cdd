"""Relation families of the magic unitary, the generating sets and the closed-form basis G_n."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Callable, Dict, List, Optional, Tuple

from .algebra import Polynomial, check_size, rank
from .groebner import Basis, normal_form, reduce, reduction_to_zero


class InvalidIndices(ValueError):
    pass


class SizeTooSmall(ValueError):
    pass


def _u(i, j, n):
    return Polynomial.var(i, j, n)


def _one(n):
    return Polynomial.constant(1, n)


def _need(cond: bool, family: str, idx):
    if not cond:
        raise InvalidIndices(f"invalid indices {tuple(idx)} for {family}")


def _in_range(idx, lo, n):
    return all(lo <= x <= n for x in idx)


def _rs(n, i):
    _need(_in_range((i,), 1, n), "rs", (i,))
    return Polynomial(n, {**{(rank(i, a, n),): 1 for a in range(1, n + 1)}, (): -1})


def _cs(n, i):
    _need(_in_range((i,), 1, n), "cs", (i,))
    return Polynomial(n, {**{(rank(a, i, n),): 1 for a in range(1, n + 1)}, (): -1})


def _ip(n, i, j):
    _need(_in_range((i, j), 1, n), "ip", (i, j))
    r = rank(i, j, n)
    return Polynomial(n, {(r, r): 1, (r,): -1})


def _inj(n, j, i, k):
    # u_{ji} u_{ki}: two different rows hit the same column
    _need(_in_range((j, i, k), 1, n) and j != k, "inj", (j, i, k))
    return Polynomial(n, {(rank(j, i, n), rank(k, i, n)): 1})


def _wel(n, i, j, k):
    # u_{ij} u_{ik}: one row hits two different columns
    _need(_in_range((i, j, k), 1, n) and j != k, "wel", (i, j, k))
    return Polynomial(n, {(rank(i, j, n), rank(i, k, n)): 1})


def _reduced_ok(n, j, k):
    return n >= 4 and 2 <= j <= n and 2 <= k <= n and j != k


def _rinj(n, j, k):
    _need(_reduced_ok(n, j, k), "rinj", (j, k))
    t = {}
    for a in range(3, n + 1):
        t[(rank(j, 2, n), rank(k, a, n))] = 1
        t[(rank(j, a, n), rank(k, 1, n))] = -1
    t[(rank(k, 1, n),)] = 1
    t[(rank(j, 2, n),)] = -1
    return Polynomial(n, t)


def _rwel(n, j, k):
    _need(_reduced_ok(n, j, k), "rwel", (j, k))
    return _rinj(n, j, k).transpose()


def _guard(n, family, idx, *conds):
    _need(n >= 4 and _in_range(idx, 2, n) and all(conds), family, idx)


def _bg1(n, k, j, i):
    _guard(n, "bg1", (k, j, i), k != j, j != i)
    return _inj(n, k, 2, j) * _u(i, 3, n) - _u(k, 2, n) * _rinj(n, j, i)


def _bg2(n, k, j, i):
    _guard(n, "bg2", (k, j, i), j != i, k != j)
    return _u(k, 2, n) * _inj(n, j, 3, i) - _rinj(n, k, j) * _u(i, 3, n)


def _bg3(n, k, j):
    _guard(n, "bg3", (k, j), k != j)
    return _ip(n, 2, k) * _u(3, j, n) - _u(2, k, n) * _rwel(n, k, j)


def _bg4(n, k, j):
    _guard(n, "bg4", (k, j), k != j)
    return _u(2, k, n) * _ip(n, 3, j) - _rwel(n, k, j) * _u(3, j, n)


def _bg5(n, k, j):
    _guard(n, "bg5", (k, j), k != j)
    return _ip(n, k, 2) * _u(j, 3, n) - _u(k, 2, n) * _rinj(n, k, j)


def _bg6(n, k, j):
    _guard(n, "bg6", (k, j), k != j)
    return _u(k, 2, n) * _ip(n, j, 3) - _rinj(n, k, j) * _u(j, 3, n)


def _bg7(n, k, j, i):
    _guard(n, "bg7", (k, j, i), k != j, j != i)
    return _wel(n, 2, k, j) * _u(3, i, n) - _u(2, k, n) * _rwel(n, j, i)


def _bg8(n, k, j, i):
    _guard(n, "bg8", (k, j, i), j != i, k != j)
    return _u(2, k, n) * _wel(n, 3, j, i) - _rwel(n, k, j) * _u(3, i, n)


def _bg9(n, k, j):
    _guard(n, "bg9", (k, j), k != 2, j != 3)
    return _rinj(n, k, 2) * _u(3, j, n) - _u(k, 2, n) * _rwel(n, 3, j)


def _bg10(n, k, j):
    _guard(n, "bg10", (k, j), k != 2, j != 3)
    return _u(2, k, n) * _rinj(n, 3, j) - _rwel(n, k, 2) * _u(j, 3, n)


def _bg11(n, k, j, i):
    _guard(n, "bg11", (k, j, i), k != 2, j != i)
    return _inj(n, k, j, 2) * _u(3, i, n) - _u(k, j, n) * _rwel(n, j, i)


def _bg12(n, k, j, i):
    _guard(n, "bg12", (k, j, i), i != 3, k != j)
    return _u(2, k, n) * _inj(n, 3, j, i) - _rwel(n, k, j) * _u(i, j, n)


def _bg13(n, k, j, i):
    _guard(n, "bg13", (k, j, i), j != 2, k != i)
    return _wel(n, k, j, 2) * _u(i, 3, n) - _u(k, j, n) * _rinj(n, k, i)


def _bg14(n, k, j, i):
    _guard(n, "bg14", (k, j, i), i != 3, k != j)
    return _u(k, 2, n) * _wel(n, j, 3, i) - _rinj(n, k, j) * _u(j, i, n)


def _rrs(n, i, j):
    _need(n >= 2 and _in_range((i, j), 2, n), "rrs", (i, j))
    acc = Polynomial.zero(n)
    for k in range(2, n + 1):
        if k != i:
            acc = acc + _u(i, j, n) * _rs(n, k) - _inj(n, i, j, k)
    return acc


def _rcs(n, i, j):
    _need(n >= 2 and _in_range((i, j), 2, n), "rcs", (i, j))
    acc = Polynomial.zero(n)
    for k in range(2, n + 1):
        if k != j:
            acc = acc + _u(i, j, n) * _cs(n, k) - _wel(n, i, j, k)
    return acc


def _rinjcs(n, i):
    _need(n >= 4 and _in_range((i,), 2, n), "rinjcs", (i,))
    acc = Polynomial.zero(n)
    for a in range(2, n + 1):
        if a != i:
            acc = acc + _rinj(n, a, i)
    return acc


def _rwelcs(n, i):
    _need(n >= 4 and _in_range((i,), 2, n) and i != 3, "rwelcs", (i,))
    acc = Polynomial.zero(n)
    for a in range(2, n + 1):
        if a != i:
            acc = acc + _rwel(n, a, i)
    return acc


@dataclass(frozen=True)
class Family:
    name: str
    arity: int
    build: Callable


FAMILIES: Dict[str, Family] = {}
for _name, _arity, _fn in [
    ("rs", 1, _rs), ("cs", 1, _cs), ("ip", 2, _ip), ("inj", 3, _inj), ("wel", 3, _wel),
    ("rinj", 2, _rinj), ("rwel", 2, _rwel),
    ("bg1", 3, _bg1), ("bg2", 3, _bg2), ("bg3", 2, _bg3), ("bg4", 2, _bg4), ("bg5", 2, _bg5),
    ("bg6", 2, _bg6), ("bg7", 3, _bg7), ("bg8", 3, _bg8), ("bg9", 2, _bg9), ("bg10", 2, _bg10),
    ("bg11", 3, _bg11), ("bg12", 3, _bg12), ("bg13", 3, _bg13), ("bg14", 3, _bg14),
    ("rrs", 2, _rrs), ("rcs", 2, _rcs), ("rinjcs", 1, _rinjcs), ("rwelcs", 1, _rwelcs),
]:
    FAMILIES[_name] = Family(_name, _arity, _fn)

BASE_FAMILIES = ("rs", "cs", "ip", "inj", "wel", "rinj", "rwel")
BG_FAMILIES = tuple(f"bg{s}" for s in range(1, 15))


def make_relation(family: str, indices, n: int) -> Polynomial:
    check_size(n)
    fam = FAMILIES.get(family)
    if fam is None:
        raise KeyError(f"unknown relation family {family!r}")
    idx = tuple(int(x) for x in indices)
    if len(idx) != fam.arity:
        raise InvalidIndices(f"{family} takes {fam.arity} indices, got {len(idx)}")
    return fam.build(n, *idx)


def is_valid(family: str, indices, n: int) -> bool:
    try:
        make_relation(family, indices, n)
    except InvalidIndices:
        return False
    return True


def instances(family: str, n: int, lo: int = 1) -> List[Tuple[Tuple[int, ...], Polynomial]]:
    """Every valid index tuple of a family with entries in [lo, n], lexicographic."""
    fam = FAMILIES[family]
    out = []
    for idx in product(range(lo, n + 1), repeat=fam.arity):
        try:
            out.append((idx, fam.build(n, *idx)))
        except InvalidIndices:
            pass
    return out


# family -> (image family, index permutation, sign) under transposition
TRANSPOSE_PAIRS = {
    "rs": ("cs", (0,), 1), "cs": ("rs", (0,), 1), "ip": ("ip", (1, 0), 1),
    "inj": ("wel", (1, 0, 2), 1), "wel": ("inj", (1, 0, 2), 1),
    "rinj": ("rwel", (0, 1), 1), "rwel": ("rinj", (0, 1), 1),
    "bg1": ("bg7", (0, 1, 2), 1), "bg7": ("bg1", (0, 1, 2), 1),
    "bg2": ("bg8", (0, 1, 2), 1), "bg8": ("bg2", (0, 1, 2), 1),
    "bg3": ("bg5", (0, 1), 1), "bg5": ("bg3", (0, 1), 1),
    "bg4": ("bg6", (0, 1), 1), "bg6": ("bg4", (0, 1), 1),
    "bg9": ("bg10", (0, 1), -1), "bg10": ("bg9", (0, 1), -1),
    "bg11": ("bg13", (1, 0, 2), 1), "bg13": ("bg11", (1, 0, 2), 1),
    "bg12": ("bg14", (0, 1, 2), 1), "bg14": ("bg12", (0, 1, 2), 1),
}


def transpose_pairing_violations(family: str, n: int) -> List[str]:
    """Instances whose transpose is not the paired family member."""
    image, perm, sign = TRANSPOSE_PAIRS[family]
    bad = []
    for idx, p in instances(family, n):
        q = tuple(idx[t] for t in perm)
        if not is_valid(image, q, n) or p.transpose() != make_relation(image, q, n).scale(sign):
            bad.append(f"{family}{idx}")
    return bad


# ---------------------------------------------------------------------------
# named sets
# ---------------------------------------------------------------------------

NAMED_SETS = ("Fpp", "Fp", "F", "B", "G")

Labelled = List[Tuple[str, Tuple[int, ...], Polynomial]]


@lru_cache(maxsize=16)
def _labelled_fpp(n: int) -> Labelled:
    out = []
    for fam in ("rs", "cs", "ip", "inj", "wel"):
        out += [(fam, idx, p) for idx, p in instances(fam, n)]
    return tuple(out)


@lru_cache(maxsize=16)
def _labelled_fp(n: int) -> Labelled:
    out = [("cs", (1,), _cs(n, 1))]
    for fam in BASE_FAMILIES:
        out += [(fam, idx, p) for idx, p in instances(fam, n, lo=2)]
    return tuple(out)


def _b_member(s: int, k: int, j: int, i: int) -> bool:
    if (k, j) == (2, 3) or (j, i) == (2, 3):
        return False
    return (s, k, j, i) != (8, 2, 4, 3)


@lru_cache(maxsize=16)
def _labelled_b(n: int) -> Labelled:
    out = []
    for s in (2, 8):
        for idx, p in instances(f"bg{s}", n, lo=2):
            if _b_member(s, *idx):
                out.append((f"bg{s}", idx, p.monic()))
    return tuple(out)


def labelled_set(which: str, n: int) -> Labelled:
    """``(family, indices, polynomial)`` triples making up a named set."""
    check_size(n)
    if which not in NAMED_SETS:
        raise KeyError(f"unknown set {which!r}; expected one of {', '.join(NAMED_SETS)}")
    if n < 4:
        raise SizeTooSmall(f"named sets need n >= 4, got {n}")
    if which == "Fpp":
        return list(_labelled_fpp(n))
    if which == "Fp":
        return list(_labelled_fp(n))
    f = [t for t in _labelled_fp(n) if not (t[0] == "rwel" and t[1] == (2, 3))]
    if which == "F":
        return f
    if which == "B":
        return list(_labelled_b(n))
    return f + list(_labelled_b(n))


@lru_cache(maxsize=32)
def named_set(which: str, n: int) -> Basis:
    return Basis((p for _, _, p in labelled_set(which, n)), n=n)


def expected_size(which: str, n: int) -> int:
    """Closed-form cardinalities as stated for the generating sets."""
    return {
        "Fpp": 2 * n * (n * n + 1),
        "Fp": 2 * n ** 3 - 5 * n ** 2 + 4 * n,
        "F": 2 * n ** 3 - 5 * n ** 2 + 4 * n - 1,
        "B": 2 * n * (n - 2) * (n - 3) - 1,
        "G": 4 * n ** 3 - 15 * n ** 2 + 16 * n - 2,
    }[which]


def enumerated_fpp_size(n: int) -> int:
    """Distinct members of the defining generators: 2n + n^2 + 2 n^2 (n-1)."""
    return 2 * n ** 3 - n ** 2 + 2 * n


# ---------------------------------------------------------------------------
# checks built on the constructors
# ---------------------------------------------------------------------------

def reduced_orthogonal_identity_check(j: int, k: int, n: int) -> bool:
    """rinj_{jk} = inj_{j1k} - rs_j u_{k1} + u_{j2} rs_k - inj_{j2k}, and its transpose."""
    if not _reduced_ok(n, j, k):
        raise InvalidIndices(f"invalid indices {(j, k)} for rinj at n={n}")
    rhs = _inj(n, j, 1, k) - _rs(n, j) * _u(k, 1, n) + _u(j, 2, n) * _rs(n, k) - _inj(n, j, 2, k)
    ok = _rinj(n, j, k) == rhs
    # transposed: rwel_{jk} = wel_{1jk} - cs_j u_{1k} + u_{2j} cs_k - wel_{2jk}
    rhs_t = _wel(n, 1, j, k) - _cs(n, j) * _u(1, k, n) + _u(2, j, n) * _cs(n, k) - _wel(n, 2, j, k)
    return ok and rhs.transpose() == rhs_t == _rwel(n, j, k)


@dataclass
class LemmaReport:
    n: int
    checked: int = 0
    violations: List[str] = None
    certificates: list = None
    searched: List[str] = None

    def __post_init__(self):
        self.violations = self.violations or []
        self.searched = self.searched or []
        self.certificates = self.certificates if self.certificates is not None else []

    @property
    def ok(self) -> bool:
        return not self.violations


ZERO_MOD_F = ("bg1", "bg3", "bg4", "bg5", "bg6", "bg7", "bg9", "bg10", "bg11", "bg12", "bg13", "bg14")


def deferred_instances(n: int) -> List[Tuple[str, Tuple[int, int, int], Polynomial]]:
    """bg2/bg8 index tuples left out of B_n."""
    out = []
    for s in (2, 8):
        for idx, p in instances(f"bg{s}", n, lo=2):
            if not _b_member(s, *idx):
                out.append((f"bg{s}", idx, p))
    return out


def lemma_reduction_suite(n: int, log: bool = False) -> LemmaReport:
    """Run the overlap lemmas for size ``n``.

    * bg1, bg3-bg7, bg9-bg14 reduce to 0 modulo F_n.  F_n is not a Groebner
      basis, so when the default reducer gets stuck a search over reduction
      choices is run; those instances are listed in ``searched``;
    * the leading monomial of every B_n member is irreducible modulo F_n;
    * the bg2/bg8 tuples left out of B_n reduce to 0 modulo G_n;
    * every overlap among B_n members reduces to 0 modulo G_n.
    """
    from .groebner import all_tasks, overlap_relation

    if n < 4:
        raise SizeTooSmall(f"lemma suite needs n >= 4, got {n}")
    F = named_set("F", n)
    G = named_set("G", n)
    rep = LemmaReport(n)

    def zero(tag, p, basis):
        r, cert = normal_form(p, basis, log=True, tail=False)
        rep.checked += 1
        if not r.is_zero():
            # not a Groebner basis: look for another reduction path
            cert = reduction_to_zero(p, basis)
            if cert is None:
                rep.violations.append(f"{tag} does not reduce to 0")
                return
            rep.searched.append(tag)
        if log:
            rep.certificates.append((tag, basis, cert))

    for fam in ZERO_MOD_F:
        for idx, p in instances(fam, n, lo=2):
            zero(f"{fam}{idx} mod F", p, F)
    for fam, idx, p in _labelled_b(n):
        rep.checked += 1
        if F.is_reducible(p.lm()):
            rep.violations.append(f"{fam}{idx} has lm reducible modulo F")
        elif normal_form(p, F, tail=False)[0] != p:
            rep.violations.append(f"{fam}{idx} changed under reduction modulo F")
    for fam, idx, p in deferred_instances(n):
        zero(f"{fam}{idx} mod G", p, G)
    bset = {p.monic() for _, _, p in _labelled_b(n)}
    for t in all_tasks(G):
        if G[t.f_index] in bset and G[t.g_index] in bset:
            zero(f"bg2/bg8 {t.describe(G)}", overlap_relation(t, G), G)
    return rep


# ---------------------------------------------------------------------------
# word problem
# ---------------------------------------------------------------------------

class Unsupported(ValueError):
    pass


def word_problem(f: Polynomial, g: Polynomial, n: Optional[int] = None):
    """Decide f == g in the quotient by I_n; returns (equal, NF(f), NF(g))."""
    if f.n != g.n or (n is not None and f.n != n):
        from .algebra import SizeMismatch
        raise SizeMismatch("operands over different sizes")
    n = f.n
    if n < 4:
        raise Unsupported("the closed-form basis is only available for n >= 4")
    G = named_set("G", n)
    nf_f = reduce(f, G)
    nf_g = reduce(g, G)
    return nf_f == nf_g, nf_f, nf_g
