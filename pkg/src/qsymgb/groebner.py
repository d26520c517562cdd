"""Reduction, interreduction, overlap relations, the Buchberger criterion and completion."""

from __future__ import annotations

import heapq
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .algebra import (
    Coefficient,
    Polynomial,
    SizeMismatch,
    Word,
    _heap_key,
    _norm,
    div_coeff,
    format_polynomial,
    format_word,
    word_key,
)
from .certificate import GroebnerCertificate


class Basis:
    """Ordered, zero-free, scalar-deduplicated list of polynomials.

    Elements are ordered by leading monomial (ascending) and then by their
    printed form.  Leading coefficients are left as given.
    """

    def __init__(self, polys: Iterable[Polynomial] = (), n: Optional[int] = None):
        seen = {}
        for p in polys:
            if n is None:
                n = p.n
            elif p.n != n:
                raise SizeMismatch(f"basis over n={n} got a polynomial over n={p.n}")
            if p.is_zero():
                continue
            key = p.monic()
            if key not in seen:
                seen[key] = p
        self.n = n
        decorated = sorted(((word_key(p.lm()), format_polynomial(p)), p) for p in seen.values())
        self.elements: Tuple[Polynomial, ...] = tuple(p for _, p in decorated)
        self._lm_index: Dict[Word, List[int]] = {}
        self._prefix_index: Dict[Word, List[int]] = {}
        lengths = set()
        for k, p in enumerate(self.elements):
            w = p.lm()
            self._lm_index.setdefault(w, []).append(k)
            lengths.add(len(w))
            for L in range(1, len(w)):
                self._prefix_index.setdefault(w[:L], []).append(k)
        self._lengths = tuple(sorted(lengths))

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, k):
        return self.elements[k]

    def __contains__(self, p):
        return p in set(self.elements)

    def __eq__(self, other):
        return isinstance(other, Basis) and self.elements == other.elements

    def __hash__(self):
        return hash(self.elements)

    def __repr__(self):
        return f"Basis(n={self.n}, size={len(self)})"

    def as_set(self) -> frozenset:
        return frozenset(self.elements)

    def leading_monomials(self) -> List[Word]:
        return [p.lm() for p in self.elements]

    def find_divisor(self, w: Word, exclude: int = -1, greatest: bool = False) -> Optional[Tuple[int, Word, Word]]:
        """First element (basis order) whose lm divides ``w``, at its leftmost position.

        With ``greatest`` the last such element is taken instead.
        """
        index = self._lm_index
        lw = len(w)
        for L in (reversed(self._lengths) if greatest else self._lengths):
            if L > lw:
                break
            best = None
            for p in range(lw - L + 1):
                sub = w[p:p + L]
                ks = index.get(sub)
                if ks is None:
                    continue
                k = ks[-1] if greatest else ks[0]
                if k == exclude:
                    k = (ks[-2] if greatest else ks[1]) if len(ks) > 1 else None
                if k is None:
                    continue
                if best is None or (k > best[0] if greatest else k < best[0]):
                    best = (k, p)
            if best is not None:
                k, p = best
                return k, w[:p], w[p + L:]
        return None

    def is_reducible(self, w: Word, exclude: int = -1) -> bool:
        return self.find_divisor(w, exclude) is not None

    def without(self, k: int) -> "Basis":
        return Basis(self.elements[:k] + self.elements[k + 1:], n=self.n)


def as_basis(G, n: Optional[int] = None) -> Basis:
    return G if isinstance(G, Basis) else Basis(G, n=n)


# ---------------------------------------------------------------------------
# Algorithm 1
# ---------------------------------------------------------------------------

def normal_form(f: Polynomial, G, log: bool = False, tail: bool = True, exclude: int = -1,
                greatest: bool = False):
    """Reduce ``f`` modulo ``G``.

    Returns ``(remainder, certificate)``; the certificate is None unless
    ``log`` is set.  With ``tail=False`` reduction stops as soon as the
    leading monomial is irreducible.  The divisor is the first basis element
    whose lm divides the current word, applied at the leftmost position;
    ``greatest`` picks the last one instead, which only matters when ``G``
    is not a Groebner basis.
    """
    G = as_basis(G, f.n)
    if G.n is not None and G.n != f.n and len(G):
        raise SizeMismatch(f"polynomial over n={f.n}, basis over n={G.n}")
    work = dict(f.items())
    heap = [_heap_key(w) for w in work]
    heapq.heapify(heap)
    out = {}
    summands = []
    elements = G.elements
    while heap:
        w = heapq.heappop(heap)[1]
        c = work.pop(w, 0)
        if c == 0:
            continue
        hit = G.find_divisor(w, exclude, greatest) if elements else None
        if hit is None:
            out[w] = c
            if not tail:
                out.update(work)
                break
            continue
        k, a, b = hit
        g = elements[k]
        q = div_coeff(c, g.lc())
        if log:
            summands.append((q, a, k, b))
        it = iter(g.items())
        next(it)
        for gw, gc in it:
            nw = a + gw + b
            old = work.get(nw)
            if old is None:
                work[nw] = _norm(-q * gc)
                heapq.heappush(heap, _heap_key(nw))
            else:
                s = old - q * gc
                if s:
                    work[nw] = _norm(s)
                else:
                    del work[nw]
    r = Polynomial._raw(f.n, out)
    cert = None
    if log:
        cert = GroebnerCertificate(target=f - r, summands=tuple(summands))
    return r, cert


def divisor_choices(G: Basis, w: Word) -> List[Tuple[int, Word, Word]]:
    """Every (element, left, right) with left * lm(element) * right == w.

    Shorter leading monomials come first, then leftmost positions.
    """
    out = []
    for L in G._lengths:
        for p in range(len(w) - L + 1):
            for k in G._lm_index.get(w[p:p + L], ()):
                out.append((k, w[:p], w[p + L:]))
    return out


def reduction_to_zero(f: Polynomial, G, max_nodes: int = 20000) -> Optional[GroebnerCertificate]:
    """Search the leading-term reduction choices for a path from ``f`` to 0.

    Modulo a Groebner basis every path ends in the same place; modulo an
    arbitrary set the outcome depends on the choices, and a successful path
    is a Groebner representation of ``f``.  Returns its certificate, or None
    if no path was found within ``max_nodes`` distinct intermediate results.
    Depth-first, trying short divisors first and then, if that fails, long
    divisors first.
    """
    G = as_basis(G, f.n)
    for longest_first in (False, True):
        cert = _search_zero(f, G, max_nodes, longest_first)
        if cert is not None:
            return cert
    return None


def _search_zero(f, G, max_nodes, longest_first):
    parent = {f: None}
    stack = [f]
    visited = 0
    while stack:
        h = stack.pop()
        if h.is_zero():
            summands = []
            while parent[h] is not None:
                h, step = parent[h]
                summands.append(step)
            summands.reverse()
            return GroebnerCertificate(target=f, summands=tuple(summands))
        visited += 1
        if visited > max_nodes:
            return None
        c = h.lc()
        choices = divisor_choices(G, h.lm())
        if not longest_first:
            choices.reverse()
        for k, a, b in choices:
            g = G[k]
            q = div_coeff(c, g.lc())
            nxt = h - g.sandwich(a, b, q)
            if nxt not in parent:
                parent[nxt] = (h, (q, a, k, b))
                stack.append(nxt)
    return None


def reduce(f: Polynomial, G, tail: bool = True) -> Polynomial:
    return normal_form(f, G, tail=tail)[0]


def random_normal_form(f: Polynomial, G, rng: random.Random, greedy: float = 0.75) -> Polynomial:
    """Reduction along a random path.

    Each step picks the greatest reducible term with probability ``greedy``
    and a uniformly random reducible term otherwise, then a random divisor at
    a random position.  Fully random term choice terminates too but can take
    exponentially many steps.
    """
    G = as_basis(G, f.n)
    work = dict(f.items())
    memo: Dict[Word, bool] = {}
    pool: List[Word] = []
    where: Dict[Word, int] = {}
    heap: list = []

    def reducible(w):
        r = memo.get(w)
        if r is None:
            r = memo[w] = G.is_reducible(w)
        return r

    def add(w):
        if w not in where and reducible(w):
            where[w] = len(pool)
            pool.append(w)
            heapq.heappush(heap, _heap_key(w))

    def drop(w):
        k = where.pop(w, None)
        if k is not None:
            last = pool.pop()
            if last != w:
                pool[k] = last
                where[last] = k

    for w in work:
        add(w)
    while pool:
        if rng.random() < greedy:
            while heap[0][1] not in where:
                heapq.heappop(heap)
            w = heap[0][1]
        else:
            w = rng.choice(pool)
        c = work[w]
        k, a, b = rng.choice(divisor_choices(G, w))
        g = G[k]
        q = div_coeff(c, g.lc())
        for gw, gc in g.items():
            nw = a + gw + b
            v = work.get(nw, 0) - q * gc
            if v:
                work[nw] = _norm(v)
                add(nw)
            else:
                work.pop(nw, None)
                drop(nw)
    return Polynomial(f.n, work)


# ---------------------------------------------------------------------------
# Algorithm 2
# ---------------------------------------------------------------------------

def _tail_reducible(f: Polynomial, G: Basis, k: int) -> bool:
    return any(G.find_divisor(w, k) is not None for w in f.words())


def interreduce(F) -> Basis:
    """Replace elements by their normal form modulo the others until stable.

    Scans in ascending basis order and restarts after every replacement.
    The result is monic and zero-free.
    """
    B = as_basis(F)
    n = B.n
    while True:
        for k, f in enumerate(B.elements):
            if not _tail_reducible(f, B, k):
                continue
            r, _ = normal_form(f, B, exclude=k)
            rest = B.elements[:k] + B.elements[k + 1:]
            B = Basis(rest + ((r,) if r else ()), n=n)
            break
        else:
            break
    return Basis((p.monic() for p in B), n=n)


def is_reduced(G) -> bool:
    G = as_basis(G)
    return not any(G.find_divisor(p.lm(), k) is not None for k, p in enumerate(G))


def is_tail_reduced(G) -> bool:
    G = as_basis(G)
    return not any(_tail_reducible(p, G, k) for k, p in enumerate(G))


# ---------------------------------------------------------------------------
# overlaps
# ---------------------------------------------------------------------------

OVERLAP_LEFT = "overlap-left"
OVERLAP_RIGHT = "overlap-right"
DIVISION = "division"


@dataclass(frozen=True)
class OverlapTask:
    kind: str
    f_index: int
    g_index: int
    a: Word
    b: Word
    discharged: bool = False

    def word(self, G: Basis) -> Word:
        v, w = G[self.f_index].lm(), G[self.g_index].lm()
        if self.kind == OVERLAP_LEFT:
            return v + self.a
        if self.kind == OVERLAP_RIGHT:
            return self.a + v
        return w

    def describe(self, G: Basis) -> str:
        n = G.n
        return (f"{self.kind} f={format_polynomial(G[self.f_index])} g={format_polynomial(G[self.g_index])} "
                f"a={format_word(self.a, n)} b={format_word(self.b, n)}")


def _left_overlaps(G: Basis, i: int, j: int, concat: bool) -> List[OverlapTask]:
    # lm(f)*a == b*lm(g) with a suffix of lm(f) equal to a prefix of lm(g)
    v, w = G[i].lm(), G[j].lm()
    out = []
    for L in range(min(len(v), len(w)) - 1, 0, -1):
        if v[len(v) - L:] == w[:L]:
            out.append(OverlapTask(OVERLAP_LEFT, i, j, w[L:], v[:len(v) - L]))
    if concat:
        out.append(OverlapTask(OVERLAP_LEFT, i, j, w, v, discharged=True))
    return out


def enumerate_overlaps(G, i: int, j: int, include_concatenation: bool = True) -> List[OverlapTask]:
    """All overlap and division tasks between elements ``i`` and ``j``.

    Pure concatenations are included but flagged as discharged.
    """
    G = as_basis(G)
    tasks = _left_overlaps(G, i, j, include_concatenation)
    if i != j:
        for t in _left_overlaps(G, j, i, include_concatenation):
            tasks.append(OverlapTask(OVERLAP_RIGHT, i, j, t.b, t.a, t.discharged))
        v, w = G[i].lm(), G[j].lm()
        for p in range(len(w) - len(v) + 1):
            if w[p:p + len(v)] == v:
                tasks.append(OverlapTask(DIVISION, i, j, w[:p], w[p + len(v):]))
    return tasks


def all_tasks(G, discharge: bool = True) -> List[OverlapTask]:
    """Every overlap and division task of the basis, sorted by overlap word.

    Each overlap is listed once, as an overlap-left of an ordered pair.
    """
    G = as_basis(G)
    tasks = []
    for i, f in enumerate(G):
        v = f.lm()
        for L in range(1, len(v)):
            for j in G._prefix_index.get(v[len(v) - L:], ()):
                w = G[j].lm()
                tasks.append(OverlapTask(OVERLAP_LEFT, i, j, w[L:], v[:len(v) - L]))
        if not discharge:
            for j, g in enumerate(G):
                tasks.append(OverlapTask(OVERLAP_LEFT, i, j, g.lm(), v))
    for j, g in enumerate(G):
        w = g.lm()
        for L in G._lengths:
            for p in range(len(w) - L + 1):
                for i in G._lm_index.get(w[p:p + L], ()):
                    if i != j:
                        tasks.append(OverlapTask(DIVISION, i, j, w[:p], w[p + L:]))
    order = {OVERLAP_LEFT: 0, OVERLAP_RIGHT: 1, DIVISION: 2}
    tasks.sort(key=lambda t: (word_key(t.word(G)), order[t.kind], t.f_index, t.g_index, t.a, t.b))
    return tasks


def overlap_relation(task: OverlapTask, G) -> Polynomial:
    G = as_basis(G)
    f, g = G[task.f_index], G[task.g_index]
    e = ()
    cf, cg = div_coeff(1, f.lc()), div_coeff(1, g.lc())
    if task.kind == OVERLAP_LEFT:
        return f.sandwich(e, task.a, cf) - g.sandwich(task.b, e, cg)
    if task.kind == OVERLAP_RIGHT:
        return f.sandwich(task.a, e, cf) - g.sandwich(e, task.b, cg)
    return f.sandwich(task.a, task.b, cf) - g.scale(cg)


# ---------------------------------------------------------------------------
# Buchberger criterion
# ---------------------------------------------------------------------------

_WORKER_BASIS: Optional[Basis] = None


def _init_worker(basis):
    global _WORKER_BASIS
    _WORKER_BASIS = basis


def _check_chunk(args):
    tasks, log = args
    G = _WORKER_BASIS
    out = []
    for t in tasks:
        h = overlap_relation(t, G)
        if h.is_zero():
            out.append((t, h, None))
            continue
        r, cert = normal_form(h, G, log=log, tail=False)
        out.append((t, r, cert))
    return out


def _check_tasks(G: Basis, tasks: Sequence[OverlapTask], log: bool, jobs: int):
    if jobs <= 1 or len(tasks) < 64:
        _init_worker(G)
        return _check_chunk((tasks, log))
    size = max(1, len(tasks) // (jobs * 4))
    chunks = [(list(tasks[k:k + size]), log) for k in range(0, len(tasks), size)]
    out = []
    with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker, initargs=(G,)) as ex:
        for part in ex.map(_check_chunk, chunks):
            out.extend(part)
    return out


def default_jobs() -> int:
    return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)


def is_groebner(G, report: bool = True, jobs: int = 1, discharge: bool = True,
                certificates: Optional[list] = None):
    """Buchberger criterion: every overlap and division relation reduces to 0.

    Returns ``(ok, failures)``.  With ``report=False`` the scan stops at the
    first failing task.  If ``certificates`` is a list, a certificate for every
    nonzero relation is appended to it as ``(task, certificate)``.
    """
    G = as_basis(G)
    tasks = all_tasks(G, discharge=discharge)
    log = certificates is not None
    failures = []
    if report or jobs > 1:
        results = _check_tasks(G, tasks, log, jobs)
    else:
        results = []
        _init_worker(G)
        for t in tasks:
            res = _check_chunk(([t], log))[0]
            results.append(res)
            if not res[1].is_zero():
                break
    for t, r, cert in results:
        if cert is not None and log:
            certificates.append((t, cert))
        if not r.is_zero():
            failures.append(t)
            if not report:
                break
    return not failures, failures


def diamond_witness(G, task: OverlapTask) -> Tuple[Polynomial, Polynomial, Polynomial]:
    """For a failing task, the overlap word and two distinct reductions of it."""
    G = as_basis(G)
    f, g = G[task.f_index], G[task.g_index]
    word = task.word(G)
    mono = Polynomial.monomial(word, G.n)
    e = ()
    if task.kind == OVERLAP_LEFT:
        r1 = mono - f.sandwich(e, task.a, div_coeff(1, f.lc()))
        r2 = mono - g.sandwich(task.b, e, div_coeff(1, g.lc()))
    elif task.kind == OVERLAP_RIGHT:
        r1 = mono - f.sandwich(task.a, e, div_coeff(1, f.lc()))
        r2 = mono - g.sandwich(e, task.b, div_coeff(1, g.lc()))
    else:
        r1 = mono - f.sandwich(task.a, task.b, div_coeff(1, f.lc()))
        r2 = mono - g.scale(div_coeff(1, g.lc()))
    return mono, reduce(r1, G), reduce(r2, G)


# ---------------------------------------------------------------------------
# Algorithm 3
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CompletionConfig:
    max_degree: Optional[int] = None
    max_rounds: Optional[int] = None
    discharge_concatenation_overlaps: bool = True

    def __post_init__(self):
        for name in ("max_degree", "max_rounds"):
            v = getattr(self, name)
            if v is not None and v <= 0:
                raise ValueError(f"{name} must be positive")


COMPLETED = "completed"
CAPPED = "capped"


@dataclass
class CompletionResult:
    basis: Basis
    status: str
    rounds: int = 0
    added: int = 0
    log: List[str] = field(default_factory=list)

    def __iter__(self):
        return iter((self.basis, self.status))


def _task_signature(t: OverlapTask, G: Basis):
    return (t.kind, G[t.f_index], G[t.g_index], t.a, t.b)


def buchberger(F, cfg: CompletionConfig = CompletionConfig(), n: Optional[int] = None) -> CompletionResult:
    """Complete ``F`` to its monic tail-reduced Groebner basis.

    Tasks are processed in ascending order of their overlap word, one overlap
    degree per round; new elements are interreduced into the basis after each
    round.  The final basis is re-checked with the criterion.
    """
    G = interreduce(as_basis(F, n))
    if G.n is None:
        return CompletionResult(G, COMPLETED)
    done = set()
    rounds = 0
    added = 0
    capped = False
    log = []
    while True:
        pending = [t for t in all_tasks(G, cfg.discharge_concatenation_overlaps)
                   if _task_signature(t, G) not in done]
        if not pending:
            ok, failures = is_groebner(G, report=False, discharge=cfg.discharge_concatenation_overlaps)
            if ok or capped:
                break
            done.clear()
            continue
        if cfg.max_rounds is not None and rounds >= cfg.max_rounds:
            capped = True
            break
        rounds += 1
        deg = len(pending[0].word(G))
        new = []
        for t in pending:
            if len(t.word(G)) != deg:
                break
            done.add(_task_signature(t, G))
            h = overlap_relation(t, G)
            if h.is_zero():
                continue
            r = reduce(h, G)
            if r.is_zero():
                continue
            if cfg.max_degree is not None and len(r.lm()) > cfg.max_degree:
                capped = True
                continue
            new.append(r)
        log.append(f"round {rounds}: degree {deg}, {len(new)} new, basis {len(G)}")
        if new:
            added += len(new)
            G = interreduce(list(G) + new)
    return CompletionResult(G, CAPPED if capped else COMPLETED, rounds, added, log)
