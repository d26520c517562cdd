"""The acceptance battery, one check per criterion.

Each check returns a ``CriterionResult``.  Checks that emit certificates
store them on the shared ``SuiteContext`` so the certificate check can
re-verify them; run on its own, that check regenerates what it needs.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

from .algebra import Polynomial, parse_polynomial
from .certificate import GroebnerCertificate, verify_certificate
from .groebner import (
    COMPLETED,
    buchberger,
    diamond_witness,
    interreduce,
    is_groebner,
    normal_form,
    random_normal_form,
    reduce,
)
from .relations import (
    BASE_FAMILIES,
    FAMILIES,
    TRANSPOSE_PAIRS,
    enumerated_fpp_size,
    expected_size,
    instances,
    labelled_set,
    lemma_reduction_suite,
    make_relation,
    named_set,
    transpose_pairing_violations,
    word_problem,
)


@dataclass
class CriterionResult:
    number: int
    title: str
    ok: bool
    details: List[str] = field(default_factory=list)
    seconds: float = 0.0
    budget: Optional[float] = None

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"{status} criterion {self.number:>2}: {self.title} ({self.seconds:.1f}s)"


@dataclass
class SuiteContext:
    extended: bool = False
    max_n: int = 12
    # (label, basis, certificate)
    certificates: list = field(default_factory=list)
    seed: int = 20240611

    def sizes(self, lo: int, hi: int) -> List[int]:
        return [n for n in range(lo, hi + 1) if n <= max(self.max_n, 4)]


def _poly_set(ps) -> frozenset:
    return frozenset(ps)


# -- 1 ---------------------------------------------------------------------

def check_cardinalities(ctx: SuiteContext) -> CriterionResult:
    res = CriterionResult(1, "cardinality formulas", True, budget=5.0)
    for n in ctx.sizes(4, 12):
        sizes = {w: len(named_set(w, n)) for w in ("Fpp", "F", "B", "G")}
        for w, got in sizes.items():
            want = expected_size(w, n)
            if got != want:
                res.ok = False
                res.details.append(f"n={n}: |{w}| = {got}, formula gives {want}")
        if sizes["Fpp"] != enumerated_fpp_size(n):
            res.ok = False
            res.details.append(f"n={n}: |Fpp| = {sizes['Fpp']} differs from 2n^3-n^2+2n")
        F, B, G = (named_set(w, n).as_set() for w in ("F", "B", "G"))
        if F & B or F | B != G:
            res.ok = False
            res.details.append(f"n={n}: G is not the disjoint union of F and B")
    return res


# -- 2 ---------------------------------------------------------------------

def check_groebner(ctx: SuiteContext, jobs: int = 1) -> CriterionResult:
    res = CriterionResult(2, "G_n is a Groebner basis", True, budget=600.0)
    for n in [4, 5] + ([6] if ctx.extended else []):
        G = named_set("G", n)
        certs: list = []
        t = time.perf_counter()
        ok, failures = is_groebner(G, jobs=jobs, certificates=certs)
        res.details.append(f"n={n}: {'ok' if ok else 'FAILED'}, {len(certs)} relations reduced "
                           f"in {time.perf_counter() - t:.1f}s")
        for task in failures[:5]:
            res.details.append(f"  failing: {task.describe(G)}")
        res.ok &= ok
        ctx.certificates.extend((f"G{n} {task.describe(G)}", G, c) for task, c in certs)
    return res


# -- 3 ---------------------------------------------------------------------

def check_completion(ctx: SuiteContext) -> CriterionResult:
    res = CriterionResult(3, "completion of Fpp_4 reproduces G_4", True, budget=600.0)
    G4 = named_set("G", 4)
    out = buchberger(named_set("Fpp", 4))
    res.details.append(f"status {out.status}, {len(out.basis)} elements after {out.rounds} rounds")
    res.ok &= out.status == COMPLETED
    same = out.basis.as_set() == G4.as_set()
    if not same:
        res.ok = False
        diff = len(out.basis.as_set() ^ G4.as_set())
        res.details.append(f"output and G_4 differ as sets ({diff} elements in the symmetric difference)")
    lms = sorted(out.basis.leading_monomials()) == sorted(G4.leading_monomials())
    res.details.append(f"leading monomials agree: {lms}")
    res.details.append(f"output equals interreduce(G_4): {interreduce(G4).as_set() == out.basis.as_set()}")
    mutual = all(reduce(p, out.basis).is_zero() for p in G4) and all(reduce(p, G4).is_zero() for p in out.basis)
    res.details.append(f"each side reduces to 0 modulo the other: {mutual}")
    return res


# -- 4 ---------------------------------------------------------------------

def check_reduced(ctx: SuiteContext) -> CriterionResult:
    res = CriterionResult(4, "G_n is reduced and monic", True, budget=10.0)
    for n in ctx.sizes(4, 6):
        G = named_set("G", n)
        for k, g in enumerate(G):
            if g.lc() != 1:
                res.ok = False
                res.details.append(f"n={n}: lc {g.lc()} in {g}")
            if G.is_reducible(g.lm(), exclude=k):
                res.ok = False
                res.details.append(f"n={n}: lm of {g} is divisible by another lm")
        res.details.append(f"n={n}: {len(G)} elements checked")
    return res


# -- 5 ---------------------------------------------------------------------

def check_lemmas(ctx: SuiteContext) -> CriterionResult:
    res = CriterionResult(5, "overlap lemma battery", True, budget=600.0)
    for n in (4, 5):
        rep = lemma_reduction_suite(n, log=True)
        res.ok &= rep.ok
        res.details.append(f"n={n}: {rep.checked} checks, {len(rep.violations)} violations, "
                           f"{len(rep.searched)} needed a search over reduction paths")
        res.details.extend(f"  {v}" for v in rep.violations[:10])
        ctx.certificates.extend((f"lemma n={n} {tag}", basis, c) for tag, basis, c in rep.certificates)
    return res


# -- 6 ---------------------------------------------------------------------

def check_rwel23(ctx: SuiteContext) -> CriterionResult:
    from .params.fixtures import fixture_text
    from .params.framework import verify_parametric_identity
    from .params.identity_file import loads

    res = CriterionResult(6, "rwel_23 lies in the ideal of F_n, two ways", True, budget=60.0)
    for n in ctx.sizes(4, 6):
        F = named_set("F", n)
        r, cert = normal_form(make_relation("rwel", (2, 3), n), F, log=True)
        res.ok &= r.is_zero()
        res.details.append(f"n={n}: NF(rwel_23, F) = {r}")
        ctx.certificates.append((f"rwel23 mod F{n}", F, cert))
    ident = loads(fixture_text("rwel23"))
    rep = verify_parametric_identity(ident, samples=range(4, 9))
    res.ok &= rep.ok
    res.details.append(f"identity file: {'PASS' if rep.ok else 'FAIL'}")
    res.details.extend("  " + ln for ln in rep.lines)
    for n in range(4, 9):
        if ident.expand("lhs", n) != make_relation("rwel", (2, 3), n):
            res.ok = False
            res.details.append(f"n={n}: the identity's left side does not expand to rwel_23")
    return res


# -- 7 ---------------------------------------------------------------------

def _lm_compatible(p: Polynomial) -> bool:
    return p.is_zero() or p.lt().transpose().lm() == p.transpose().lm()


def check_involutions(ctx: SuiteContext) -> CriterionResult:
    res = CriterionResult(7, "transposition and star", True, budget=10.0)
    for n in (4, 5):
        fpp = [p for _, _, p in labelled_set("Fpp", n)]
        if _poly_set(p.star() for p in fpp) != _poly_set(fpp):
            res.ok = False
            res.details.append(f"n={n}: Fpp is not closed under star")
        for fam in TRANSPOSE_PAIRS:
            bad = transpose_pairing_violations(fam, n)
            if bad:
                res.ok = False
                res.details.append(f"n={n}: transpose pairing fails on {', '.join(bad[:5])}")
        count = 0
        for fam in FAMILIES:
            for idx, p in instances(fam, n):
                count += 1
                if p.transpose().transpose() != p:
                    res.ok = False
                    res.details.append(f"n={n}: transpose is not an involution on {fam}{idx}")
                if fam in BASE_FAMILIES and not _lm_compatible(p):
                    res.ok = False
                    res.details.append(f"n={n}: {fam}{idx} is not lm-compatible")
        res.details.append(f"n={n}: {count} family instances checked")
    cex = parse_polynomial("u[1,2] + u[3,1]", 4)
    if _lm_compatible(cex):
        res.ok = False
        res.details.append("u[1,2] + u[3,1] unexpectedly lm-compatible")
    else:
        res.details.append("u[1,2] + u[3,1] is not lm-compatible, as expected")
    return res


# -- 8 ---------------------------------------------------------------------

def random_polynomial(rng: random.Random, n: int, max_terms: int = 6, max_degree: int = 4,
                      coeff: int = 3) -> Polynomial:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        w = tuple(rng.randint(1, n * n) for _ in range(rng.randint(0, max_degree)))
        terms[w] = rng.randint(-coeff, coeff)
    return Polynomial(n, terms)


def check_diamond(ctx: SuiteContext, samples: int = 1000) -> CriterionResult:
    res = CriterionResult(8, "randomized reduction agrees modulo G_4", True, budget=120.0)
    G = named_set("G", 4)
    rng = random.Random(ctx.seed)
    disagree = 0
    for _ in range(samples):
        f = random_polynomial(rng, 4)
        if random_normal_form(f, G, rng) != reduce(f, G):
            disagree += 1
    res.ok &= disagree == 0
    res.details.append(f"{samples} random polynomials, {disagree} disagreements")
    H = G.without(0)
    ok, failures = is_groebner(H, report=False)
    if ok:
        res.ok = False
        res.details.append(f"removing {G[0]} left a Groebner basis")
        return res
    mono, r1, r2 = diamond_witness(H, failures[0])
    res.ok &= r1 != r2
    res.details.append(f"without {G[0]}: {Polynomial.monomial(mono.lm(), 4)} reduces to {r1} and to {r2}")
    return res


# -- 9 ---------------------------------------------------------------------

def _mutate(cert: GroebnerCertificate) -> GroebnerCertificate:
    c, a, k, b = cert.summands[0]
    return GroebnerCertificate(cert.target, ((c + 1, a, k, b),) + cert.summands[1:])


def check_certificates(ctx: SuiteContext) -> CriterionResult:
    res = CriterionResult(9, "certificates re-verify", True, budget=60.0)
    if not ctx.certificates:
        scratch = SuiteContext(max_n=ctx.max_n, seed=ctx.seed)
        check_groebner(scratch)
        check_lemmas(scratch)
        check_rwel23(scratch)
        certs = scratch.certificates
    else:
        certs = ctx.certificates
    bad = [label for label, basis, c in certs if not verify_certificate(c, basis)]
    res.ok &= not bad
    res.details.append(f"{len(certs)} certificates, {len(bad)} rejected")
    res.details.extend(f"  {label}" for label in bad[:10])
    target = next(((basis, c) for _, basis, c in certs if c.summands), None)
    if target is None:
        res.ok = False
        res.details.append("no certificate with summands to mutate")
    else:
        basis, c = target
        rejected = not verify_certificate(_mutate(c), basis)
        res.ok &= rejected
        res.details.append(f"mutated certificate rejected: {rejected}")
    return res


# -- 10 --------------------------------------------------------------------

def check_predicates(ctx: SuiteContext) -> CriterionResult:
    from .params.fixtures import FIXTURES, fixture_text, quartic_family, split_family
    from .params.framework import phi_direct, phi_expand
    from .params.identity_file import loads
    from .params.predicates import brute_force_count, check_independence, count_satisfying

    res = CriterionResult(10, "predicate framework oracles", True, budget=60.0)
    full = quartic_family(distinct=False)
    ind = check_independence(full.members)
    res.ok &= ind
    res.details.append(f"{len(full)}-member family independent: {ind}")
    distinct = quartic_family(distinct=True)
    res.details.append(f"{len(distinct)}-member family with duplicates removed independent: "
                       f"{check_independence(distinct.members)}")
    small = split_family()
    ind = check_independence(small.members)
    res.ok &= ind
    res.details.append(f"{len(small)}-member degree-1 family independent: {ind}")
    conjs = set()
    elements = []
    for name in FIXTURES:
        for g in loads(fixture_text(name)).grades:
            conjs.update(g.lhs.terms)
            conjs.update(g.rhs.terms)
            if g.degree:
                elements += [g.lhs, g.rhs]
    bad = 0
    for p in sorted(conjs, key=str):
        poly, n0 = count_satisfying(p)
        for n in range(n0, n0 + 5):
            if poly(n) != brute_force_count(p, n):
                bad += 1
                res.details.append(f"  count of [{p}] at n={n}: {poly(n)} vs {brute_force_count(p, n)}")
    res.ok &= bad == 0
    res.details.append(f"{len(conjs)} fixture conjunctions counted, {bad} mismatches")
    bad = 0
    for e in elements:
        for n in range(4, 9):
            if phi_expand(e, n) != phi_direct(e, n):
                bad += 1
    res.ok &= bad == 0
    res.details.append(f"{len(elements)} fixture elements expanded at n=4..8, {bad} mismatches")
    return res


# -- 11 --------------------------------------------------------------------

def check_word_problem(ctx: SuiteContext) -> CriterionResult:
    res = CriterionResult(11, "word problem", True, budget=10.0)
    a = parse_polynomial("u[2,2]*u[3,3]", 4)
    b = parse_polynomial("u[3,3]*u[2,2]", 4)
    eq, _, _ = word_problem(a, b)
    res.ok &= not eq
    res.details.append(f"u22 u33 vs u33 u22: {'EQUIVALENT' if eq else 'DISTINCT'}")
    f = parse_polynomial("2*u[1,1]*u[2,3]*u[4,4] - u[3,2] + 5", 4)
    eq, _, _ = word_problem(f, f)
    res.ok &= eq
    res.details.append(f"f vs f: {'EQUIVALENT' if eq else 'DISTINCT'}")
    zero = Polynomial.zero(4)
    gens = [p for _, _, p in labelled_set("Fpp", 4)]
    bad = [p for p in gens if not word_problem(p, zero)[0]]
    res.ok &= not bad
    res.details.append(f"Fpp_4 generators equivalent to 0: {len(gens) - len(bad)} of {len(gens)}")
    return res


CHECKS: Dict[int, Callable[[SuiteContext], CriterionResult]] = {
    1: check_cardinalities,
    2: check_groebner,
    3: check_completion,
    4: check_reduced,
    5: check_lemmas,
    6: check_rwel23,
    7: check_involutions,
    8: check_diamond,
    9: check_certificates,
    10: check_predicates,
    11: check_word_problem,
}


def run_check(number: int, ctx: SuiteContext) -> CriterionResult:
    t = time.perf_counter()
    res = CHECKS[number](ctx)
    res.seconds = time.perf_counter() - t
    if res.budget is not None and res.seconds > res.budget:
        res.ok = False
        res.details.append(f"took {res.seconds:.1f}s, budget {res.budget:.0f}s")
    return res


def run_suite(ctx: Optional[SuiteContext] = None, only: Optional[Sequence[int]] = None) -> List[CriterionResult]:
    ctx = ctx or SuiteContext()
    return [run_check(k, ctx) for k in sorted(only or CHECKS)]
