import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qsymgb.algebra import Polynomial, parse_polynomial, rank
from qsymgb.certificate import (
    CertificateFormatError,
    GroebnerCertificate,
    dumps,
    loads,
    verify_certificate,
)
from qsymgb.groebner import (
    CAPPED,
    COMPLETED,
    DIVISION,
    Basis,
    CompletionConfig,
    all_tasks,
    buchberger,
    diamond_witness,
    enumerate_overlaps,
    interreduce,
    is_groebner,
    is_reduced,
    is_tail_reduced,
    normal_form,
    overlap_relation,
    random_normal_form,
    reduce,
    reduction_to_zero,
)
from qsymgb.relations import instances, make_relation, named_set
from qsymgb.suite import random_polynomial


def P(text, n=4):
    return parse_polynomial(text, n)


def sums(n):
    return [make_relation("rs", (i,), n) for i in range(1, n + 1)] + \
        [make_relation("cs", (i,), n) for i in range(1, n + 1)]


@pytest.fixture(scope="module")
def G4():
    return named_set("G", 4)


# -- normal form -------------------------------------------------------------

@pytest.mark.parametrize("n", [3, 4, 5])
def test_row_sum_reduces_by_the_others(n):
    G = [make_relation("cs", (i,), n) for i in range(1, n + 1)] + \
        [make_relation("rs", (i,), n) for i in range(2, n + 1)]
    r, cert = normal_form(make_relation("rs", (1,), n), G, log=True)
    assert r.is_zero()
    assert verify_certificate(cert, Basis(G, n=n))


def test_zero_and_empty_basis(G4):
    assert normal_form(Polynomial.zero(4), G4)[0].is_zero()
    f = P("u[1,1]*u[2,2] + 3")
    assert normal_form(f, Basis([], n=4))[0] == f


def test_noncommutativity_witness(G4):
    assert not reduce(P("u[2,2]*u[3,3] - u[3,3]*u[2,2]"), G4).is_zero()


def test_nothing_reducible_remains(G4):
    rng = random.Random(3)
    for _ in range(50):
        r = reduce(random_polynomial(rng, 4), G4)
        assert not any(G4.is_reducible(w) for _, w in r)


def test_tail_false_stops_at_irreducible_lead(G4):
    f = P("u[4,4]*u[4,4] + u[1,1]*u[1,2]")
    r = normal_form(f, G4, tail=False)[0]
    assert not G4.is_reducible(r.lm())


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_normal_form_idempotent_with_certificate(seed):
    G = named_set("G", 4)
    f = random_polynomial(random.Random(seed), 4)
    r, cert = normal_form(f, G, log=True)
    assert reduce(r, G) == r
    assert cert.target == f - r
    assert verify_certificate(cert, G)


def test_certificate_for_arbitrary_basis_verifies():
    # any basis, not only Groebner ones
    F = named_set("F", 5)
    rng = random.Random(11)
    for _ in range(20):
        f = random_polynomial(rng, 5)
        r, cert = normal_form(f, F, log=True)
        assert verify_certificate(cert, F)


# -- certificates ------------------------------------------------------------

def test_certificate_roundtrip_and_tamper(G4):
    f = P("u[1,1]*u[1,2] + 1/3*u[4,1]*u[2,2] - 2")
    r, cert = normal_form(f, G4, log=True)
    text = dumps(cert, len(G4))
    back, size = loads(text)
    assert size == len(G4)
    assert back == cert
    assert dumps(back, size) == text
    c, a, k, b = cert.summands[0]
    bad = GroebnerCertificate(cert.target, ((c * 2, a, k, b),) + cert.summands[1:])
    assert not verify_certificate(bad, G4)
    bad_index = GroebnerCertificate(cert.target, ((c, a, len(G4), b),) + cert.summands[1:])
    assert not verify_certificate(bad_index, G4)


def test_certificate_lm_bound_enforced():
    # u22 = u11 - (u11 - u22) reconstructs but both summands lead with u11
    G = Basis([P("u[1,1] - u[2,2]"), P("u[1,1]")], n=4)
    k_diff = list(G).index(P("u[1,1] - u[2,2]"))
    k_one = list(G).index(P("u[1,1]"))
    cert = GroebnerCertificate(P("u[2,2]"), ((1, (), k_one, ()), (-1, (), k_diff, ())))
    assert cert.reconstruct(G) == P("u[2,2]")
    assert not verify_certificate(cert, G)


@pytest.mark.parametrize("text", [
    "",
    "certificate v2\nn 4\nbasis 1\ntarget 0\nend\n",
    "certificate v1\nn 4\nbasis 1\ntarget u[1,1]\nsummand 1/1 1 0 1\n",
    "certificate v1\nn 4\nbasis 1\ntarget u[1,1]\nsummand 1/x 1 0 1\nend\n",
])
def test_certificate_format_errors(text):
    with pytest.raises(CertificateFormatError):
        loads(text)


# -- interreduction ----------------------------------------------------------

def test_interreduce_scalar_multiples():
    assert list(interreduce([P("u[1,1]"), P("2*u[1,1]")])) == [P("u[1,1]")]


def test_interreduce_drops_reducible():
    assert list(interreduce([make_relation("ip", (2, 2), 4), P("u[2,2]")])) == [P("u[2,2]")]


def test_interreduce_fpp4_matches_f4_leading_monomials():
    out = interreduce(named_set("Fpp", 4))
    F4 = named_set("F", 4)
    assert len(out) == 63
    assert sorted(out.leading_monomials()) == sorted(F4.leading_monomials())
    assert is_tail_reduced(out)
    assert all(reduce(p, out).is_zero() for p in F4)
    assert all(reduce(p, F4).is_zero() for p in out)


# -- overlaps ----------------------------------------------------------------

def test_idempotent_self_overlap():
    ip = make_relation("ip", (2, 3), 4)
    G = Basis([ip], n=4)
    tasks = [t for t in enumerate_overlaps(G, 0, 0) if not t.discharged]
    u23 = (rank(2, 3, 4),)
    assert [(t.a, t.b) for t in tasks] == [(u23, u23)]
    assert overlap_relation(tasks[0], G).is_zero()


def test_disjoint_letters_do_not_overlap():
    G = Basis([P("u[2,2]"), P("u[3,3]")], n=4)
    assert [t for t in enumerate_overlaps(G, 0, 1) if not t.discharged] == []


def test_idempotent_and_injectivity_overlap():
    n = 4
    ip, inj = make_relation("ip", (2, 2), n), make_relation("inj", (2, 2, 3), n)
    G = Basis([ip, inj], n=n)
    rels = [overlap_relation(t, G) for i in range(2) for j in range(2) if i != j
            for t in enumerate_overlaps(G, i, j) if not t.discharged]
    assert any(r == -inj or r == inj for r in rels)


@pytest.mark.parametrize("i,j,k", [(4, 3, 5), (2, 3, 4), (5, 4, 2)])
def test_injectivity_reduced_overlap_is_bg1(i, j, k):
    n = 5
    f, g = make_relation("inj", (i, 2, j), n), make_relation("rinj", (j, k), n)
    G = Basis([f, g], n=n)
    fi = list(G).index(f)
    gi = 1 - fi
    u = lambda a, b: (rank(a, b, n),)
    hits = [t for t in enumerate_overlaps(G, fi, gi) if t.a == u(k, 3) and t.b == u(i, 2)]
    assert len(hits) == 1
    assert overlap_relation(hits[0], G) == make_relation("bg1", (i, j, k), n)


def test_bg8_leading_monomial():
    n = 5
    for (k, j, i), p in instances("bg8", n, lo=2):
        assert p.lm() == (rank(2, k, n), rank(4, j, n), rank(3, i, n))


def test_overlap_relations_drop_below_overlap_word(G4):
    from qsymgb.algebra import compare_monomials
    for t in all_tasks(G4):
        r = overlap_relation(t, G4)
        if not r.is_zero():
            assert compare_monomials(r.lm(), t.word(G4)) < 0


def test_concatenation_overlaps_are_discharged_but_hold(G4):
    ok, _ = is_groebner(G4, discharge=False)
    assert ok


# -- criterion ---------------------------------------------------------------

def test_monomial_sets_are_groebner():
    n = 4
    G = [p for fam in ("inj", "wel") for _, p in instances(fam, n)]
    assert is_groebner(G)[0]
    assert is_groebner([p for _, p in instances("ip", n)])[0]


def test_g4_is_groebner(G4):
    ok, failures = is_groebner(G4)
    assert ok and failures == []


def test_parallel_check_matches_serial(G4):
    assert is_groebner(G4, jobs=2) == is_groebner(G4, jobs=1)


def test_missing_element_breaks_criterion_with_witness(G4):
    for k in (0, 40, len(G4) - 1):
        H = G4.without(k)
        ok, failures = is_groebner(H)
        assert not ok
        mono, r1, r2 = diamond_witness(H, failures[0])
        assert r1 != r2


# -- diamond property --------------------------------------------------------

def test_random_reducer_agrees_on_groebner_basis(G4):
    rng = random.Random(99)
    for _ in range(1000):
        f = random_polynomial(rng, 4)
        assert random_normal_form(f, G4, rng) == reduce(f, G4)


def test_random_reducer_disagrees_without_an_element(G4):
    H = G4.without(0)
    _, failures = is_groebner(H)
    f = Polynomial.monomial(failures[0].word(H), 4)
    rng = random.Random(5)
    assert any(random_normal_form(f, H, rng, greedy=0.5) != reduce(f, H) for _ in range(50))


def test_reduced_monomials_of_degree_two(G4):
    words = [()] + [(a,) for a in range(1, 17)] + [(a, b) for a in range(1, 17) for b in range(1, 17)]
    reduced = [w for w in words if not G4.is_reducible(w)]
    assert len(reduced) == 35
    assert sum(len(w) == 1 for w in reduced) == 9
    # normal forms of all words of degree <= 2 span exactly the reduced words
    col = {w: c for c, w in enumerate(reduced)}
    M = np.zeros((len(words), len(reduced)), dtype=np.int64)
    for r, w in enumerate(words):
        for c, v in reduce(Polynomial.monomial(w, 4), G4):
            M[r, col[v]] = int(c)
    assert np.linalg.matrix_rank(M) == len(reduced)


# -- extended relations ------------------------------------------------------

def test_extended_relations_keep_groebner(G4):
    rng = random.Random(17)
    for _ in range(3):
        g = G4[rng.randrange(len(G4))]
        a = (rng.randint(1, 16),)
        b = (rng.randint(1, 16),)
        assert is_groebner(list(G4) + [g.sandwich(a, b)])[0]
        f, h = sorted(rng.sample(list(G4), 2), key=lambda p: len(p.lm()))
        s = f + h if f.lm() != h.lm() else f
        assert is_groebner(list(G4) + [s])[0]


# -- completion --------------------------------------------------------------

def test_completion_of_row_and_column_sums():
    n = 4
    res = buchberger(sums(n), n=n)
    assert res.status == COMPLETED
    paper_style = [make_relation("cs", (i,), n) for i in range(1, n + 1)] + \
        [make_relation("rs", (i,), n) for i in range(2, n + 1)]
    assert sorted(res.basis.leading_monomials()) == sorted(Basis(paper_style).leading_monomials())
    assert is_reduced(res.basis) and is_tail_reduced(res.basis)
    assert is_groebner(paper_style)[0]


def test_completion_of_empty_set():
    res = buchberger([])
    assert res.status == COMPLETED and len(res.basis) == 0


def test_completion_caps():
    res = buchberger(named_set("Fpp", 4), CompletionConfig(max_rounds=1))
    assert res.status == CAPPED
    res = buchberger(named_set("Fpp", 4), CompletionConfig(max_degree=2))
    assert res.status == CAPPED
    with pytest.raises(ValueError):
        CompletionConfig(max_rounds=0)


def test_completion_of_fpp4():
    G4 = named_set("G", 4)
    res = buchberger(named_set("Fpp", 4))
    assert res.status == COMPLETED
    assert len(res.basis) == 78
    assert is_groebner(res.basis)[0]
    assert res.basis == interreduce(G4)
    assert sorted(res.basis.leading_monomials()) == sorted(G4.leading_monomials())


def test_search_finds_paths_the_default_reducer_misses():
    F = named_set("F", 4)
    stuck = []
    for idx, p in instances("bg3", 4, lo=2):
        if not normal_form(p, F, tail=False)[0].is_zero():
            stuck.append(p)
    assert stuck
    for p in stuck:
        cert = reduction_to_zero(p, F)
        assert cert is not None and verify_certificate(cert, F)


def test_division_tasks_cover_redundant_elements(G4):
    g = G4[5]
    H = Basis(list(G4) + [g.sandwich((1,), ())], n=4)
    assert any(t.kind == DIVISION for t in all_tasks(H))
