from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qsymgb.algebra import (
    ParseError,
    Polynomial,
    SizeMismatch,
    compare_monomials,
    find_division,
    format_polynomial,
    parse_polynomial,
    rank,
    unrank,
)
from qsymgb.relations import make_relation

N = 4


def P(text, n=N):
    return parse_polynomial(text, n)


def w(*pairs, n=N):
    return tuple(rank(i, j, n) for i, j in pairs)


# -- order -------------------------------------------------------------------

def test_variable_order_row_major():
    assert compare_monomials(w((1, 1)), w((1, 2))) == 1
    assert compare_monomials(w((1, 2)), w((2, 1))) == 1
    assert compare_monomials(w((2, 1)), w((2, 2))) == 1


def test_degree_then_lex():
    assert compare_monomials(w((1, 2), (2, 1)), w((2, 1), (1, 2))) == 1
    assert compare_monomials(w((2, 1), (1, 2)), w((1, 2))) == 1
    assert compare_monomials((), ()) == 0


def test_rank_roundtrip():
    for r in range(1, N * N + 1):
        assert rank(*unrank(r, N), N) == r


words = st.lists(st.integers(1, N * N), max_size=6).map(tuple)


@given(words, words, words)
def test_order_is_total_and_transitive(a, b, c):
    ab, ba = compare_monomials(a, b), compare_monomials(b, a)
    assert ab == -ba
    assert (ab == 0) == (a == b)
    if ab >= 0 and compare_monomials(b, c) >= 0:
        assert compare_monomials(a, c) >= 0


@given(words, words, words, words)
def test_order_is_multiplicative(a, b, x, y):
    if compare_monomials(a, b) < 0:
        assert compare_monomials(x + a + y, x + b + y) < 0


# -- arithmetic --------------------------------------------------------------

def test_product_is_concatenation():
    p = Polynomial.var(1, 2, N) * Polynomial.var(2, 1, N)
    assert list(p) == [(1, w((1, 2), (2, 1)))]


def test_additive_inverse():
    assert (P("u[1,1] - 1") + P("1 - u[1,1]")).is_zero()


def test_idempotent_relation_by_arithmetic():
    u22 = Polynomial.var(2, 2, N)
    assert u22 * u22 - u22 == make_relation("ip", (2, 2), N)


def test_size_mismatch():
    with pytest.raises(SizeMismatch):
        Polynomial.var(1, 1, 4) + Polynomial.var(1, 1, 5)


def test_rational_coefficients_normalise():
    p = P("1/2*u[1,1] + 1/2*u[1,1]")
    assert p.lc() == 1 and isinstance(p.lc(), int)
    assert P("3/6*u[1,1]").lc() == Fraction(1, 2)


coeffs = st.integers(-3, 3)
polys = st.dictionaries(st.lists(st.integers(1, N * N), max_size=3).map(tuple), coeffs, max_size=5).map(
    lambda d: Polynomial(N, d))


@settings(max_examples=60)
@given(polys, polys)
def test_leading_term_of_product(p, q):
    if p.is_zero() or q.is_zero():
        assert (p * q).is_zero()
        return
    pq = p * q
    assert pq.lm() == p.lm() + q.lm()
    assert pq.lc() == p.lc() * q.lc()


@settings(max_examples=60)
@given(polys, polys, polys)
def test_ring_laws(p, q, r):
    assert (p + q) * r == p * r + q * r
    assert p * (q + r) == p * q + p * r
    assert (p * q) * r == p * (q * r)


# -- division ----------------------------------------------------------------

def test_find_division():
    assert find_division(w((2, 2)), w((1, 1), (2, 2), (3, 3))) == (w((1, 1)), w((3, 3)))
    assert find_division(w((1, 2)), w((2, 1), (2, 1))) is None
    assert find_division(w((2, 2)), w((2, 2), (2, 2))) == ((), w((2, 2)))


# -- involutions -------------------------------------------------------------

def test_transpose_examples():
    for j in range(1, N + 1):
        assert make_relation("rs", (j,), N).transpose() == make_relation("cs", (j,), N)
    for i, j, k in [(1, 2, 3), (2, 1, 4), (3, 4, 1)]:
        assert make_relation("wel", (i, j, k), N).transpose() == make_relation("inj", (j, i, k), N)


def test_star_examples():
    for i, j, k in [(1, 2, 3), (2, 1, 4), (4, 3, 1)]:
        assert make_relation("inj", (i, j, k), N).star() == make_relation("inj", (k, j, i), N)
        assert make_relation("wel", (i, j, k), N).star() == make_relation("wel", (i, k, j), N)
    for i in range(1, N + 1):
        assert make_relation("rs", (i,), N).star() == make_relation("rs", (i,), N)


@settings(max_examples=60)
@given(polys, polys)
def test_involution_laws(p, q):
    assert p.transpose().transpose() == p
    assert p.star().star() == p
    assert (p * q).transpose() == p.transpose() * q.transpose()
    assert (p * q).star() == q.star() * p.star()


# -- text --------------------------------------------------------------------

def test_parse_example():
    p = P("u[1,2]*u[2,1] - 3/2*u[1,1]")
    assert len(p) == 2
    assert p.lm() == w((1, 2), (2, 1))
    assert p.coefficient(w((1, 1))) == Fraction(-3, 2)


def test_parse_unit():
    assert P("1") == Polynomial.constant(1, N)
    assert list(P("1")) == [(1, ())]


def test_parse_out_of_range_index():
    with pytest.raises(ParseError) as exc:
        P("u[5,1]")
    assert exc.value.position == 0


def test_parse_errors_report_position():
    with pytest.raises(ParseError) as exc:
        P("u[1,1] + * u[2,2]")
    assert exc.value.position == 9
    with pytest.raises(ParseError):
        P("u[1,1] 3")
    with pytest.raises(ParseError):
        P("1/0")
    with pytest.raises(ParseError):
        P("")


def test_canonical_printing():
    assert format_polynomial(P("-u[1,1] + 2*u[2,2]*u[1,1] - 1")) == "2*u[2,2]*u[1,1] - u[1,1] - 1"
    assert format_polynomial(Polynomial.zero(N)) == "0"
    assert format_polynomial(P("-1/2")) == "-1/2"


coeff_q = st.fractions(min_value=-5, max_value=5, max_denominator=6)
qpolys = st.dictionaries(st.lists(st.integers(1, N * N), max_size=3).map(tuple), coeff_q, max_size=5).map(
    lambda d: Polynomial(N, d))


@given(qpolys)
def test_print_parse_roundtrip(p):
    text = format_polynomial(p)
    assert parse_polynomial(text, N) == p
    assert format_polynomial(parse_polynomial(text, N)) == text


def test_polynomials_pickle():
    import pickle
    p = P("u[1,2]*u[2,1] - 3/2*u[1,1] + 4")
    assert pickle.loads(pickle.dumps(p)) == p
