"""Free associative algebra on the n*n symbols u[i,j] over the rationals.

Monomials are words, stored as tuples of variable ranks.  The rank of
u[i,j] is ``(i-1)*n + j``; a smaller rank is a *greater* variable, so
u[1,1] > u[1,2] > ... > u[1,n] > u[2,1] > ... > u[n,n].  Words are compared
by length first and then position by position on ranks.

Polynomials are immutable and canonical: no zero coefficients, terms sorted
in descending monomial order.  Coefficients are ``int`` whenever integral and
``Fraction`` otherwise, so equality and hashing agree across both.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Optional, Tuple, Union

Word = Tuple[int, ...]
Coefficient = Union[int, Fraction]

EMPTY: Word = ()


class SizeMismatch(ValueError):
    pass


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


def check_size(n: int) -> int:
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValueError(f"size must be a positive integer, got {n!r}")
    return n


def rank(i: int, j: int, n: int) -> int:
    if not (1 <= i <= n and 1 <= j <= n):
        raise IndexError(f"u[{i},{j}] is out of range for n={n}")
    return (i - 1) * n + j


def unrank(r: int, n: int) -> Tuple[int, int]:
    q, rem = divmod(r - 1, n)
    return q + 1, rem + 1


def word_key(w: Word):
    """Sort key increasing with the monomial order."""
    return (len(w), tuple(-x for x in w))


def _heap_key(w: Word):
    # smallest heap key == greatest monomial
    return (-len(w), w)


def compare_monomials(a: Word, b: Word) -> int:
    """Return -1, 0 or 1 as ``a`` is less than, equal to or greater than ``b``."""
    if len(a) != len(b):
        return 1 if len(a) > len(b) else -1
    if a == b:
        return 0
    # lexicographically smaller rank tuple is the greater word
    return 1 if a < b else -1


def find_division(v: Word, w: Word) -> Optional[Tuple[Word, Word]]:
    """Leftmost factorisation ``w == a + v + b`` or None."""
    lv = len(v)
    for p in range(len(w) - lv + 1):
        if w[p:p + lv] == v:
            return w[:p], w[p + lv:]
    return None


def _norm(c) -> Coefficient:
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def div_coeff(a: Coefficient, b: Coefficient) -> Coefficient:
    if b == 1:
        return a
    if b == -1:
        return -a
    return _norm(Fraction(a) / b)


class Polynomial:
    """An element of Q<u[i,j] | 1 <= i,j <= n>."""

    __slots__ = ("n", "_terms", "_hash")

    def __init__(self, n: int, terms: Union[Mapping[Word, Coefficient], Iterable[Tuple[Coefficient, Word]], None] = None):
        self.n = check_size(n)
        acc: dict = {}
        if terms is not None:
            items = terms.items() if isinstance(terms, Mapping) else ((w, c) for c, w in terms)
            nn = n * n
            for w, c in items:
                w = tuple(w)
                for x in w:
                    if not (1 <= x <= nn):
                        raise IndexError(f"variable rank {x} out of range for n={n}")
                if not isinstance(c, (int, Fraction)):
                    c = Fraction(c)
                acc[w] = acc.get(w, 0) + c
        self._terms = {w: _norm(acc[w]) for w in sorted(acc, key=_heap_key) if acc[w] != 0}
        self._hash = None

    @classmethod
    def _raw(cls, n: int, terms: dict) -> "Polynomial":
        # trusted constructor: terms is zero-free with valid words, any order
        p = object.__new__(cls)
        p.n = n
        p._terms = {w: terms[w] for w in sorted(terms, key=_heap_key)}
        p._hash = None
        return p

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, n: int) -> "Polynomial":
        return cls(n)

    @classmethod
    def constant(cls, c: Coefficient, n: int) -> "Polynomial":
        return cls(n, {EMPTY: c})

    @classmethod
    def monomial(cls, w: Word, n: int, c: Coefficient = 1) -> "Polynomial":
        return cls(n, {tuple(w): c})

    @classmethod
    def var(cls, i: int, j: int, n: int) -> "Polynomial":
        return cls._raw(n, {(rank(i, j, n),): 1})

    # -- inspection -------------------------------------------------------
    def __iter__(self) -> Iterator[Tuple[Coefficient, Word]]:
        for w, c in self._terms.items():
            yield c, w

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def terms(self) -> Tuple[Tuple[Coefficient, Word], ...]:
        return tuple(self)

    def items(self):
        return self._terms.items()

    def words(self):
        return self._terms.keys()

    def coefficient(self, w: Word) -> Coefficient:
        return self._terms.get(tuple(w), 0)

    def lm(self) -> Word:
        if not self._terms:
            raise ValueError("the zero polynomial has no leading monomial")
        return next(iter(self._terms))

    def lc(self) -> Coefficient:
        if not self._terms:
            raise ValueError("the zero polynomial has no leading coefficient")
        return next(iter(self._terms.values()))

    def lt(self) -> "Polynomial":
        w = self.lm()
        return Polynomial._raw(self.n, {w: self._terms[w]})

    def degree(self) -> int:
        return max((len(w) for w in self._terms), default=-1)

    def homogeneous_part(self, d: int) -> "Polynomial":
        return Polynomial._raw(self.n, {w: c for w, c in self._terms.items() if len(w) == d})

    # -- arithmetic -------------------------------------------------------
    def _same(self, other: "Polynomial"):
        if self.n != other.n:
            raise SizeMismatch(f"polynomials over n={self.n} and n={other.n}")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._same(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(other, self.n)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc = dict(self._terms)
        for w, c in other._terms.items():
            s = acc.get(w, 0) + c
            if s:
                acc[w] = s
            else:
                acc.pop(w, None)
        return Polynomial._raw(self.n, acc)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.n, {w: -c for w, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def scale(self, c: Coefficient) -> "Polynomial":
        c = _norm(c if isinstance(c, (int, Fraction)) else Fraction(c))
        if c == 0:
            return Polynomial._raw(self.n, {})
        return Polynomial._raw(self.n, {w: _norm(x * c) for w, x in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._same(other)
        acc: dict = {}
        for w1, c1 in self._terms.items():
            for w2, c2 in other._terms.items():
                w = w1 + w2
                s = acc.get(w, 0) + c1 * c2
                if s:
                    acc[w] = s
                else:
                    acc.pop(w, None)
        return Polynomial._raw(self.n, {w: _norm(c) for w, c in acc.items()})

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, e: int):
        out = Polynomial.constant(1, self.n)
        for _ in range(e):
            out = out * self
        return out

    def sandwich(self, a: Word, b: Word, c: Coefficient = 1) -> "Polynomial":
        """``c * a * self * b`` for words a, b."""
        if c == 0:
            return Polynomial._raw(self.n, {})
        return Polynomial._raw(self.n, {a + w + b: _norm(x * c) for w, x in self._terms.items()})

    def monic(self) -> "Polynomial":
        if not self._terms:
            return self
        lc = self.lc()
        if lc == 1:
            return self
        return Polynomial._raw(self.n, {w: div_coeff(c, lc) for w, c in self._terms.items()})

    # -- involutions ------------------------------------------------------
    def transpose(self) -> "Polynomial":
        """Algebra homomorphism u[i,j] -> u[j,i]."""
        n = self.n
        perm = [0] * (n * n + 1)
        for r in range(1, n * n + 1):
            i, j = unrank(r, n)
            perm[r] = rank(j, i, n)
        return Polynomial._raw(n, {tuple(perm[x] for x in w): c for w, c in self._terms.items()})

    def star(self) -> "Polynomial":
        """Anti-homomorphism fixing every u[i,j]: reverses each word."""
        return Polynomial._raw(self.n, {w[::-1]: c for w, c in self._terms.items()})

    # -- comparison, hashing, printing ------------------------------------
    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.n == other.n and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(other, self.n)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, tuple(self._terms.items())))
        return self._hash

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial(n={self.n}, {format_polynomial(self)!r})"

    def __reduce__(self):
        return (_rebuild, (self.n, tuple(self._terms.items())))


def _rebuild(n, items):
    p = object.__new__(Polynomial)
    p.n = n
    p._terms = dict(items)
    p._hash = None
    return p


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------

def format_word(w: Word, n: int) -> str:
    if not w:
        return "1"
    return "*".join("u[%d,%d]" % unrank(x, n) for x in w)


def format_coefficient(c: Coefficient) -> str:
    c = _norm(c)
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    return str(c)


def format_polynomial(p: Polynomial) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for k, (c, w) in enumerate(p):
        neg = c < 0
        a = -c if neg else c
        if not w:
            body = format_coefficient(a)
        elif a == 1:
            body = format_word(w, p.n)
        else:
            body = format_coefficient(a) + "*" + format_word(w, p.n)
        if k == 0:
            parts.append("-" + body if neg else body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    return " ".join(parts)


_TOKEN = re.compile(r"\s*(?:(?P<var>u\[\s*(?P<i>-?\d+)\s*,\s*(?P<j>-?\d+)\s*\])|(?P<int>\d+)|(?P<op>[-+*/]))")


def _tokenize(text: str):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            start = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[start]!r}", start)
        start = m.start() + (len(m.group(0)) - len(m.group(0).lstrip()))
        if m.group("var"):
            out.append(("var", (int(m.group("i")), int(m.group("j"))), start))
        elif m.group("int"):
            out.append(("int", int(m.group("int")), start))
        else:
            out.append(("op", m.group("op"), start))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


def parse_word(text: str, n: int) -> Word:
    """Parse ``1`` or ``u[i,j]*u[k,l]*...`` into a word."""
    if text.strip() == "1":
        return EMPTY
    p = parse_polynomial(text, n)
    if len(p) != 1 or p.lc() != 1:
        raise ParseError("expected a single monomial", 0)
    return p.lm()


def parse_polynomial(text: str, n: int) -> Polynomial:
    """Parse the polynomial grammar; whitespace is insignificant.

    poly := ['-'] term (('+'|'-') term)*
    term := [coeff '*'] word | coeff
    coeff := int ['/' posint]
    word := var ('*' var)*
    var := 'u[' int ',' int ']'
    """
    check_size(n)
    toks = _tokenize(text)
    k = 0

    def peek():
        return toks[k]

    def take(kind, value=None):
        nonlocal k
        t = toks[k]
        if t[0] != kind or (value is not None and t[1] != value):
            want = value if value is not None else kind
            got = t[1] if t[0] != "end" else "end of input"
            raise ParseError(f"expected {want!r}, found {got!r}", t[2])
        k += 1
        return t

    def var():
        t = take("var")
        i, j = t[1]
        if not (1 <= i <= n and 1 <= j <= n):
            raise ParseError(f"index u[{i},{j}] out of range for n={n}", t[2])
        return (i - 1) * n + j

    def word():
        w = [var()]
        while peek()[0] == "op" and peek()[1] == "*":
            take("op", "*")
            w.append(var())
        return tuple(w)

    def term():
        t = peek()
        if t[0] == "var":
            return 1, word()
        num = take("int")[1]
        c: Coefficient = num
        if peek()[0] == "op" and peek()[1] == "/":
            take("op", "/")
            d = take("int")
            if d[1] == 0:
                raise ParseError("zero denominator", d[2])
            c = _norm(Fraction(num, d[1]))
        if peek()[0] == "op" and peek()[1] == "*":
            take("op", "*")
            return c, word()
        return c, EMPTY

    acc: dict = {}
    sign = 1
    if peek()[0] == "op" and peek()[1] in "+-":
        sign = -1 if take("op")[1] == "-" else 1
    while True:
        c, w = term()
        acc[w] = acc.get(w, 0) + sign * c
        t = peek()
        if t[0] == "end":
            break
        if t[0] == "op" and t[1] in "+-":
            take("op")
            sign = -1 if t[1] == "-" else 1
            continue
        raise ParseError(f"unexpected {t[1]!r}", t[2])
    return Polynomial(n, acc)


def variable_polynomials(n: int):
    """Matrix ``u`` of degree-one polynomials, 1-indexed via ``u[i][j]``."""
    return [[None] * (n + 1)] + [[None] + [Polynomial.var(i, j, n) for j in range(1, n + 1)] for i in range(1, n + 1)]
