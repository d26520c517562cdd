"""Univariate integer polynomials in the size parameter n."""

from __future__ import annotations

import re
from typing import Tuple, Union


class IntPoly:
    """Integer polynomial in ``n``; coefficients stored low degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        c = [int(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs: Tuple[int, ...] = tuple(c)

    @classmethod
    def const(cls, c: int) -> "IntPoly":
        return cls((c,))

    @classmethod
    def n(cls) -> "IntPoly":
        return cls((0, 1))

    @staticmethod
    def lift(x) -> "IntPoly":
        if isinstance(x, IntPoly):
            return x
        if isinstance(x, int):
            return IntPoly((x,))
        raise TypeError(f"cannot use {x!r} as a polynomial in n")

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, n: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * n + c
        return acc

    def __add__(self, other):
        other = IntPoly.lift(other)
        a, b = self.coeffs, other.coeffs
        m = max(len(a), len(b))
        return IntPoly((a[k] if k < len(a) else 0) + (b[k] if k < len(b) else 0) for k in range(m))

    __radd__ = __add__

    def __neg__(self):
        return IntPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-IntPoly.lift(other))

    def __rsub__(self, other):
        return IntPoly.lift(other) - self

    def __mul__(self, other):
        other = IntPoly.lift(other)
        out = [0] * (len(self.coeffs) + len(other.coeffs))
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return IntPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int):
            other = IntPoly.const(other)
        return isinstance(other, IntPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for d in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[d]
            if c == 0:
                continue
            mag = abs(c)
            if d == 0:
                body = str(mag)
            else:
                var = "n" if d == 1 else f"n^{d}"
                body = var if mag == 1 else f"{mag}{var}"
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("-" if c < 0 else "+") + body)
        return "".join(parts)

    def __repr__(self):
        return f"IntPoly({str(self)!r})"


_TERM = re.compile(r"([+-]?)(\d*)(n(?:\^(\d+))?)?")


def parse_intpoly(text: str) -> IntPoly:
    """Parse a sum of terms such as ``n-2`` or ``-3n^2+n``; products are rejected."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty coefficient")
    out = {}
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos or (not m.group(2) and not m.group(3)):
            raise ValueError(f"bad coefficient {text!r} at position {pos}")
        if pos > 0 and not m.group(1):
            raise ValueError(f"missing sign in {text!r} at position {pos}")
        sign = -1 if m.group(1) == "-" else 1
        mag = int(m.group(2)) if m.group(2) else 1
        deg = 0
        if m.group(3):
            deg = int(m.group(4)) if m.group(4) else 1
        out[deg] = out.get(deg, 0) + sign * mag
        pos = m.end()
    top = max(out)
    return IntPoly(out.get(d, 0) for d in range(top + 1))


Scalar = Union[int, IntPoly]
