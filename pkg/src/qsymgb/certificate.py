"""Logged ideal-membership representations and their text format.

A certificate records ``target = sum(c * left * G[k] * right)``.  It verifies
when the sum reconstructs the target exactly and no summand's leading word
exceeds lm(target).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

from .algebra import (
    Coefficient,
    Polynomial,
    Word,
    _norm,
    compare_monomials,
    format_polynomial,
    format_word,
    parse_polynomial,
    parse_word,
)

Summand = Tuple[Coefficient, Word, int, Word]


@dataclass(frozen=True)
class GroebnerCertificate:
    target: Polynomial
    summands: Tuple[Summand, ...]

    def reconstruct(self, G) -> Polynomial:
        acc: dict = {}
        for c, a, k, b in self.summands:
            for w, x in G[k].items():
                key = a + w + b
                acc[key] = acc.get(key, 0) + c * x
        return Polynomial(self.target.n, {w: c for w, c in acc.items() if c})


def verify_certificate(cert: GroebnerCertificate, G) -> bool:
    elements = list(G)
    for c, a, k, b in cert.summands:
        if not (0 <= k < len(elements)) or elements[k].is_zero():
            return False
    if cert.target.is_zero():
        return not cert.summands
    if cert.reconstruct(elements) != cert.target:
        return False
    top = cert.target.lm()
    for c, a, k, b in cert.summands:
        if c != 0 and compare_monomials(a + elements[k].lm() + b, top) > 0:
            return False
    return True


def _fmt_coeff(c: Coefficient) -> str:
    c = Fraction(c)
    return f"{c.numerator}/{c.denominator}"


def dumps(cert: GroebnerCertificate, basis_size: int) -> str:
    n = cert.target.n
    lines = ["certificate v1", f"n {n}", f"basis {basis_size}",
             f"target {format_polynomial(cert.target)}"]
    for c, a, k, b in cert.summands:
        lines.append(f"summand {_fmt_coeff(c)} {format_word(a, n)} {k} {format_word(b, n)}")
    lines.append("end")
    return "\n".join(lines) + "\n"


class CertificateFormatError(ValueError):
    pass


def loads(text: str) -> Tuple[GroebnerCertificate, int]:
    """Parse a certificate; returns it together with the declared basis size."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    try:
        if lines[0] != "certificate v1":
            raise CertificateFormatError("missing header")
        n = int(lines[1].split()[1])
        size = int(lines[2].split()[1])
        if not lines[3].startswith("target "):
            raise CertificateFormatError("missing target")
        target = parse_polynomial(lines[3][len("target "):], n)
        summands = []
        for ln in lines[4:]:
            if ln == "end":
                break
            tag, coeff, left, k, right = ln.split()
            if tag != "summand":
                raise CertificateFormatError(f"unexpected record {tag!r}")
            p, q = coeff.split("/")
            summands.append((_norm(Fraction(int(p), int(q))), parse_word(left, n), int(k), parse_word(right, n)))
        else:
            raise CertificateFormatError("missing end marker")
    except (IndexError, ValueError) as exc:
        if isinstance(exc, CertificateFormatError):
            raise
        raise CertificateFormatError(str(exc)) from exc
    return GroebnerCertificate(target, tuple(summands)), size
