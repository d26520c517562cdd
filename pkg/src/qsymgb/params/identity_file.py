"""Text format for parametric identities.

    identity <name>
    grade <d> arity <k>
    family [distinct:] <alternatives for i1> ; <alternatives for i2> ; ...
    lhs <coefficient in n> : <atom> & <atom> ...
    rhs <coefficient in n> : ...
    end

Alternatives within a coordinate are separated by ``|``.  Lines starting
with ``#`` are comments.  ``true`` is the empty conjunction.  A conjunction
may appear on several lines of one side; its coefficients are added.
"""

from __future__ import annotations

from typing import List

from .framework import Grade, Identity, PredicateElement
from .intpoly import parse_intpoly
from .predicates import parse_conjunction, parse_family


class IdentityFormatError(ValueError):
    pass


def dumps(identity: Identity) -> str:
    out = [f"identity {identity.name}"]
    for g in identity.grades:
        out.append(f"grade {g.degree} arity {g.arity}")
        if g.family is not None:
            out.append(f"family {g.family.spec()}")
        for side in ("lhs", "rhs"):
            parts = getattr(g, side + "_parts") or [("", getattr(g, side))]
            for label, part in parts:
                if label:
                    out.append(f"# {label}")
                for conj, v in part.sorted_terms():
                    out.append(f"{side} {v} : {conj}")
        out.append("end")
    return "\n".join(out) + "\n"


def loads(text: str) -> Identity:
    ident = None
    cur = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            head, _, rest = line.partition(" ")
            if head == "identity":
                ident = Identity(rest.strip())
            elif ident is None:
                raise IdentityFormatError("file must start with an identity line")
            elif head == "grade":
                parts = rest.split()
                if len(parts) != 3 or parts[1] != "arity":
                    raise IdentityFormatError("expected: grade <d> arity <k>")
                d, k = int(parts[0]), int(parts[2])
                cur = {"degree": d, "arity": k, "family": None, "lhs": [], "rhs": []}
            elif cur is None:
                raise IdentityFormatError(f"{head!r} outside a grade block")
            elif head == "family":
                cur["family"] = parse_family(rest, cur["arity"])
            elif head in ("lhs", "rhs"):
                coeff, sep, conj = rest.partition(":")
                if not sep:
                    raise IdentityFormatError("expected '<coefficient> : <conjunction>'")
                cur[head].append((parse_intpoly(coeff), parse_conjunction(conj, cur["arity"])))
            elif head == "end":
                k = cur["arity"]
                ident.grades.append(Grade(cur["degree"], k, cur["family"],
                                          PredicateElement(k, cur["lhs"]), PredicateElement(k, cur["rhs"])))
                cur = None
            else:
                raise IdentityFormatError(f"unknown record {head!r}")
        except IdentityFormatError as exc:
            raise IdentityFormatError(f"line {lineno}: {exc}") from None
        except ValueError as exc:
            raise IdentityFormatError(f"line {lineno}: {exc}") from None
    if ident is None:
        raise IdentityFormatError("empty identity file")
    if cur is not None:
        raise IdentityFormatError("unterminated grade block")
    return ident


def load(path) -> Identity:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())
