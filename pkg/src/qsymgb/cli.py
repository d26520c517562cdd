"""Command-line entry point.

Exit codes: 0 success, 2 usage or input errors, 3 a mathematical check
failed, 4 completion stopped at a cap.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import List, Optional

from .algebra import ParseError, format_polynomial, parse_polynomial
from .certificate import CertificateFormatError, dumps as dump_certificate, loads as load_certificate
from .certificate import verify_certificate
from .groebner import (
    CAPPED,
    Basis,
    CompletionConfig,
    buchberger,
    default_jobs,
    diamond_witness,
    is_groebner,
    normal_form,
    overlap_relation,
    reduce,
)
from .relations import FAMILIES, NAMED_SETS, InvalidIndices, instances, make_relation, named_set, word_problem

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_MATH = 3
EXIT_CAPPED = 4


class UsageError(Exception):
    pass


def _size(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if n < 1:
        raise argparse.ArgumentTypeError(f"size must be positive, got {n}")
    return n


def _need4(n: int, what: str):
    if n < 4:
        raise UsageError(f"{what} needs n >= 4, got {n}")


def _parse(text: str, n: int, what: str):
    try:
        return parse_polynomial(text, n)
    except ParseError as exc:
        raise UsageError(f"cannot parse {what}: {exc}\n  {text}\n  {' ' * exc.position}^")


def read_polynomial_file(path: str, n: int) -> List:
    """One polynomial per line; blank lines and ``#`` comments are skipped."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if line:
                out.append(_parse(line, n, f"{path}:{lineno}"))
    return out


def load_basis(spec: str, n: int) -> Basis:
    """A named set (G, F, Fp, Fpp, B) or a file of polynomials."""
    if spec in NAMED_SETS:
        _need4(n, f"set {spec}")
        return named_set(spec, n)
    if not os.path.exists(spec):
        raise UsageError(f"{spec!r} is neither a named set ({', '.join(NAMED_SETS)}) nor a file")
    return Basis(read_polynomial_file(spec, n), n=n)


def _print_basis(polys, out):
    for p in polys:
        print(format_polynomial(p), file=out)


def _samples(text: str) -> range:
    try:
        if ".." in text:
            lo, hi = text.split("..")
            r = range(int(lo), int(hi) + 1)
        else:
            r = range(int(text), int(text) + 1)
    except ValueError:
        raise UsageError(f"bad sample range {text!r}; expected LO..HI")
    if not r or r.start < 1:
        raise UsageError(f"empty sample range {text!r}")
    return r


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_gens(args, out) -> int:
    n = args.n
    if args.family:
        if args.family not in FAMILIES:
            raise UsageError(f"unknown family {args.family!r}")
        if args.indices:
            try:
                idx = tuple(int(x) for x in args.indices.split(","))
            except ValueError:
                raise UsageError(f"bad indices {args.indices!r}")
            try:
                polys = [make_relation(args.family, idx, n)]
            except InvalidIndices as exc:
                raise UsageError(str(exc))
        else:
            polys = [p for _, p in instances(args.family, n)]
        _print_basis(polys, out)
        return EXIT_OK
    _need4(n, "gens")
    _print_basis(named_set(args.set, n), out)
    return EXIT_OK


def cmd_nf(args, out) -> int:
    G = load_basis(args.basis, args.n)
    f = _parse(args.poly, args.n, "--poly")
    r, cert = normal_form(f, G, log=bool(args.certificate))
    print(format_polynomial(r), file=out)
    if args.certificate:
        with open(args.certificate, "w", encoding="utf-8") as fh:
            fh.write(dump_certificate(cert, len(G)))
    return EXIT_OK


def cmd_check_gb(args, out) -> int:
    G = load_basis(args.basis, args.n)
    jobs = args.jobs or default_jobs()
    ok, failures = is_groebner(G, report=True, jobs=jobs, discharge=not args.strict_concat)
    if ok:
        print(f"PASS: {len(G)} elements, every overlap and division relation reduces to 0", file=out)
        return EXIT_OK
    print(f"FAIL: {len(failures)} relations do not reduce to 0", file=out)
    for t in failures:
        mono, r1, r2 = diamond_witness(G, t)
        print(f"  {t.describe(G)}", file=out)
        print(f"    relation reduces to {format_polynomial(reduce(overlap_relation(t, G), G))}", file=out)
        print(f"    {format_polynomial(mono)} -> {format_polynomial(r1)} | {format_polynomial(r2)}", file=out)
    return EXIT_MATH


def cmd_buchberger(args, out) -> int:
    F = load_basis(args.input, args.n)
    try:
        cfg = CompletionConfig(max_degree=args.max_deg, max_rounds=args.max_rounds)
    except ValueError as exc:
        raise UsageError(str(exc))
    res = buchberger(F, cfg, n=args.n)
    _print_basis(res.basis, out)
    print(f"# status {res.status}, {len(res.basis)} elements, {res.rounds} rounds", file=out)
    return EXIT_CAPPED if res.status == CAPPED else EXIT_OK


def cmd_wordproblem(args, out) -> int:
    _need4(args.n, "wordproblem")
    f = _parse(args.lhs, args.n, "--lhs")
    g = _parse(args.rhs, args.n, "--rhs")
    equal, nf_f, nf_g = word_problem(f, g)
    print("EQUIVALENT" if equal else "DISTINCT", file=out)
    print(f"nf(lhs) = {format_polynomial(nf_f)}", file=out)
    print(f"nf(rhs) = {format_polynomial(nf_g)}", file=out)
    return EXIT_OK


def cmd_verify_cert(args, out) -> int:
    G = load_basis(args.basis, args.n)
    try:
        with open(args.cert, encoding="utf-8") as fh:
            cert, size = load_certificate(fh.read())
    except OSError as exc:
        raise UsageError(str(exc))
    except CertificateFormatError as exc:
        raise UsageError(f"bad certificate: {exc}")
    if cert.target.n != args.n:
        raise UsageError(f"certificate is for n={cert.target.n}, not n={args.n}")
    if size != len(G):
        print(f"FAIL: certificate refers to a basis of {size} elements, basis has {len(G)}", file=out)
        return EXIT_MATH
    if verify_certificate(cert, G):
        print(f"PASS: {len(cert.summands)} summands reconstruct the target", file=out)
        return EXIT_OK
    print("FAIL: certificate does not verify", file=out)
    return EXIT_MATH


def cmd_param_check(args, out) -> int:
    from .params.fixtures import FIXTURES, fixture_text
    from .params.framework import verify_parametric_identity
    from .params.identity_file import IdentityFormatError, load, loads

    try:
        if os.path.exists(args.identity):
            ident = load(args.identity)
        elif args.identity in FIXTURES:
            ident = loads(fixture_text(args.identity))
        else:
            raise UsageError(f"no identity file {args.identity!r}")
    except IdentityFormatError as exc:
        raise UsageError(f"bad identity file: {exc}")
    rep = verify_parametric_identity(ident, samples=_samples(args.samples))
    print(rep, file=out)
    return EXIT_OK if rep.ok else EXIT_MATH


def cmd_suite(args, out) -> int:
    from .suite import CHECKS, SuiteContext, run_check

    _need4(args.n, "suite")
    only = sorted(CHECKS)
    if args.only:
        try:
            only = sorted({int(x) for x in args.only.split(",")})
        except ValueError:
            raise UsageError(f"bad criterion list {args.only!r}")
        if not set(only) <= set(CHECKS):
            raise UsageError(f"criteria are numbered 1..{max(CHECKS)}")
    ctx = SuiteContext(extended=args.extended, max_n=args.n)
    failed = 0
    for k in only:
        res = run_check(k, ctx)
        failed += not res.ok
        print(res.line(), file=out)
        if args.verbose or not res.ok:
            for d in res.details:
                print(f"    {d}", file=out)
        out.flush()
    print(f"{len(only) - failed} of {len(only)} criteria passed", file=out)
    return EXIT_MATH if failed else EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qsymgb", description="Groebner bases for the quantum symmetric group.")
    sub = p.add_subparsers(dest="command", required=True)

    def with_n(sp):
        sp.add_argument("--n", type=_size, required=True, help="matrix size")
        return sp

    s = with_n(sub.add_parser("gens", help="print generating relations"))
    s.add_argument("--set", choices=NAMED_SETS, default="G")
    s.add_argument("--family", help="single relation family, e.g. rinj or bg11")
    s.add_argument("--indices", help="comma separated indices for --family")
    s.set_defaults(func=cmd_gens)

    s = with_n(sub.add_parser("nf", help="normal form of a polynomial"))
    s.add_argument("--poly", required=True)
    s.add_argument("--basis", default="G", help="named set or file with one polynomial per line")
    s.add_argument("--certificate", metavar="OUT", help="write a certificate for poly - nf(poly)")
    s.set_defaults(func=cmd_nf)

    s = with_n(sub.add_parser("check-gb", help="Buchberger criterion"))
    s.add_argument("--basis", default="G")
    s.add_argument("--jobs", type=int, default=0, help="worker processes (default: available CPUs)")
    s.add_argument("--strict-concat", action="store_true",
                   help="also reduce the overlaps of non-overlapping leading words")
    s.set_defaults(func=cmd_check_gb)

    s = with_n(sub.add_parser("buchberger", help="complete a set to a Groebner basis"))
    s.add_argument("--input", required=True, help="named set or file")
    s.add_argument("--max-deg", type=int)
    s.add_argument("--max-rounds", type=int)
    s.set_defaults(func=cmd_buchberger)

    s = with_n(sub.add_parser("wordproblem", help="decide equality in the quotient algebra"))
    s.add_argument("--lhs", required=True)
    s.add_argument("--rhs", required=True)
    s.set_defaults(func=cmd_wordproblem)

    s = with_n(sub.add_parser("verify-cert", help="re-verify a certificate"))
    s.add_argument("--basis", default="G")
    s.add_argument("--cert", required=True)
    s.set_defaults(func=cmd_verify_cert)

    s = sub.add_parser("param-check", help="verify a parametric identity file")
    s.add_argument("--identity", required=True, help="file, or a shipped fixture name (rwel23, rowcol)")
    s.add_argument("--samples", default="4..9")
    s.set_defaults(func=cmd_param_check)

    s = sub.add_parser("suite", help="run the acceptance battery")
    s.add_argument("--n", type=_size, default=12, help="largest size used by size ranges")
    s.add_argument("--extended", action="store_true", help="add the n=6 Groebner check")
    s.add_argument("--only", help="comma separated criterion numbers")
    s.add_argument("-v", "--verbose", action="store_true")
    s.set_defaults(func=cmd_suite)
    return p


def main(argv: Optional[List[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
