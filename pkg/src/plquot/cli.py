"""Command-line interface (``plq``).

Exit codes: 0 success / true verdict, 1 false verdict (``inh``, ``coset-eq``),
2 parse or validation error, 3 domain error, 4 usage error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import checks
from .asymptotics import coset_equivalent, in_H, normalize_mod_H, quotient_compose, s_invariant
from .errors import DomainError, ValidationError
from .plcore import bilip_constant, compose, evaluate, invert, linear, power, slope_right
from .rationals import format_rational, parse_rational, to_decimal
from .textio import load, serialize
from .witnesses import (
    SampleConfig,
    TailKind,
    center_witness,
    linear_partner_witness,
    sample_map,
    torsion_witness,
)

EXIT_FALSE, EXIT_PARSE, EXIT_DOMAIN, EXIT_USAGE = 1, 2, 3, 4

SUITE_HELP = """suites:
  bilip      bounded slopes imply bi-Lipschitz with K = max(max slope, 1/min slope)
  subgroup   H is a subgroup (closure, inverses) and proper (x -> kx not in H, k > 1)
  normal     H is normal: g^-1 f g in H for f in H
  torsion    G/H is torsion-free: no power f^r (r <= 8) of f outside H lies in H
  center     G/H has trivial center: every non-identity class has a non-commuting partner
  algebra    associativity and inverse laws; quotient product associative mod H
  roundtrip  .plm parse/serialize round trip, byte-stable canonical output
"""


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {text}")
    return value


def _emit_map(f, path, out):
    text = serialize(f)
    if path in (None, "-"):
        out.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="plq", description="Exact PL homeomorphisms of [0, inf) modulo H.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("eval", help="print f(x) exactly")
    c.add_argument("-f", required=True)
    c.add_argument("-x", required=True, type=_rational)

    for name, help_ in [("compose", "write f∘g"), ("qcompose", "write a representative of [f][g] in G/H")]:
        c = sub.add_parser(name, help=help_)
        c.add_argument("-f", required=True)
        c.add_argument("-g", required=True)
        c.add_argument("-o")

    c = sub.add_parser("invert", help="write f^-1")
    c.add_argument("-f", required=True)
    c.add_argument("-o")

    c = sub.add_parser("pow", help="write f^r")
    c.add_argument("-f", required=True)
    c.add_argument("-r", required=True, type=_positive_int)
    c.add_argument("-o")

    for name, help_ in [
        ("sinv", "print the ratio invariant S_f"),
        ("inh", "exit 0 if f is in H, 1 otherwise"),
        ("bilip", "print the bi-Lipschitz constant K"),
    ]:
        c = sub.add_parser(name, help=help_)
        c.add_argument("-f", required=True)

    c = sub.add_parser("coset-eq", help="exit 0 if fH = gH, 1 otherwise")
    c.add_argument("-f", required=True)
    c.add_argument("-g", required=True)

    w = sub.add_parser("witness", help="build proof witnesses")
    wsub = w.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    c = wsub.add_parser("center", help="non-commuting partner for the class of f")
    c.add_argument("-f", required=True)
    c.add_argument("-o")
    c.add_argument("--anchors", type=_positive_int, default=4)
    c = wsub.add_parser("torsion", help="S of (normalized f)^r and whether it avoids H")
    c.add_argument("-f", required=True)
    c.add_argument("-r", required=True, type=_positive_int)

    c = sub.add_parser("sample", help="write a seeded random map")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--tail", choices=[k.value for k in TailKind], default="mixed")
    c.add_argument("--max-breakpoints", type=int, default=4)
    c.add_argument("--slope-bound", type=_rational, default=Fraction(4))
    c.add_argument("--denominator-bound", type=_positive_int, default=6)
    c.add_argument("-o")

    c = sub.add_parser(
        "check",
        help="run seeded property suites",
        epilog=SUITE_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    c.add_argument("--suite", choices=[*checks.SUITES, "all"], default="all")
    c.add_argument("--seed", type=int, default=42)
    c.add_argument("--samples", type=_positive_int, default=200)
    c.add_argument("--timing", action="store_true", help="append wall time (output is then not reproducible)")

    c = sub.add_parser("plot", help="write x,f_of_x,ratio CSV")
    c.add_argument("-f", required=True)
    c.add_argument("--xmin", type=_rational, default=Fraction(0))
    c.add_argument("--xmax", type=_rational, required=True)
    c.add_argument("--points", type=_positive_int, default=100)
    c.add_argument("--digits", type=int, default=6)
    c.add_argument("-o")
    return p


def _run(args, out) -> int:
    cmd = args.command
    if cmd == "eval":
        out.write(format_rational(evaluate(load(args.f), args.x)) + "\n")
    elif cmd == "compose":
        _emit_map(compose(load(args.f), load(args.g)), args.o, out)
    elif cmd == "qcompose":
        _emit_map(quotient_compose(load(args.f), load(args.g)), args.o, out)
    elif cmd == "invert":
        _emit_map(invert(load(args.f)), args.o, out)
    elif cmd == "pow":
        _emit_map(power(load(args.f), args.r), args.o, out)
    elif cmd == "sinv":
        out.write(f"{s_invariant(load(args.f))}\n")
    elif cmd == "inh":
        f = load(args.f)
        out.write(f"{s_invariant(f)}\n")
        return 0 if in_H(f) else EXIT_FALSE
    elif cmd == "bilip":
        out.write(format_rational(bilip_constant(load(args.f))) + "\n")
    elif cmd == "coset-eq":
        d = coset_equivalent(load(args.f), load(args.g))
        out.write(f"{d}\n")
        return 0 if d.equivalent else EXIT_FALSE
    elif cmd == "witness":
        return _witness(args, out)
    elif cmd == "sample":
        try:
            cfg = SampleConfig(
                seed=args.seed,
                max_breakpoints=args.max_breakpoints,
                slope_bound=args.slope_bound,
                denominator_bound=args.denominator_bound,
                tail_kind=TailKind(args.tail),
            )
        except ValueError as exc:
            raise UsageError(f"plq sample: {exc}") from None
        _emit_map(sample_map(cfg), args.o, out)
    elif cmd == "check":
        return _check(args, out)
    elif cmd == "plot":
        _plot(args, out)
    return 0


def _witness(args, out) -> int:
    f = load(args.f)
    if args.kind == "torsion":
        S, avoids = torsion_witness(f, args.r)
        out.write(f"r {args.r}\n{S}\nnot in H: {'yes' if avoids else 'no'}\n")
        return 0
    norm = normalize_mod_H(f)
    if norm.is_geometric:
        found = linear_partner_witness(norm)
        if found is None:
            raise DomainError("no linear partner in the search list separates this class")
        c, decision = found
        out.write(f"partner linear {format_rational(c)}\n{decision}\n")
        if args.o:
            _emit_map(linear(c), args.o, out)
        return 0
    bundle = center_witness(f, n_anchors=args.anchors)
    if bundle.inverted:
        out.write("target inverse (tail slope below 1)\n")
    out.write("anchors " + " ".join(format_rational(a) for a in bundle.anchors) + "\n")
    out.write("gaps " + " ".join(format_rational(g) for g in bundle.gaps) + "\n")
    out.write(f"{bundle.verdict}\n")
    if args.o:
        _emit_map(bundle.conjugator, args.o, out)
    return 0


def _check(args, out) -> int:
    names = checks.SUITES if args.suite == "all" else (args.suite,)
    total = 0
    for name in names:
        report = checks.run_suite(name, args.seed, args.samples)
        line = f"suite {name}: {report.samples} samples, {len(report.failures)} failures"
        if args.timing:
            line += f", {report.wall_time:.2f}s"
        out.write(line + "\n")
        for fail in sorted(report.failures, key=lambda x: x.index):
            out.write(f"  FAIL sample {fail.index} seed {fail.seed}: {fail.invariant}\n")
            out.write(f"    {fail.counterexample}\n")
        total += len(report.failures)
    out.write(f"total: {len(names)} suites, {total} failures\n")
    return 0 if total == 0 else EXIT_FALSE


def _plot(args, out):
    if args.xmax <= args.xmin or args.xmin < 0:
        raise UsageError("plot needs 0 <= xmin < xmax")
    if args.digits < 0:
        raise UsageError("--digits must be non-negative")
    f = load(args.f)
    n = args.points
    rows = ["x,f_of_x,ratio"]
    for i in range(n):
        x = args.xmin if n == 1 else args.xmin + (args.xmax - args.xmin) * i / (n - 1)
        fx = evaluate(f, x)
        # f(x)/x -> first slope as x -> 0
        ratio = fx / x if x else slope_right(f, x)
        rows.append(",".join(to_decimal(v, args.digits) for v in (x, fx, ratio)))
    text = "\n".join(rows) + "\n"
    if args.o in (None, "-"):
        out.write(text)
    else:
        with open(args.o, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _run(args, out)
    except UsageError as exc:
        err.write(f"{exc}\n")
        return EXIT_USAGE
    except ValidationError as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_PARSE
    except OSError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_PARSE
    except DomainError as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
