"""Command-line interface.

Series, endomorphism and tuple arguments are file paths, ``-`` for stdin, or
the text itself when no such file exists.  Exit codes: 2 parse error,
3 precondition, 4 undecided stable-region verdict, 5 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import ideals, matrep, morphism, scalars, series
from .errors import NumericError, PreconditionError, StableRegionUndecided
from .expr import ParseError, parse_series, split_expressions
from .jsr import DEFAULT_MAX_DEPTH, DEFAULT_TOL, Region, in_stable_region, jsr_estimate
from .matrix_tuple import MatrixTuple
from .morphism import Endomorphism
from .words import Word

EXIT_PARSE, EXIT_PRECONDITION, EXIT_UNKNOWN, EXIT_NUMERIC = 2, 3, 4, 5


class _Undecided(Exception):
    """Raised to leave with exit code 4 after the verdict has been printed."""


def _read(arg: str) -> str:
    if arg == "-":
        return sys.stdin.read()
    path = Path(arg)
    try:
        if path.is_file():
            return path.read_text()
    except OSError:
        pass
    return arg


def _field(args):
    return None if args.field == "auto" else args.field


def _series(args, arg: str, n: int | None = None) -> series.Series:
    text = " ".join(split_expressions(_read(arg))) or "0"
    return parse_series(text, n=n, trunc=args.trunc, field=_field(args))


def _endo(args, arg: str) -> Endomorphism:
    lines = split_expressions(_read(arg))
    if not lines:
        raise ParseError("an endomorphism needs at least one image")
    parsed = [parse_series(line, trunc=args.trunc, field=_field(args)) for line in lines]
    n = max(len(parsed), max(s.n for s in parsed))
    fld = scalars.join_all(s.field for s in parsed)
    return Endomorphism(tuple(parse_series(line, n=n, trunc=args.trunc, field=fld) for line in lines))


def _tuple(arg: str) -> MatrixTuple:
    try:
        return MatrixTuple.from_json(_read(arg))
    except ValueError as exc:
        cause = exc.__cause__
        if isinstance(cause, json.JSONDecodeError):
            raise ParseError(f"matrix tuple is not valid JSON: {cause.msg}", cause.lineno, cause.colno) from exc
        raise ParseError(str(exc)) from exc


def _fmt(x: float, p: int) -> str:
    return f"{x:.{p}f}"


def _fmt_matrix(m: np.ndarray, p: int) -> str:
    rows = []
    for row in m:
        rows.append("  ".join(scalars.format_scalar(complex(z) if z.imag else float(z.real), p) for z in row))
    return "\n".join(rows)


# -- subcommands -------------------------------------------------------------


def cmd_eval(args):
    M = _tuple(args.tuple)
    f = _series(args, args.series, n=M.n)
    ev = matrep.evaluate(f, M, args.degree)
    print(_fmt_matrix(ev.value, args.precision))
    print("tails: " + " ".join(f"{t:.{args.precision}e}" for t in ev.tail_norms))


def cmd_jsr(args):
    M = _tuple(args.tuple)
    P = _tuple(args.center) if args.center else M.center
    if args.radius is None:
        b = jsr_estimate(M - P if P is not None else M, args.tol, args.max_depth)
        print(b.format(args.precision))
        verdict = None
    else:
        verdict = in_stable_region(M, P, args.radius, args.tol, args.max_depth)
        b = verdict.bounds
        print(b.format(args.precision))
        print(f"region: {verdict.region.value}")
    if args.report:
        doc = {"lower": b.lower, "upper": b.upper, "depth": b.depth, "status": b.status, "word": list(b.word)}
        if verdict is not None:
            doc.update(radius=args.radius, region=verdict.region.value)
        print(json.dumps(doc))
    if verdict is not None and verdict.region is Region.UNKNOWN:
        raise _Undecided


def cmd_identity(args):
    f = _series(args, args.series)
    if args.exact and f.field != "exact":
        raise PreconditionError("--exact needs rational coefficients")
    verdict = matrep.is_identity(f, args.k, args.degree)
    level = matrep.identity_level(f, args.k, args.degree)
    print(f"identity: {'true' if verdict else 'false'}")
    print(f"level: {level}")


def cmd_invert_endo(args):
    e = _endo(args, args.endo)
    print(morphism.invert(e, args.degree).format(precision=args.precision_or_none))


def cmd_compose(args):
    e = _endo(args, args.endo)
    g = _series(args, args.series, n=e.source_n)
    print(morphism.apply(e, g).format(precision=args.precision_or_none))


def cmd_abelianize(args):
    print(_series(args, args.series).abelianize().format(precision=args.precision_or_none))


def cmd_ideal_member(args):
    texts = [args.series] + args.generators
    n = max(_series(args, t).n for t in texts)
    f, *gens = [_series(args, t, n=n) for t in texts]
    result = ideals.membership(f, gens, args.degree, witness=args.witness)
    print(f"member: {'true' if result.member else 'false'}")
    if args.witness and result.witness:
        for (a, gi, b), c in sorted(result.witness.items()):
            left = Word(a).format()
            right = Word(b).format()
            print(f"{scalars.format_scalar(c, args.precision_or_none)} * {left} * g{gi + 1} * {right}")


def cmd_seminorm(args):
    samples = [_tuple(t) for t in args.tuples]
    f = _series(args, args.series, n=samples[0].n)
    print(_fmt(matrep.seminorm(f, samples, args.degree), args.precision))


def cmd_probe(args):
    if args.oracle == "standard-sum":
        f = series.substituted_standard_sum(min(args.degree, 20))
    elif args.oracle == "geometric":
        f = series.Series.from_oracle(series.CoefficientOracle.from_rule(1, lambda w: 1), 1, field="real")
    elif args.series is not None:
        f = _series(args, args.series)
    else:
        raise PreconditionError("give a series or --oracle")
    report = matrep.convergence_probe(
        f, args.radius, args.k_max, args.degree, args.trials, args.seed, field="real" if args.field == "real" else "complex"
    )
    print(report.summary(args.precision))


def cmd_standard_identity(args):
    print(series.standard_identity(args.l).format())


def cmd_witness(args):
    M = _tuple(args.tuple)
    f = matrep.divergence_witness(M, args.length)
    oracle = f.oracle
    for d in range(1, args.length + 1):
        got = oracle.select(d)
        if got is not None:
            word, norm = got
            print(f"{d} {word.format()} {norm ** (1.0 / d):.{args.precision}f}")
    print(f"radius: {series.majorant_radius(f).radius:.{args.precision}f}")


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    def common(suppress: bool) -> argparse.ArgumentParser:
        # subcommands repeat the global flags without defaults, so either position works
        c = argparse.ArgumentParser(add_help=False)
        d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        c.add_argument("--field", choices=["auto", "exact", "real", "complex"], default=d("auto"))
        c.add_argument("--precision", type=int, default=d(6), help="digits after the decimal point")
        c.add_argument("--trunc", type=int, default=d(None), help="truncation degree (default: polynomial)")
        return c

    p = argparse.ArgumentParser(
        prog="ncseries", description="Truncated noncommutative power series toolkit.", parents=[common(False)]
    )
    sub = p.add_subparsers(dest="command", required=True)
    sub_common = common(True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_, parents=[sub_common])
        sp.set_defaults(func=fn)
        return sp

    sp = add("eval", cmd_eval, "evaluate a series at a matrix tuple")
    sp.add_argument("series")
    sp.add_argument("tuple")
    sp.add_argument("--degree", type=int, default=None)

    sp = add("jsr", cmd_jsr, "joint spectral radius bounds")
    sp.add_argument("tuple")
    sp.add_argument("--tol", type=float, default=DEFAULT_TOL)
    sp.add_argument("--max-depth", type=int, default=DEFAULT_MAX_DEPTH)
    sp.add_argument("--center", default=None)
    sp.add_argument("--radius", type=float, default=None)
    sp.add_argument("--report", action="store_true")

    sp = add("identity", cmd_identity, "matrix identity test and filtration level")
    sp.add_argument("series")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--degree", type=int, default=None)
    sp.add_argument("--exact", action="store_true")

    sp = add("invert-endo", cmd_invert_endo, "invert an endomorphism modulo a degree")
    sp.add_argument("endo")
    sp.add_argument("--degree", type=int, required=True)

    sp = add("compose", cmd_compose, "substitute the images of an endomorphism into a series")
    sp.add_argument("series")
    sp.add_argument("endo")

    sp = add("abelianize", cmd_abelianize, "commutative image of a series")
    sp.add_argument("series")

    sp = add("ideal-member", cmd_ideal_member, "membership in a completed ideal up to a degree")
    sp.add_argument("series")
    sp.add_argument("generators", nargs="+")
    sp.add_argument("--degree", type=int, required=True)
    sp.add_argument("--witness", action="store_true")

    sp = add("seminorm", cmd_seminorm, "sampled seminorm of a series")
    sp.add_argument("series")
    sp.add_argument("tuples", nargs="+")
    sp.add_argument("--degree", type=int, default=None)

    sp = add("probe-convergence", cmd_probe, "sample a stable region and inspect tails")
    sp.add_argument("series", nargs="?")
    sp.add_argument("--oracle", choices=["standard-sum", "geometric"], default=None)
    sp.add_argument("--radius", type=float, required=True)
    sp.add_argument("--k-max", type=int, default=2)
    sp.add_argument("--degree", type=int, default=20)
    sp.add_argument("--trials", type=int, default=8)
    sp.add_argument("--seed", type=int, default=0)

    sp = add("standard-identity", cmd_standard_identity, "print the standard polynomial s_l")
    sp.add_argument("l", type=int)

    sp = add("witness", cmd_witness, "divergence witness for a matrix tuple")
    sp.add_argument("tuple")
    sp.add_argument("--length", type=int, default=12)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    # series text keeps full precision unless a precision is asked for explicitly
    given = argv if argv is not None else sys.argv[1:]
    args.precision_or_none = args.precision if any(a.startswith("--precision") for a in given) else None
    try:
        args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except _Undecided:
        return EXIT_UNKNOWN
    except StableRegionUndecided as exc:
        print(f"undecided: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN
    except PreconditionError as exc:
        print(f"precondition: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except NumericError as exc:
        print(f"numeric: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return 0


if __name__ == "__main__":
    sys.exit(main())
