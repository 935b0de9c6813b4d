"""Command-line front end.

Exit codes: 0 success (audit matches expected statuses), 1 audit status
mismatch, 2 usage error, 3 backend error.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from decimal import Decimal, localcontext
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import analysis
from .core_seq import DEFAULT_PRECISION, EXACT_CAP, ExactModeLimit, frequency_exact, frequency_fixed, iterate_float
from .prime_count import ApplicabilityError, PiCache, PrimeCountError
from .sieve_construct import SieveError, cardinality_pipeline, explicit_sieve, good_integer

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_BACKEND = 0, 1, 2, 3

log = logging.getLogger("primefreq")


def _positive_int(text: str) -> int:
    try:
        value = int(Decimal(text)) if any(ch in text for ch in "eE.") else int(text)
    except (ValueError, ArithmeticError):
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 1 or Decimal(text) != value:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def _checkpoint_list(text: str) -> list[int]:
    items = [t.strip() for t in text.split(",") if t.strip()]
    if not items:
        raise argparse.ArgumentTypeError("checkpoint list is empty")
    return sorted({_positive_int(t) for t in items})


def _fmt(x) -> str:
    if isinstance(x, float):
        return str(int(x)) if x.is_integer() else repr(x)
    return str(x)


def _decimal(value: Fraction, digits: int) -> str:
    with localcontext() as ctx:
        ctx.prec = digits
        return str(Decimal(value.numerator) / Decimal(value.denominator))


def _emit_rows(header: Sequence[str], rows: Sequence[Sequence], fmt: str) -> str:
    if fmt == "json":
        return json.dumps([dict(zip(header, r)) for r in rows], indent=2) + "\n"
    lines = [",".join(header)] + [",".join(_fmt(v) for v in r) for r in rows]
    return "\n".join(lines) + "\n"


def _cache(args) -> PiCache | None:
    if args.cache:
        return PiCache(args.cache)
    return PiCache.from_env()


def cmd_freq(args) -> int:
    n = args.n
    header = ["n", "a", "inv_a", "b"]
    if args.exact:
        a = frequency_exact(n, cap=args.cap)
        b = float(1 / a) - math.log(n)
        row = [n, str(a), str(1 / a), b]
    elif args.precision is not None:
        a, err = frequency_fixed(n, args.precision)
        digits = max(17, int(args.precision * math.log10(2)) - len(str(n)) - 1)
        row = [n, _decimal(a, digits), _decimal(1 / a, digits), float(1 / a) - math.log(n)]
    else:
        state = iterate_float(n)[-1]
        row = [n, state.a, 1.0 / state.a, state.b]
    sys.stdout.write(_emit_rows(header, [row], args.format))
    return EXIT_OK


def cmd_sieve(args) -> int:
    M = args.multiplier * good_integer(args.n).value
    if args.explicit or args.elements:
        trace = explicit_sieve(args.n, M)
    else:
        trace = cardinality_pipeline(args.n, M)
    if args.format == "json":
        sys.stdout.write(trace.to_json(include_elements=args.elements))
        return EXIT_OK
    header = ["M", "k", "A", "B", "C", "a_k"]
    rows = [[M, s.k, s.A, s.B, s.C, str(Fraction(s.A, M))] for s in trace.steps]
    sys.stdout.write(_emit_rows(header, rows, "csv"))
    return EXIT_OK


def cmd_compare(args) -> int:
    rows = analysis.comparison_table(args.checkpoints, cache=_cache(args), workers=args.workers)
    if args.format == "json":
        header = analysis.CSV_FIELDS
        data = [[getattr(r, f) for f in header] for r in rows]
        sys.stdout.write(_emit_rows(header, data, "json"))
    else:
        sys.stdout.write(analysis.rows_to_csv(rows))
    return EXIT_OK


def cmd_audit(args) -> int:
    report = analysis.claims_audit(args.limit, checkpoints=args.checkpoints,
                                   cache=_cache(args), workers=args.workers)
    sys.stdout.write(report.to_json())
    bad = analysis.mismatches(report)
    for claim_id, (want, got) in bad.items():
        print(f"status mismatch: {claim_id}: expected {want}, got {got}", file=sys.stderr)
    return EXIT_MISMATCH if bad else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="primefreq", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("freq", help="a_n, 1/a_n and b_n")
    p.add_argument("--n", type=_positive_int, required=True)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", help="reduced fraction")
    mode.add_argument("--float", dest="float_mode", action="store_true", help="double precision (default)")
    p.add_argument("--precision", type=_positive_int, default=None,
                   help=f"binary fixed point with this many fractional bits (e.g. {DEFAULT_PRECISION})")
    p.add_argument("--cap", type=_positive_int, default=EXACT_CAP, help="exact-mode index cap")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=cmd_freq)

    p = sub.add_parser("sieve", help="sieve trace |A_k|, |B_k|, |C_k| at M = multiplier * M_n")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--multiplier", type=_positive_int, default=1)
    p.add_argument("--explicit", action="store_true", help="materialize the sets")
    p.add_argument("--elements", action="store_true", help="include element sets in JSON output")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=cmd_sieve)

    for name, func, help_ in (("compare", cmd_compare, "comparison rows c(n), n a_n against pi(n)"),
                              ("audit", cmd_audit, "claim-by-claim audit report (JSON)")):
        p = sub.add_parser(name, help=help_)
        if name == "compare":
            p.add_argument("--checkpoints", type=_checkpoint_list, required=True)
            p.add_argument("--format", choices=["csv", "json"], default="csv")
        else:
            p.add_argument("--limit", type=_positive_int, required=True)
            p.add_argument("--checkpoints", type=_checkpoint_list, default=None)
        p.add_argument("--cache", type=Path, default=None,
                       help="pi checkpoint cache CSV (default: $PRIMEFREQ_CACHE_DIR/pi_cache.csv)")
        p.add_argument("--workers", type=_positive_int, default=1)
        p.set_defaults(func=func)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "freq" and args.precision is not None and args.exact:
        parser.error("--precision cannot be combined with --exact")
    cps = getattr(args, "checkpoints", None)
    if cps and cps[0] < 2:
        parser.error("checkpoints must be >= 2")
    if args.command == "audit" and cps and cps[-1] > args.limit:
        parser.error("audit checkpoints must not exceed --limit")
    try:
        return args.func(args)
    except (ExactModeLimit, SieveError, PrimeCountError, ApplicabilityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BACKEND


if __name__ == "__main__":
    sys.exit(main())
