"""Command line front end: ``tautring {dims,count,relmat,pushforward,verify}``.

Exit codes: 0 success, 1 usage error, 2 internal error, 3 rank disagreement
between moduli, 4 a verification check failed.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time

from .enumeration import column_zero_basis
from .poly import DEFAULT_PRIMES, GenusContext
from .relations import GenerationPlan, iter_blocks, write_triplets
from .reports import ExpectedDims, RankDisagreement, count_table, dims_report, mg_report
from .verify import (
    gorenstein_report,
    mg1_free_range,
    mg_free_range,
    verify_morita,
    verify_sl2_suite,
    verify_tables,
)

EXIT_OK, EXIT_USAGE, EXIT_INTERNAL, EXIT_DISAGREE, EXIT_CHECK = 0, 1, 2, 3, 4

log = logging.getLogger("tautring")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _order(value: str) -> str:
    if value in ("canonical", "socle", "socle-partial-order"):
        return value
    if value.startswith("random:") and value[7:].lstrip("-").isdigit():
        return value
    raise argparse.ArgumentTypeError("expected canonical, socle or random:<seed>")


def _threads(value) -> int:
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError("threads must be positive")
    return n


def _add_common(p, primes=True):
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--threads", type=_threads, default=None,
                   help="worker count (default: $TAUT_THREADS or 1)")
    if primes:
        p.add_argument("--prime", type=int, action="append", dest="primes",
                       help="prime modulus; repeat for a cross-check (default: two primes below 2^31)")
        p.add_argument("--exact", action="store_true", help="also run over the rationals")
        p.add_argument("--order", type=_order, default="socle")
        p.add_argument("--strategy", choices=("table", "direct"), default="table")


def _add_output(p):
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tautring", description="Tautological relations on M_{g,1} and M_g.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("dims", help="dimensions of R~ on M_{g,1}")
    _add_common(p)
    p.add_argument("--codim-min", type=int, default=0)
    p.add_argument("--codim-max", type=int, default=None, help="default g + 1")
    p.add_argument("--expected", help='JSON {"genus": G, "dims": [...]}; enables early stop')
    p.add_argument("--no-early-stop", action="store_true", help="with --expected, only compare")
    _add_output(p)

    p = sub.add_parser("count", help="generator and source counts per codim")
    _add_common(p, primes=False)
    p.add_argument("--codim-max", type=int, default=None, help="default g + 1")
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")

    p = sub.add_parser("relmat", help="export one relation matrix as triples")
    _add_common(p)
    p.add_argument("--codim", type=int, required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("pushforward", help="dimensions on M_g from pushed relations")
    _add_common(p)
    p.add_argument("--codim-max", type=int, default=None, help="default g")
    _add_output(p)

    p = sub.add_parser("verify", help="run identity and table checks")
    p.add_argument("selector", choices=("morita", "sl2", "tables", "gorenstein"))
    p.add_argument("--genus", type=int, action="append", dest="genera",
                   help="repeatable; defaults depend on the selector")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--prime", type=int, action="append", dest="primes")
    return parser


def _context(args) -> GenusContext:
    threads = args.threads
    if threads is None:
        threads = int(os.environ.get("TAUT_THREADS", "1") or 1)
    try:
        return GenusContext(args.genus, tuple(getattr(args, "primes", None) or DEFAULT_PRIMES), threads)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _moduli(args) -> list:
    moduli = list(args.primes or DEFAULT_PRIMES)
    if getattr(args, "exact", False):
        moduli.append(0)
    return moduli


def _emit(report, args) -> None:
    text = report.to_json() if args.format == "json" else report.to_csv()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _codim_range(args, default_max: int) -> range:
    lo = getattr(args, "codim_min", 0)
    hi = default_max if args.codim_max is None else args.codim_max
    if lo < 0 or hi < lo:
        raise UsageError(f"bad codim range {lo}..{hi}")
    return range(lo, hi + 1)


def cmd_dims(args) -> int:
    ctx = _context(args)
    expected = None
    if args.expected:
        try:
            expected = ExpectedDims.load(args.expected)
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read expected dims: {exc}") from exc
        if expected.genus != ctx.genus:
            raise UsageError(f"expected dims are for genus {expected.genus}, not {ctx.genus}")
    report, _ = dims_report(ctx, _codim_range(args, ctx.genus + 1), _moduli(args), args.order,
                            expected, args.strategy, early_stop=not args.no_early_stop)
    _emit(report, args)
    for name, ok in report.checks.items():
        if not ok:
            log.warning("mismatch: %s", name)
    return EXIT_OK


def cmd_count(args) -> int:
    ctx = _context(args)
    hi = ctx.genus + 1 if args.codim_max is None else args.codim_max
    if hi < 0:
        raise UsageError("codim-max must be nonnegative")
    rows = count_table(ctx, hi)
    w = 2 * ctx.genus + 2
    if args.format == "json":
        print(json.dumps({"genus": ctx.genus, "Mon": [r[1] for r in rows], "mon": [r[2] for r in rows]}))
    elif args.format == "csv":
        print("codim,Mon,mon")
        for i, a, b in rows:
            print(f"{i},{a},{b}")
    else:
        print(f"{'i':>3} {'#Mon_(0,2i)':>12} {f'#mon_({w},2i)':>14}")
        for i, a, b in rows:
            print(f"{i:>3} {a:>12} {b:>14}")
    return EXIT_OK


def cmd_relmat(args) -> int:
    ctx = _context(args)
    if args.codim < 0:
        raise UsageError("codim must be nonnegative")
    modulus = 0 if args.exact else (args.primes or DEFAULT_PRIMES)[0]
    plan = GenerationPlan(ctx.genus, args.codim, args.codim, order=args.order, modulus=modulus,
                          strategy=args.strategy)
    ncols = len(column_zero_basis(ctx, args.codim))
    rows = write_triplets(args.out, iter_blocks(ctx, plan, args.codim), ncols, modulus, ctx.genus, args.codim)
    log.info("wrote %d x %d matrix to %s", rows, ncols, args.out)
    return EXIT_OK


def cmd_pushforward(args) -> int:
    ctx = _context(args)
    report, _ = mg_report(ctx, _codim_range(args, ctx.genus), _moduli(args), args.order, args.strategy)
    _emit(report, args)
    return EXIT_OK


def cmd_verify(args) -> int:
    results = []
    if args.selector == "morita":
        for g in args.genera or range(2, 11):
            results += verify_morita(GenusContext(g))
    elif args.selector == "sl2":
        results += verify_sl2_suite(tuple(args.genera or (3, 5, 8)), args.trials, args.seed)
    elif args.selector == "tables":
        results += verify_tables()
    else:
        moduli = list(args.primes or DEFAULT_PRIMES)
        for g in args.genera or range(4, 9):
            ctx = GenusContext(g)
            rep, runs = dims_report(ctx, range(0, g + 2), moduli)
            results += gorenstein_report(rep.dims, g - 1, mg1_free_range(g), f"Mg1 g={g}")
            mg, _ = mg_report(ctx, range(0, g + 1), moduli, runs=runs)
            results += gorenstein_report(mg.dims, g - 2, mg_free_range(g), f"Mg g={g}")
    for r in results:
        print(r.line())
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_OK if not failed else EXIT_CHECK


COMMANDS = {
    "dims": cmd_dims,
    "count": cmd_count,
    "relmat": cmd_relmat,
    "pushforward": cmd_pushforward,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    t0 = time.perf_counter()
    try:
        code = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"tautring: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RankDisagreement as exc:
        print(f"tautring: {exc}", file=sys.stderr)
        return EXIT_DISAGREE
    except Exception as exc:  # noqa: BLE001
        log.debug("internal error", exc_info=True)
        print(f"tautring: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    log.info("done in %.1fs", time.perf_counter() - t0)
    return code


if __name__ == "__main__":
    sys.exit(main())
