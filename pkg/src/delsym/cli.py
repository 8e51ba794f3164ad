"""Command line front end.

Exit status: 0 when the command ran and every check it embeds passed, 1 when
a mathematical check failed (the report is still written), 2 for usage or
input errors.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import time
from datetime import datetime, timezone
from importlib.metadata import PackageNotFoundError, version as _pkg_version

from . import report as rpt
from .bitstring import BitString
from .capacity import DEFAULT_MAX_ITER, DEFAULT_TOL, InputDistribution, capacity_report
from .channel import BDC, BSC, ChannelParam, rank_exact, sampling_check, transition_matrix
from .classify import DEFAULT_ENTROPY_TOL, verify_conjecture
from .errors import InputError
from .symmetry import (
    KLEIN_GROUP,
    as_table,
    exhaustive_symmetry_search,
    identity_permutation,
    lp_permutations,
    orbit_count_burnside,
    orbit_partition,
    perm_symmetry_report,
    reversal_permutation,
    table_to_pairs,
)

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE = 0, 1, 2
STANDARD_MAX_N = 12
EXTENDED_MAX_N = 14


def tool_version() -> str:
    try:
        return _pkg_version("delsym")
    except PackageNotFoundError:
        return "0+unknown"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_common(p, *, d=False, channel=False, fmt=None, plot=False):
    p.add_argument("--n", type=int, required=True)
    if d:
        p.add_argument("--d", default="1/2", help="deletion probability as a/b (default 1/2)")
    if channel:
        p.add_argument("--channel", choices=["bdc", "bsc"], required=True)
        p.add_argument("--param", required=True, help="channel probability, a/b or decimal")
    if fmt:
        p.add_argument("--format", choices=["json", "csv"], default=fmt)
    if plot:
        p.add_argument("--plot", metavar="PATH", help="also render a figure to PATH")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="delsym", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {tool_version()}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    _add_common(sub.add_parser("orbits", help="flip/reversal orbits with a Burnside cross-check"))

    p = sub.add_parser("entropy-classes", help="per-input orbit, fingerprint class and entropy")
    _add_common(p, d=True, fmt="csv", plot=True)
    p.add_argument("--tol", type=float, default=DEFAULT_ENTROPY_TOL)
    p.add_argument("--extended", action="store_true", help="allow n = 13, 14")

    p = sub.add_parser("verify-conjecture", help="compare orbit, fingerprint and entropy partitions")
    _add_common(p, d=True, plot=True)
    p.add_argument("--tol", type=float, default=DEFAULT_ENTROPY_TOL)
    p.add_argument("--extended", action="store_true", help="allow n = 13, 14")

    p = sub.add_parser("perm-search", help="index permutations commuting with the channel")
    _add_common(p, d=True)
    p.add_argument("--channel", choices=["bdc", "bsc"], default="bdc")
    p.add_argument("--param", help="channel probability; overrides --d")

    p = sub.add_parser("exhaustive-search", help="all bijections of {0,1}^n commuting with the channel")
    _add_common(p, d=True)
    p.add_argument("--channel", choices=["bdc", "bsc"], default="bdc")
    p.add_argument("--param", help="channel probability; overrides --d")

    _add_common(sub.add_parser("lp-enum", help="permutations with the adjacency-preserving property"))

    _add_common(sub.add_parser("rank", help="exact rank of the transition matrix"), channel=True)

    p = sub.add_parser("capacity", help="Blahut-Arimoto maximiser and invariance gap")
    _add_common(p, channel=True, plot=True)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER)
    p.add_argument("--seed", type=int, help="start from a seeded random distribution instead of uniform")

    _add_common(sub.add_parser("matrix", help="export the exact transition matrix"), channel=True, fmt="csv")

    p = sub.add_parser("sample-check", help="Monte Carlo frequencies against the exact output law")
    p.add_argument("--x", required=True, help="input bits, e.g. 0110")
    p.add_argument("--d", default="1/2")
    p.add_argument("--channel", choices=["bdc", "bsc"], default="bdc")
    p.add_argument("--trials", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--plot", metavar="PATH")
    p.add_argument("--out", metavar="PATH")
    return parser


def _param(kind: str, text: str) -> ChannelParam:
    return ChannelParam(BDC if kind.lower() == "bdc" else BSC, text)


def _search_param(args) -> ChannelParam:
    return _param(args.channel, args.param if args.param else args.d)


def _check_range(n: int, lo: int, hi: int, what: str):
    if not lo <= n <= hi:
        raise InputError(f"{what}: --n must lie in [{lo}, {hi}], got {n}")


def _classify_range(args):
    hi = EXTENDED_MAX_N if args.extended else STANDARD_MAX_N
    if args.n > STANDARD_MAX_N and not args.extended and args.n <= EXTENDED_MAX_N:
        raise InputError(f"n={args.n} needs --extended")
    _check_range(args.n, 1, hi, args.command)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _with_meta(payload: dict, argv: list[str], started: datetime, t0: float) -> dict:
    payload = dict(payload)
    payload["meta"] = {
        "tool": "delsym",
        "version": tool_version(),
        "invocation": ["delsym", *argv],
        "started_utc": started.isoformat(timespec="seconds"),
        "wall_clock_ms": round((time.perf_counter() - t0) * 1e3, 3),
    }
    return payload


def cmd_orbits(args):
    _check_range(args.n, 1, EXTENDED_MAX_N, "orbits")
    part = orbit_partition(args.n)
    burnside = orbit_count_burnside(args.n)
    ok = len(part) == burnside and set(part.size_histogram()) <= {2, 4}
    payload = {
        "n": args.n,
        "orbit_count": len(part),
        "burnside_count": burnside,
        "class_size_histogram": {str(k): v for k, v in part.size_histogram().items()},
        "classes": [[rpt.label(x) for x in c] for c in part.classes],
    }
    return payload, ok


def cmd_verify(args):
    _classify_range(args)
    rep = verify_conjecture(args.n, args.d, args.tol, args.threads)
    if args.plot:
        from .plotting import entropy_figure

        entropy_figure(rep, args.plot)
    ok = rep.all_equal and rep.orbit_refines_fingerprint and rep.burnside_matches
    return rep.to_dict(), ok


def cmd_entropy_classes(args):
    _classify_range(args)
    rep = verify_conjecture(args.n, args.d, args.tol, args.threads)
    if args.plot:
        from .plotting import entropy_figure

        entropy_figure(rep, args.plot)
    ok = rep.orbit_refines_fingerprint
    if args.format == "csv":
        return rpt.entropy_classes_csv(rep), ok
    rows = [dict(zip(rpt.ENTROPY_CLASSES_HEADER, r)) for r in rpt.entropy_classes_rows(rep)]
    return {"n": args.n, "d": rep.d.text(), "rows": rows}, ok


def cmd_perm_search(args):
    _check_range(args.n, 2, 7, "perm-search")
    param = _search_param(args)
    rep = perm_symmetry_report(args.n, param, args.threads)
    if param.kind == BDC:
        expected = sorted({identity_permutation(args.n), reversal_permutation(args.n)})
        ok = rep.passing == expected
    else:
        ok = len(rep.passing) == math.factorial(args.n)
    return rep.to_dict(), ok


def cmd_exhaustive(args):
    _check_range(args.n, 1, 3, "exhaustive-search")
    param = _search_param(args)
    rep = exhaustive_symmetry_search(args.n, param, args.threads)
    klein = {as_table(g, args.n) for g in KLEIN_GROUP}
    ok = klein <= set(rep.passing)
    payload = rep.to_dict()
    payload["passing"] = [table_to_pairs(t, args.n) for t in rep.passing]
    payload["contains_flip_reversal_group"] = ok
    return payload, ok


def cmd_lp_enum(args):
    _check_range(args.n, 1, 9, "lp-enum")
    perms = lp_permutations(args.n)
    expected = sorted({identity_permutation(args.n), reversal_permutation(args.n)})
    ok = perms == expected
    return {"n": args.n, "permutations": [list(p) for p in perms], "count": len(perms)}, ok


def cmd_rank(args):
    _check_range(args.n, 1, STANDARD_MAX_N, "rank")
    param = _param(args.channel, args.param)
    r = rank_exact(transition_matrix(args.n, param))
    full = 1 << args.n
    payload = {"channel": param.kind, "param": param.text(), "n": args.n, "rank": r, "full_rank": r == full}
    return payload, r == full


def cmd_capacity(args):
    _check_range(args.n, 1, 10, "capacity")
    param = _param(args.channel, args.param)
    init = InputDistribution.random(args.n, args.seed) if args.seed is not None else None
    rep = capacity_report(transition_matrix(args.n, param), args.tol, args.max_iter, init)
    if args.plot:
        from .plotting import distribution_figure

        distribution_figure(rep, args.plot)
    ok = rep.result.converged and rep.result.invariance_gap <= 1e-6
    return rep.to_dict(), ok


def cmd_matrix(args):
    _check_range(args.n, 1, STANDARD_MAX_N, "matrix")
    m = transition_matrix(args.n, _param(args.channel, args.param))
    ok = all(s == 1 for s in m.row_sums_exact())
    if args.format == "csv":
        return rpt.matrix_csv(m), ok
    return rpt.matrix_json(m), ok


def cmd_sample_check(args):
    x = BitString.parse(args.x)
    param = _param(args.channel, args.d)
    rows = sampling_check(x, param, args.trials, args.seed)
    if args.plot:
        from .plotting import sample_figure

        sample_figure(rows, args.plot)
    ok = all(r["within"] for r in rows)
    payload = {
        "x": args.x,
        "channel": param.kind,
        "param": param.text(),
        "trials": args.trials,
        "seed": args.seed,
        "generator": "numpy PCG64",
        "all_within_3_sigma": ok,
        "outputs": rows,
    }
    return payload, ok


COMMANDS = {
    "orbits": cmd_orbits,
    "entropy-classes": cmd_entropy_classes,
    "verify-conjecture": cmd_verify,
    "perm-search": cmd_perm_search,
    "exhaustive-search": cmd_exhaustive,
    "lp-enum": cmd_lp_enum,
    "rank": cmd_rank,
    "capacity": cmd_capacity,
    "matrix": cmd_matrix,
    "sample-check": cmd_sample_check,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    started = datetime.now(timezone.utc)
    t0 = time.perf_counter()
    try:
        if getattr(args, "threads", 1) < 1:
            raise InputError("--threads must be at least 1")
        result, ok = COMMANDS[args.command](args)
    except InputError as exc:
        print(f"delsym {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if isinstance(result, dict):
        result = rpt.dumps(_with_meta(result, argv, started, t0))
    _emit(result, getattr(args, "out", None))
    return EXIT_OK if ok else EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
