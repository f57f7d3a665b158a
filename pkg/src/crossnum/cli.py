"""Command-line front end.  Every command prints one JSON document (keys sorted).

Exit codes: 0 success, 1 a mathematical statement failed, 2 usage or input
error, 3 a search hit its resource limit.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .certificates import INVARIANTS, load_and_verify, make_certificate
from .extremal import (WitnessError, classify_structure, extremal_minimal_zero_sum,
                       extremal_zero_sum_free)
from .groups import GroupError, parse_group
from .invariants import (conjecture_verdict, frac_dict, girard_bruteforce_D,
                         girard_bruteforce_eta, girard_formula, is_two_small, is_wide)
from .search import SearchLimitExceeded, SearchLimits
from .sequences import SequenceError, sequence_from_dict, terms_to_list
from .sweep import run_sweep
from .transforms import (HypothesisError, floor_condition1, floor_condition2, floor_sum_bound1,
                         floor_sum_bound2, projection_merge_pq, projection_merge_pqr)

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _emit(doc, out: str | None = None) -> None:
    text = json.dumps(doc, sort_keys=True, indent=2)
    print(text)
    if out:
        Path(out).write_text(text + "\n")


def _limits(args) -> SearchLimits:
    env = SearchLimits.from_env()
    return SearchLimits(
        args.max_nodes if args.max_nodes is not None else env.max_nodes,
        args.max_seconds if args.max_seconds is not None else env.max_seconds,
        args.max_length if args.max_length is not None else env.max_length,
    )


def _group(args):
    return parse_group(args.group)


# -- commands ---------------------------------------------------------------------

def cmd_invariants(args) -> int:
    G = _group(args)
    with_ = tuple("s_egz" if w == "s" else w for w in args.with_ or ())
    report = conjecture_verdict(G, _limits(args), witnesses="first", workers=args.workers,
                                with_=with_)
    _emit(report.to_dict(), args.out)
    if report.partial:
        return EXIT_LIMIT
    return EXIT_VIOLATION if report.violation else EXIT_OK


def cmd_sweep(args) -> int:
    def progress(report):
        if args.verbose:
            print(f"{report.group.text()}: k={report.k_little} K={report.k_big}", file=sys.stderr)

    summary = run_sweep(args.max_order, args.out, resume=args.resume, limits=_limits(args),
                        workers=args.workers, progress=progress)
    _emit(summary.to_dict())
    return summary.exit_code


def cmd_extremal(args) -> int:
    G = _group(args)
    finder = extremal_zero_sum_free if args.kind == "zsf" else extremal_minimal_zero_sum
    seqs = finder(G, _limits(args), workers=args.workers)
    rows = []
    failed = 0
    for S in seqs:
        row = {"terms": terms_to_list(S), "cross_number": frac_dict(S.cross_number())}
        if args.classify:
            verdict = classify_structure(S, args.kind)
            row["structure"] = verdict.to_dict()
            failed += not verdict.decomposes
        rows.append(row)
    doc = {"group": G.text(), "kind": args.kind, "count": len(rows), "sequences": rows}
    if args.classify:
        doc["all_pass"] = failed == 0
    _emit(doc, args.out)
    return EXIT_VIOLATION if failed else EXIT_OK


def cmd_predicate(args) -> int:
    test = is_wide if args.name == "wide" else is_two_small
    _emit({"predicate": args.name, "p": args.p, "n": args.n, "value": test(args.p, args.n)})
    return EXIT_OK


def cmd_girard(args) -> int:
    G = _group(args)
    value, params = girard_formula(G, args.dprime, args.d)
    doc = {"group": G.text(), "dprime": args.dprime, "d": args.d, "formula": value,
           "params": params.to_dict()}
    code = EXIT_OK
    if args.check:
        brute = girard_bruteforce_D(G, args.dprime, args.d, _limits(args))
        doc["bruteforce_D"] = brute
        doc["agree"] = brute == value
        doc["bruteforce_eta"] = girard_bruteforce_eta(G, args.dprime, args.d, _limits(args))
        code = EXIT_OK if brute == value else EXIT_VIOLATION
    _emit(doc)
    return code


def cmd_transform(args) -> int:
    try:
        data = json.loads(Path(args.sequence).read_text())
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read sequence file: {exc}") from exc
    G = parse_group(args.group) if args.group else None
    if G is not None and "group" in data and parse_group(str(data["group"])) != G:
        raise UsageError(f"sequence file group {data['group']} does not match -g {args.group}")
    S = sequence_from_dict(data, G)
    ledger = projection_merge_pq(S) if args.pipeline == "pq" else projection_merge_pqr(S)
    doc = ledger.to_dict()
    doc["sound"] = ledger.sound
    _emit(doc, args.out)
    return EXIT_OK if ledger.sound else EXIT_VIOLATION


def cmd_lemma(args) -> int:
    try:
        t = [Fraction(x) for x in args.t.split(",")]
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad --t list: {exc}") from exc
    bound, cond = (floor_sum_bound1, floor_condition1) if args.name == "floor1" else \
        (floor_sum_bound2, floor_condition2)
    res = bound(t, args.p, args.b)
    expected_tight = cond(t, args.b)
    _emit({"lemma": args.name, "t": [str(x) for x in t], "p": args.p, "b": args.b,
           "lhs": frac_dict(res.lhs), "rhs": frac_dict(res.rhs), "lhs_text": str(res.lhs),
           "rhs_text": str(res.rhs), "holds": res.holds, "tight": res.is_tight,
           "tight_condition": expected_tight})
    return EXIT_OK if res.holds and res.is_tight == expected_tight else EXIT_VIOLATION


def cmd_certify(args) -> int:
    G = _group(args)
    cert = make_certificate(G, args.invariant, _limits(args), workers=args.workers)
    _emit(cert, args.out)
    return EXIT_LIMIT if cert["partial"] else EXIT_OK


def cmd_verify(args) -> int:
    result = load_and_verify(args.certificate)
    _emit({"status": result.status, "messages": result.messages})
    return result.exit_code


# -- parser -----------------------------------------------------------------------

def _add_limits(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-nodes", type=int, default=None,
                   help="node budget per search (default: CROSSNUM_MAX_NODES)")
    p.add_argument("--max-seconds", type=float, default=None,
                   help="time budget per search (default: CROSSNUM_MAX_SECONDS)")
    p.add_argument("--max-length", type=int, default=None,
                   help="longest sequence explored (default: CROSSNUM_MAX_LENGTH)")
    p.add_argument("--workers", type=int, default=1, help="worker processes")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="crossnum",
                                     description="Exact cross numbers of finite abelian groups.")
    sub = parser.add_subparsers(dest="command", required=True)
    group_help = "group as '4,2,3' or 'C4xC2xC3'; '1' is the trivial group"

    p = sub.add_parser("invariants", help="k, K, closed forms and verdicts for one group")
    p.add_argument("-g", "--group", required=True, help=group_help)
    p.add_argument("--with", dest="with_", action="append", choices=("davenport", "eta", "s"),
                   help="also compute D, eta or s (repeatable)")
    p.add_argument("-o", "--out", help="also write the report here")
    _add_limits(p)
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("sweep", help="check every group of order 2..max-order")
    p.add_argument("--max-order", type=int, required=True)
    p.add_argument("--out", required=True, help="JSONL results path")
    p.add_argument("--resume", action="store_true", help="skip groups already in --out")
    p.add_argument("-v", "--verbose", action="store_true")
    _add_limits(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("extremal", help="list extremal sequences")
    p.add_argument("-g", "--group", required=True, help=group_help)
    p.add_argument("--kind", choices=("zsf", "minimal"), default="zsf")
    p.add_argument("--classify", action="store_true", help="check primary decomposition")
    p.add_argument("-o", "--out")
    _add_limits(p)
    p.set_defaults(func=cmd_extremal)

    p = sub.add_parser("predicate", help="wide / two-small divisor-sum tests")
    p.add_argument("name", choices=("wide", "two-small"))
    p.add_argument("-p", type=int, required=True)
    p.add_argument("-n", type=int, required=True)
    p.set_defaults(func=cmd_predicate)

    p = sub.add_parser("girard", help="Girard constants D_(d',d)")
    p.add_argument("-g", "--group", required=True, help=group_help)
    p.add_argument("--dprime", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--check", action="store_true", help="compare with brute force")
    _add_limits(p)
    p.set_defaults(func=cmd_girard)

    p = sub.add_parser("transform", help="run a projection-merge pipeline on a sequence file")
    p.add_argument("pipeline", choices=("pq", "pqr"))
    p.add_argument("sequence", help="sequence JSON file")
    p.add_argument("-g", "--group", help="optional; must match the file's group")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("lemma", help="evaluate a floor-sum inequality")
    p.add_argument("name", choices=("floor1", "floor2"))
    p.add_argument("--t", required=True, help="comma-separated rationals, e.g. 1/2,3/4")
    p.add_argument("-p", type=int, required=True)
    p.add_argument("-b", type=int, required=True)
    p.set_defaults(func=cmd_lemma)

    p = sub.add_parser("certify", help="write a re-checkable certificate")
    p.add_argument("-g", "--group", required=True, help=group_help)
    p.add_argument("--invariant", choices=INVARIANTS, required=True)
    p.add_argument("-o", "--out")
    _add_limits(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("verify", help="re-check a certificate")
    p.add_argument("certificate")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except SearchLimitExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except WitnessError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except (UsageError, GroupError, SequenceError, HypothesisError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
