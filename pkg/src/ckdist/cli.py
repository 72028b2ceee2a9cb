"""Command-line interface.

Exit codes: 0 success, 1 I/O or parse error, 2 invalid input, 3 computation
guard (node budget or enumeration scale).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import bounds
from .bisimulation import check_bisim, load_relation, minimal_epsilon
from .chain import check_compatible, dump_chain, load_chain
from .distances import ck_truncated, horizon_for_precision
from .exceptions import CKDistError, NodeBudgetExceeded, ParseError
from .product import ProductSpec, encode_product
from .sweeps import FIGURES, figure_csv
from .traces import level_at, tv_direct


def _num(x, digits):
    return format(float(x), f".{digits}g")


def cmd_validate(args, out):
    chain = load_chain(args.chain)
    print(f"valid: {chain.n_states} states, {chain.alphabet_size} labels", file=out)
    print(f"labels: {','.join(chain.labels)}", file=out)


def cmd_tv(args, out):
    a, b = load_chain(args.chain_a), load_chain(args.chain_b)
    level = level_at(a, b, args.horizon)
    print(f"horizon: {args.horizon}", file=out)
    print(f"tv: {_num(level.tv, args.digits)}", file=out)
    print(f"tv_half_sum: {_num(tv_direct(level), args.digits)}", file=out)
    print(f"m_sum: {_num(level.m_sum, args.digits)}", file=out)


def cmd_ck(args, out):
    a, b = load_chain(args.chain_a), load_chain(args.chain_b)
    m = len(check_compatible(a, b))
    k = args.horizon if args.horizon is not None else horizon_for_precision(args.precision, m)
    report = ck_truncated(a, b, k)
    lo, hi = report.interval
    print(f"horizon: {report.horizon}", file=out)
    print(f"s_k: {_num(report.s_k, args.digits)}", file=out)
    print(f"error_bound: {_num(report.error_bound, args.digits)}", file=out)
    print(f"interval: [{_num(lo, args.digits)}, {_num(hi, args.digits)}]", file=out)
    if args.trace:
        for t in report.per_horizon:
            print(
                f"  i={t.i} tv={_num(t.tv, args.digits)} s={_num(t.partial_sum, args.digits)}",
                file=out,
            )


def cmd_bound(args, out):
    d = args.digits
    if args.delta is not None:
        print(f"ck_upper_bound: {_num(bounds.ck_upper_bound(args.delta, args.m), d)}", file=out)
        if args.k is not None:
            print(f"tv_bound: {_num(bounds.tv_bisim_bound(args.delta, args.k), d)}", file=out)
    elif args.d_lower is not None:
        value = bounds.bisim_impossibility_threshold(args.d_lower, args.m)
        print(f"bisim_impossible_up_to: {_num(value, d)}", file=out)
    elif args.d_upper is not None and args.eps is not None:
        print(f"max_safe_horizon: {bounds.max_safe_horizon(args.eps, args.d_upper, args.m)}", file=out)
    elif args.d_upper is not None and args.k is not None:
        value = bounds.tv_from_ck_bound(args.d_upper, args.k, args.m)
        print(f"tv_bound: {_num(value, d)}", file=out)
    else:
        raise _Usage("bound needs --delta, --d-lower, or --d-upper with --eps or --k")


def cmd_bisim(args, out):
    a, b = load_chain(args.chain_a), load_chain(args.chain_b)
    relation = load_relation(args.relation, a, b)
    if args.epsilon is None:
        eps = minimal_epsilon(relation, a, b)
        print(f"minimal_epsilon: {_num(eps, args.digits)}", file=out)
        if eps == 0.0:
            print("exact bisimulation", file=out)
        return
    verdict = check_bisim(relation, args.epsilon, a, b)
    print(f"verdict: {'accept' if verdict.accepted else 'reject'}", file=out)
    print(f"max_gap: {_num(verdict.max_gap, args.digits)}", file=out)
    if verdict.label_mismatch is not None:
        print(f"label_mismatch: {verdict.label_mismatch[0]},{verdict.label_mismatch[1]}", file=out)
    if verdict.witness is not None:
        w = verdict.witness
        set1 = ",".join(a.states[i] for i in sorted(w.closed_set.set1))
        set2 = ",".join(b.states[i] for i in sorted(w.closed_set.set2))
        where = "initial" if w.pair is None else f"{w.pair[0]},{w.pair[1]}"
        print(f"witness: set1={{{set1}}} set2={{{set2}}} at={where} gap={_num(w.gap, args.digits)}", file=out)


def cmd_encode_product(args, out):
    chain = encode_product(ProductSpec.parse(args.params))
    dump_chain(chain, args.out)
    print(f"wrote {args.out}: {chain.n_states} states", file=out)


def cmd_sweep(args, out):
    text = figure_csv(args.figure)
    try:
        Path(args.out).write_text(text, encoding="utf-8", newline="")
    except OSError as exc:
        raise ParseError(f"cannot write {args.out}: {exc}") from None
    print(f"wrote {args.out}: {text.count(chr(10)) - 1} rows", file=out)


class _Usage(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ckdist",
        description="Cantor-Kantorovich distance between labeled Markov chains.",
    )
    parser.add_argument("--digits", type=int, default=12, help="significant digits in output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a chain file")
    p.add_argument("chain")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("tv", help="total-variation distance of the length-k trace distributions")
    p.add_argument("chain_a")
    p.add_argument("chain_b")
    p.add_argument("--horizon", "-k", type=int, required=True)
    p.set_defaults(func=cmd_tv)

    p = sub.add_parser("ck", help="truncated CK distance with certified interval")
    p.add_argument("chain_a")
    p.add_argument("chain_b")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--horizon", "-k", type=int)
    g.add_argument("--precision", type=float, help="target error; picks the horizon")
    p.add_argument("--trace", action="store_true", help="print per-horizon terms")
    p.set_defaults(func=cmd_ck)

    p = sub.add_parser("bound", help="continuity bounds")
    p.add_argument("--delta", type=float, help="bisimilarity tolerance")
    p.add_argument("--d-lower", type=float, help="known lower bound on the CK distance")
    p.add_argument("--d-upper", type=float, help="known upper bound on the CK distance")
    p.add_argument("--eps", type=float, help="trace error tolerance")
    p.add_argument("--k", type=int, help="horizon")
    p.add_argument("--m", type=int, required=True, help="alphabet size")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("bisim", help="check an approximate bisimulation relation")
    p.add_argument("chain_a")
    p.add_argument("chain_b")
    p.add_argument("relation")
    p.add_argument("--epsilon", type=float)
    p.set_defaults(func=cmd_bisim)

    p = sub.add_parser("encode-product", help="write the chain encoding a product distribution")
    p.add_argument("--params", required=True, help='comma-separated, e.g. "0.3,0.9"')
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_encode_product)

    p = sub.add_parser("sweep", help="write figure data as CSV")
    p.add_argument("--figure", type=int, choices=sorted(FIGURES), required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        status = args.func(args, out)
    except _Usage as exc:
        parser.error(str(exc))
    except NodeBudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(
            "hint: lower the horizon or precision, or raise CKDIST_NODE_BUDGET",
            file=sys.stderr,
        )
        return exc.exit_code
    except CKDistError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    return status or 0


if __name__ == "__main__":
    sys.exit(main())
