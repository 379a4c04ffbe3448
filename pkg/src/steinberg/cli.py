"""Command-line front end.

Exit codes: 0 all checks pass, 1 a verification failed, 2 bad input or
budget exhaustion.  --json switches every command to a single JSON
document on stdout; global flags may appear before or after the
subcommand words.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import BudgetExceededError, DEFAULT_SIMPLEX_BUDGET, VerificationFailure
from .complexes import reduced_homology_ranks, tits_building
from .flags import probe_report
from .quadratic import fundamental_unit, log_embedding, make_order, order_descriptor
from .stmodule import (
    CharacterTwist,
    apartment_span_rank,
    coinvariants_dim,
    gl_generators,
    sl_generators,
    steinberg_module,
    trivial_generators,
)
from .verify import bounds_report, survey, verify_example_1_2

_FLOAT_NOTE = "50 significant digits internally; printed at double precision"


def _add_common(parser, root):
    default = argparse.SUPPRESS if not root else None
    parser.add_argument(
        "--json",
        action="store_true",
        **({"default": False} if root else {"default": argparse.SUPPRESS}),
        help="emit one JSON document instead of text",
    )
    parser.add_argument(
        "--cache", default=default, help="JSON-lines cache file for survey cells"
    )
    parser.add_argument(
        "--budget",
        type=int,
        default=None if root else argparse.SUPPRESS,
        help=f"simplex budget (default {DEFAULT_SIMPLEX_BUDGET})",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="steinberg",
        description="Exact invariants of buildings, Steinberg spaces, and quadratic orders",
    )
    _add_common(parser, root=True)
    sub = parser.add_subparsers(dest="command", required=True)

    ring = sub.add_parser("ring", help="quadratic order invariants")
    ring_sub = ring.add_subparsers(dest="subcommand", required=True)
    ring_info = ring_sub.add_parser("info", help="units, class numbers, embeddings")
    ring_info.add_argument("--d", type=int, required=True)
    _add_common(ring_info, root=False)
    ring_info.set_defaults(run=_cmd_ring_info)

    building = sub.add_parser("building", help="finite building computations")
    building_sub = building.add_subparsers(dest="subcommand", required=True)
    homology = building_sub.add_parser("homology", help="reduced homology ranks")
    homology.add_argument("--n", type=int, required=True)
    homology.add_argument("--q", type=int, required=True)
    _add_common(homology, root=False)
    homology.set_defaults(run=_cmd_building_homology)

    st = sub.add_parser("steinberg", help="Steinberg space computations")
    st_sub = st.add_subparsers(dest="subcommand", required=True)
    apartments = st_sub.add_parser("apartments", help="span rank of apartment classes")
    apartments.add_argument("--n", type=int, required=True)
    apartments.add_argument("--q", type=int, required=True)
    _add_common(apartments, root=False)
    apartments.set_defaults(run=_cmd_apartments)
    coinv = st_sub.add_parser("coinv", help="coinvariant dimension under a group")
    coinv.add_argument("--n", type=int, required=True)
    coinv.add_argument("--q", type=int, required=True)
    coinv.add_argument(
        "--group",
        required=True,
        help="gl | sl | trivial | json:<list of matrices>",
    )
    coinv.add_argument("--twist", default=None, help="json list of +1/-1 per generator")
    _add_common(coinv, root=False)
    coinv.set_defaults(run=_cmd_coinv)

    bounds = sub.add_parser("bounds", help="formulas, criteria, and duality verdicts")
    bounds.add_argument("--d", type=int, required=True)
    bounds.add_argument("--n", type=int, required=True)
    _add_common(bounds, root=False)
    bounds.set_defaults(run=_cmd_bounds)

    verify = sub.add_parser("verify", help="end-to-end verification pipelines")
    verify_sub = verify.add_subparsers(dest="subcommand", required=True)
    example = verify_sub.add_parser("example-1-2", help="level-2 rank-2 pipeline")
    _add_common(example, root=False)
    example.set_defaults(run=_cmd_example)

    flags = sub.add_parser("flags", help="integer flag and truncation probes")
    flags_sub = flags.add_subparsers(dest="subcommand", required=True)
    probe = flags_sub.add_parser("probe", help="connectivity probe of a truncation")
    probe.add_argument("--n", type=int, required=True)
    probe.add_argument("--m", type=int, required=True)
    probe.add_argument("--height", type=int, required=True)
    _add_common(probe, root=False)
    probe.set_defaults(run=_cmd_probe)

    surv = sub.add_parser("survey", help="verdict table over (d, n) grids")
    surv.add_argument("--d", required=True, help="comma list and/or a..b ranges")
    surv.add_argument("--n", required=True, help="comma list and/or a..b ranges")
    _add_common(surv, root=False)
    surv.set_defaults(run=_cmd_survey)

    return parser


def _budget(args) -> int:
    return args.budget if args.budget is not None else DEFAULT_SIMPLEX_BUDGET


def _emit(args, payload: dict, text_lines) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def _cmd_ring_info(args) -> int:
    order = make_order(args.d)
    desc = order_descriptor(order)
    payload = dict(desc)
    lines = [
        f"d = {desc['d']}  discriminant = {desc['D']}  signature = {tuple(desc['signature'])}",
        f"h = {desc['h']}  h_narrow = {desc['h_narrow']}  norm -1 unit: {desc['norm_minus_one']}",
    ]
    if desc["fundamental_unit"] is not None:
        u = desc["fundamental_unit"]
        emb = log_embedding(order, fundamental_unit(order))
        payload["unit_log_embedding"] = list(emb)
        payload["float_note"] = _FLOAT_NOTE
        lines.append(
            f"fundamental unit = ({u['a']} + {u['b']}*sqrt({args.d}))/{u['denom']}"
            f"  norm = {u['norm']}"
        )
        lines.append(f"log embedding = {emb}  ({_FLOAT_NOTE})")
    _emit(args, payload, lines)
    return 0


def _cmd_building_homology(args) -> int:
    X = tits_building(args.n, args.q, budget=_budget(args))
    ranks = reduced_homology_ranks(X)
    top = args.n - 2
    expected = args.q ** (args.n * (args.n - 1) // 2)
    concentrated = all(r == 0 for k, r in ranks.items() if k != top)
    ok = concentrated and ranks.get(top, 0) == expected
    payload = {
        "n": args.n,
        "q": args.q,
        "cells": [X.n_cells(k) for k in range(X.dimension + 1)],
        "reduced_ranks": {str(k): r for k, r in ranks.items()},
        "top_degree": top,
        "expected_top_rank": expected,
        "concentrated": concentrated,
        "passes": ok,
    }
    lines = [
        f"cells per dimension: {payload['cells']}",
        f"reduced homology ranks: {ranks}",
        f"top rank {ranks.get(top, 0)} vs q^(n(n-1)/2) = {expected}: "
        + ("ok" if ok else "MISMATCH"),
    ]
    _emit(args, payload, lines)
    return 0 if ok else 1


def _cmd_apartments(args) -> int:
    module = steinberg_module(args.n, args.q, budget=_budget(args))
    span = apartment_span_rank(module)
    ok = span == module.dim
    payload = {
        "n": args.n,
        "q": args.q,
        "steinberg_dim": module.dim,
        "apartment_span_rank": span,
        "passes": ok,
    }
    lines = [
        f"Steinberg dimension {module.dim}, apartment span rank {span}: "
        + ("ok" if ok else "MISMATCH")
    ]
    _emit(args, payload, lines)
    return 0 if ok else 1


def _parse_matrices(text):
    data = json.loads(text[len("json:"):] if text.startswith("json:") else text)
    return [tuple(tuple(int(x) for x in row) for row in g) for g in data]


def _cmd_coinv(args) -> int:
    if args.group == "gl":
        gens = gl_generators(args.n, args.q)
    elif args.group == "sl":
        gens = sl_generators(args.n, args.q)
    elif args.group == "trivial":
        gens = trivial_generators(args.n)
    else:
        gens = _parse_matrices(args.group)
    module = steinberg_module(args.n, args.q, budget=_budget(args))
    action = module.action(gens)
    twist = None
    if args.twist is not None:
        signs = json.loads(
            args.twist[len("json:"):] if args.twist.startswith("json:") else args.twist
        )
        twist = CharacterTwist(tuple(int(s) for s in signs))
    dim = coinvariants_dim(action, twist)
    payload = {
        "n": args.n,
        "q": args.q,
        "group": args.group,
        "twisted": twist is not None,
        "steinberg_dim": module.dim,
        "coinvariants_dim": dim,
    }
    _emit(args, payload, [f"coinvariants dimension = {dim} (module dimension {module.dim})"])
    return 0


def _cmd_bounds(args) -> int:
    report = bounds_report(args.d, args.n)
    payload = report.to_dict()
    inv = {k: v["value"] for k, v in report.invariants.items()}
    lines = [
        f"d = {args.d}, n = {args.n}: signature {tuple(inv['signature'])}, "
        f"h = {inv['h']}, h_narrow = {inv['h_narrow']}, norm -1: {inv['norm_minus_one']}",
        f"vcd_gl = {inv['vcd_gl']}  vcd_sl = {inv['vcd_sl']}  "
        f"bordification_dim = {inv['bordification_dim']}",
        f"vanishing applies: {report.verdicts['vanishing_applies']}"
        + (
            f" (reasons: {', '.join(report.verdicts['vanishing_reasons'])})"
            if report.verdicts["vanishing_reasons"]
            else ""
        ),
        f"lower bound: {report.verdicts['lower_bound']}",
        f"dualizing type: {report.verdicts['dualizing_type']}",
    ]
    _emit(args, payload, lines)
    return 0 if report.passed else 1


def _cmd_example(args) -> int:
    report = verify_example_1_2(budget=_budget(args))
    payload = report.to_dict()
    lines = [f"{name}: {'pass' if ok else 'FAIL'}" for name, ok in report.verdicts.items()]
    if report.failures:
        lines.append("failures: " + "; ".join(report.failures))
    _emit(args, payload, lines)
    return 0 if report.passed else 1


def _cmd_probe(args) -> int:
    payload = probe_report(args.n, args.m, args.height, budget=_budget(args))
    lines = [
        f"n = {payload['n']}, m = {payload['m']}, H = {payload['H']}",
        f"reduced ranks in degrees 0..{max(args.n - 2, 0)}: {payload['ranks']}",
        f"witness failures: {payload['witnesses_failed']}",
        f"minimal connected height observed: {payload['minimal_connected_H']}",
    ]
    _emit(args, payload, lines)
    return 0


def _parse_range(text):
    values = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if ".." in chunk:
            lo, hi = chunk.split("..", 1)
            values.extend(range(int(lo), int(hi) + 1))
        else:
            values.append(int(chunk))
    return values


def _cmd_survey(args) -> int:
    d_values = _parse_range(args.d)
    n_values = _parse_range(args.n)
    rows = survey(d_values, n_values, cache_path=args.cache, budget=_budget(args))
    errored = [r for r in rows if r["status"] != "ok"]
    payload = {"rows": rows, "errors": len(errored)}
    lines = []
    for row in rows:
        if row["status"] == "ok":
            v = row["report"]["verdicts"]
            lines.append(
                f"d={row['d']} n={row['n']}: vanishing={v['vanishing_applies']} "
                f"bound={v['lower_bound']} type={v['dualizing_type']}"
            )
        else:
            lines.append(f"d={row['d']} n={row['n']}: ERROR {row['error']}")
    _emit(args, payload, lines)
    return 2 if errored else 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except (VerificationFailure, AssertionError) as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return 1
    except BudgetExceededError as exc:
        print(f"budget error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2


def console_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_entry()
