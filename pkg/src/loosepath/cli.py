"""Command-line interface: ``loosepath <command> ...``.

Exit status: 0 success, 1 verification failure / invariant violation / no
guarantee, 2 usage, parse or threshold error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Sequence

from . import bounds
from .core import Params
from .dfs import FinderResult, find_monochromatic_path
from .errors import (InvariantViolation, LoosePathError, NoGuaranteeError, ParseError, ThresholdError,
                     TooLargeError, ValidationError)
from .formats import Witness, read_witness, write_coloring, write_witness
from .oracle import exhaustive_mono_path_search, generate_coloring, verify_small_ramsey, verify_witness
from .selfish import find_via_reduction

log = logging.getLogger("loosepath")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
CSV_FIELDS = ("k", "l", "r", "n", "seed", "method", "color", "queries", "budget", "ok")


def _add_params(p: argparse.ArgumentParser, *, need_l: bool = True, need_n: bool = True) -> None:
    p.add_argument("-k", type=int, required=True, help="uniformity")
    if need_l:
        p.add_argument("-l", "--ell", dest="ell", type=int, required=True, help="path length (edges)")
    p.add_argument("-r", type=int, required=True, help="number of colors")
    p.add_argument("-n", type=int, required=need_n, default=None, help="vertex count")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="loosepath", description="Monochromatic loose paths in colored hypergraphs.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", help="print thresholds and the bound table")
    _add_params(p, need_n=False)

    p = sub.add_parser("gen", help="write a coloring file")
    p.add_argument("--coloring", required=True, help="constant:C | seed:S | star:V,C1,C2 | planted:S | file:PATH")
    _add_params(p, need_l=False)
    p.add_argument("-o", "--out", required=True)

    p = sub.add_parser("run", help="find a monochromatic loose path")
    p.add_argument("--coloring", required=True)
    _add_params(p)
    p.add_argument("--method", choices=("dfs", "reduction"), default="dfs")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--strict", dest="strict", action="store_true", default=True)
    mode.add_argument("--permissive", dest="strict", action="store_false")
    p.add_argument("--witness-out")
    p.add_argument("--report", help="also write the report as JSON to this file")

    p = sub.add_parser("verify", help="check a witness file against a coloring")
    p.add_argument("--coloring", required=True)
    p.add_argument("--witness", required=True)

    p = sub.add_parser("oracle", help="exhaustive search, or --ramsey for all colorings")
    p.add_argument("--coloring")
    _add_params(p)
    p.add_argument("--color", type=int, action="append", help="restrict to this color (repeatable)")
    p.add_argument("--ramsey", action="store_true", help="check every r-coloring of K_n^(k)")
    p.add_argument("--max-nodes", type=int, default=10 ** 8)
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("bench", help="sweep seeds and emit CSV")
    _add_params(p)
    p.add_argument("--method", choices=("dfs", "reduction"), default="dfs")
    p.add_argument("--kind", choices=("seed", "planted"), default="seed")
    p.add_argument("--seeds", type=int, default=10)
    p.add_argument("--seed-start", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("-o", "--out", help="CSV file (default stdout)")

    p = sub.add_parser("selfcheck", help="run the built-in invariant checks")
    p.add_argument("--quick", action="store_true")
    return parser


def _params(args: argparse.Namespace) -> Params:
    return Params(args.k, getattr(args, "ell", 0), args.r, args.n)


def _finder(method: str):
    return find_monochromatic_path if method == "dfs" else find_via_reduction


# -- commands ----------------------------------------------------------------

def cmd_bounds(args: argparse.Namespace) -> int:
    params = Params(args.k, args.ell, args.r)
    k, ell, r = params.k, params.ell, params.r
    print(f"k={k} l={ell} r={r}")
    if 2 <= r <= k and ell >= 3:
        print(f"n_min_con = {bounds.n_min_con(params)}")
    if ell >= 3:
        print(f"n_min_con2 = {bounds.n_min_con2(params)}")
    if 2 <= r <= k - 1 and ell >= 3:
        print(f"n_min_cor1 = {bounds.n_min_cor1(params)}")
        print(f"n_min_cor1_simple = {bounds.n_min_cor1(params, simplified=True)}")
    for entry in bounds.bound_table(params):
        note = f"  # {entry.note}" if entry.note else ""
        tag = "constructive" if entry.constructive else "existential"
        print(f"{entry.formula_id} = {_fmt(entry.value)}  [{tag}]{note}")
    if 2 <= r <= k:
        for i in range(1, r):
            print(f"round {i}: tau={_fmt(bounds.tau(i, params))} t={_fmt(bounds.t_bin(i, params))} "
                  f"target={_fmt(bounds.round_target(i, params))}")
    return EXIT_OK


def _fmt(x) -> str:
    return str(x.numerator) if getattr(x, "denominator", 1) == 1 else f"{x.numerator}/{x.denominator}"


def cmd_gen(args: argparse.Namespace) -> int:
    params = Params(args.k, 0, args.r, args.n)
    write_coloring(args.out, generate_coloring(args.coloring, params))
    print(f"wrote {args.out}")
    return EXIT_OK


def run_report(result: FinderResult, params: Params, method: str, verified: bool, seconds: float) -> dict:
    st = result.stats
    return {
        "params": {"k": params.k, "l": params.ell, "r": params.r, "n": params.n},
        "method": method,
        "result": {"color": result.color, "witness": list(result.path.sequence)},
        "stats": {"queries": st.queries, "budget": st.budget, "rounds": st.rounds_run,
                  "stuck_events": st.stuck_events, "pad_events": st.pad_events,
                  "wall_time": round(seconds, 6)},
        "verified": verified,
    }


def cmd_run(args: argparse.Namespace) -> int:
    params = _params(args)
    coloring = generate_coloring(args.coloring, params)
    t0 = time.perf_counter()
    result = _finder(args.method)(coloring, params, strict=args.strict)
    seconds = time.perf_counter() - t0
    verdict = verify_witness(coloring, result.path, result.color, params)
    report = run_report(result, params, args.method, bool(verdict), seconds)
    st = report["stats"]
    print(f"method={args.method} k={params.k} l={params.ell} r={params.r} n={params.n}")
    print(f"color={result.color}")
    print("witness=" + " ".join(map(str, result.path.sequence)))
    print(f"queries={st['queries']} budget={st['budget']} rounds={st['rounds']} "
          f"stuck={st['stuck_events']} pads={st['pad_events']}")
    print(f"verified={'yes' if verdict else 'no: ' + verdict.reason}")
    print(f"time={seconds:.3f}s")
    if args.witness_out:
        write_witness(args.witness_out, Witness(params.k, params.ell, params.r, params.require_n(),
                                                result.color, result.path))
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return EXIT_OK if verdict else EXIT_FAIL


def cmd_verify(args: argparse.Namespace) -> int:
    w = read_witness(args.witness)
    params = Params(w.k, w.ell, w.r, w.n)
    coloring = generate_coloring(args.coloring, params)
    verdict = verify_witness(coloring, w.path, w.color, params)
    print("ok" if verdict else f"invalid: {verdict.reason}")
    return EXIT_OK if verdict else EXIT_FAIL


def cmd_oracle(args: argparse.Namespace) -> int:
    params = _params(args)
    n = params.require_n()
    if args.ramsey:
        t0 = time.perf_counter()
        v = verify_small_ramsey(params.k, params.ell, params.r, n, workers=args.workers)
        print(f"every {params.r}-coloring of K_{n}^({params.k}) has a monochromatic loose P_{params.ell}: "
              f"{'yes' if v.holds else 'no'} ({v.colorings} colorings, {time.perf_counter() - t0:.2f}s)")
        if not v.holds and v.counterexample is not None:
            print("counterexample table: " + " ".join(map(str, v.counterexample)))
        return EXIT_OK
    if not args.coloring:
        raise ValidationError("oracle needs --coloring unless --ramsey is given")
    coloring = generate_coloring(args.coloring, params)
    verdict = exhaustive_mono_path_search(coloring, params, args.color, max_nodes=args.max_nodes)
    if verdict:
        print(f"found color={verdict.color} witness={' '.join(map(str, verdict.path.sequence))} "
              f"nodes={verdict.nodes}")
    else:
        print(f"absent: {verdict.certificate}")
    return EXIT_OK


def bench_one(task: tuple[Params, int, str, str]) -> dict:
    params, seed, method, kind = task
    coloring = generate_coloring(f"{kind}:{seed}", params)
    row = {"k": params.k, "l": params.ell, "r": params.r, "n": params.n, "seed": seed, "method": method}
    try:
        res = _finder(method)(coloring, params)
    except LoosePathError as exc:
        return row | {"color": 0, "queries": -1, "budget": -1, "ok": 0, "error": str(exc)}
    ok = bool(verify_witness(coloring, res.path, res.color, params)) and res.stats.queries <= res.stats.budget
    return row | {"color": res.color, "queries": res.stats.queries, "budget": res.stats.budget, "ok": int(ok)}


def cmd_bench(args: argparse.Namespace) -> int:
    params = _params(args)
    tasks = [(params, s, args.method, args.kind) for s in range(args.seed_start, args.seed_start + args.seeds)]
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            rows = list(pool.map(bench_one, tasks))
    else:
        rows = [bench_one(t) for t in tasks]
    out = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        writer = csv.DictWriter(out, fieldnames=CSV_FIELDS, extrasaction="ignore", lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if args.out:
            out.close()
    bad = [r for r in rows if not r["ok"]]
    for r in bad:
        print(f"seed {r['seed']} failed: {r.get('error', 'budget or verification')}", file=sys.stderr)
    return EXIT_FAIL if bad else EXIT_OK


def cmd_selfcheck(args: argparse.Namespace) -> int:
    from .selfcheck import run_selfcheck

    failures = 0
    for name, ok, detail in run_selfcheck(quick=args.quick):
        print(f"{'PASS' if ok else 'FAIL'} {name}" + (f": {detail}" if detail else ""))
        failures += not ok
    return EXIT_FAIL if failures else EXIT_OK


COMMANDS = {
    "bounds": cmd_bounds, "gen": cmd_gen, "run": cmd_run, "verify": cmd_verify,
    "oracle": cmd_oracle, "bench": cmd_bench, "selfcheck": cmd_selfcheck,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (InvariantViolation, NoGuaranteeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (ThresholdError, ParseError, ValidationError, TooLargeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
