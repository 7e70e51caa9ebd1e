"""Command-line front end.

Exit codes: 0 success, 1 a verification check failed, 2 unreadable or
malformed input, 3 infeasible instance, 4 enumeration cap exceeded,
5 weight overflow risk, 6 invalid parameters.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from .certify import (DEFAULT_CAP, EXTENSION_CAP, Report, audit_trace, brute_force_optimum,
                      brute_plan, check_exchange_pairs, check_extension_property,
                      compute_F_series)
from .errors import IndMstError, InvalidParams, ParseError
from .graphic import Graph
from .io import emit_instance, emit_plan, gen_corpus, gen_random, parse_instance, plan_document
from .solver import Instance, efficient_scan, greedy_solve, simplified_greedy_solve

CAP_ENV = "INDMST_CAP"

SOLVERS = {
    "greedy": greedy_solve,
    "simplified": simplified_greedy_solve,
    "efficient": lambda inst: efficient_scan(inst).plan,
}


def load_instance(path: str) -> Instance:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    return Instance.from_graph(parse_instance(text))


def default_cap() -> int:
    raw = os.environ.get(CAP_ENV)
    if raw is None:
        return DEFAULT_CAP
    try:
        return int(raw)
    except ValueError:
        raise InvalidParams(f"{CAP_ENV} must be an integer, got {raw!r}") from None


def verify_instance(instance: Instance, cap: int) -> list[Report]:
    """Run every solver and every exhaustive check on one instance."""
    optimum = brute_force_optimum(instance, cap)
    series = compute_F_series(instance, cap)
    scan = efficient_scan(instance, want_trace=True)
    plans = {name: solve(instance) for name, solve in SOLVERS.items() if name != "efficient"}
    plans["efficient"] = scan.plan
    plans["brute"] = brute_plan(instance, cap)

    objectives = Report("objective")
    for name, plan in plans.items():
        check = objectives.add(f"{name} == optimum")
        if plan.objective != optimum:
            check.fail(None, f"{plan.objective} != {optimum}")
        else:
            check.detail = str(optimum)
    bound = objectives.add("optimum == sum of per-period lower bounds")
    if series.total != optimum:
        bound.fail(None, f"{series.total} != {optimum} (series {list(series.values)})")

    reports = [objectives, audit_trace(instance, scan.trace), check_exchange_pairs(instance, scan)]
    if instance.horizon <= EXTENSION_CAP:
        reports.append(check_extension_property(instance))
    else:
        skipped = Report("extension")
        skipped.add("skipped").detail = f"T={instance.horizon} > {EXTENSION_CAP}"
        reports.append(skipped)
    return reports


def _verify_graph(graph: Graph, cap: int) -> tuple[int, list[dict]]:
    instance = Instance.from_graph(graph)
    return instance.horizon, [r.to_dict() for r in verify_instance(instance, cap)]


def _report_lines(reports: list[dict], prefix: str = "") -> list[str]:
    lines = []
    for r in reports:
        for c in r["checks"]:
            status = "PASS" if c["passed"] else "FAIL"
            where = f" at position {c['position']}" if c["position"] is not None else ""
            detail = f": {c['detail']}" if c["detail"] else ""
            lines.append(f"{prefix}{status} {r['title']} / {c['name']}{where}{detail}")
    return lines


def cmd_solve(args) -> int:
    instance = load_instance(args.instance)
    if args.algorithm == "brute":
        plan = brute_plan(instance, args.cap)
    else:
        plan = SOLVERS[args.algorithm](instance)
    extra = None
    if args.trace:
        scan = efficient_scan(instance, want_trace=True)
        extra = {"trace_audit": audit_trace(instance, scan.trace).to_dict()}
    sys.stdout.write(emit_plan(plan, args.output, instance, args.verbose, extra))
    return 0


def cmd_verify(args) -> int:
    if args.corpus is None and args.instance is None:
        raise InvalidParams("give an instance file or --corpus N")
    if args.corpus is not None:
        graphs = list(gen_corpus(args.corpus, args.seed))
        labels = [f"corpus[{i}]" for i in range(len(graphs))]
    else:
        graphs = [load_instance(args.instance).graph]
        labels = [args.instance]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_verify_graph, graphs, [args.cap] * len(graphs)))
    else:
        results = [_verify_graph(g, args.cap) for g in graphs]

    failed = [label for label, (_, reports) in zip(labels, results)
              if not all(r["ok"] for r in reports)]
    if args.output == "json":
        doc = {
            "ok": not failed,
            "instances": [{"label": label, "horizon": t, "reports": reports}
                          for label, (t, reports) in zip(labels, results)],
        }
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    else:
        lines = []
        for label, (t, reports) in zip(labels, results):
            ok = all(r["ok"] for r in reports)
            if len(graphs) == 1 or not ok:
                lines += _report_lines(reports, f"{label}\t")
            else:
                lines.append(f"{label}\tPASS all checks (T={t})")
        lines.append(f"# {len(graphs) - len(failed)}/{len(graphs)} instances passed")
        sys.stdout.write("\n".join(lines) + "\n")
    return 1 if failed else 0


def _snapshot_dict(s) -> dict:
    doc = {
        "position": s.position,
        "element": s.element,
        "initial": sorted(s.initial),
        "ultimate": sorted(s.ultimate),
        "working": sorted(s.working),
        "removed": sorted(s.removed),
        "added": sorted(s.added),
        "exchange": None,
    }
    if s.exchange is not None:
        doc["exchange"] = {"circuit": sorted(s.exchange.circuit), **s.exchange.pair._asdict()}
    return doc


def cmd_trace(args) -> int:
    instance = load_instance(args.instance)
    scan = efficient_scan(instance, want_trace=True)
    audit = audit_trace(instance, scan.trace)
    if args.output == "json":
        doc = {
            "plan": plan_document(scan.plan, instance),
            "exchanges": [list(p) for p in scan.exchanges],
            "trace": [_snapshot_dict(s) for s in scan.trace],
            "audit": audit.to_dict(),
        }
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    else:
        rows = ["position\telement\tinitial\tultimate\tworking\texchange"]
        for s in scan.trace:
            fmt = lambda xs: ",".join(map(str, sorted(xs))) or "-"
            ex = "-" if s.exchange is None else f"{s.exchange.pair.removed}->{s.exchange.pair.added}"
            rows.append(f"{s.position}\t{s.element}\t{fmt(s.initial)}\t{fmt(s.ultimate)}"
                        f"\t{fmt(s.working)}\t{ex}")
        rows += ["# " + line for line in audit.lines()]
        sys.stdout.write("\n".join(rows) + "\n")
    return 0 if audit.ok else 1


def cmd_gen(args) -> int:
    graph = gen_random(args.n, args.m, args.seed, (args.weight_min, args.weight_max),
                       args.e0_fraction)
    sys.stdout.write(emit_instance(graph))
    return 0


def cmd_bench(args) -> int:
    if args.steps < 1:
        raise InvalidParams("--steps must be positive")
    sizes = [max(args.n - 1, args.m >> (args.steps - 1 - i)) for i in range(args.steps)]
    runs = []
    for m in sizes:
        graph = gen_random(args.n, m, args.seed, (args.weight_min, args.weight_max),
                           args.e0_fraction)
        start = time.perf_counter()
        instance = Instance.from_graph(graph)
        plan = efficient_scan(instance).plan
        seconds = time.perf_counter() - start
        ratio = seconds / runs[-1]["seconds"] if runs and runs[-1]["seconds"] > 0 else None
        runs.append({"m": m, "seconds": round(seconds, 4),
                     "ratio": None if ratio is None else round(ratio, 3), "k": plan.k})
    if args.output == "json":
        sys.stdout.write(json.dumps({"n": args.n, "runs": runs}, indent=2) + "\n")
    else:
        rows = ["m\tseconds\tratio\tk"]
        rows += [f"{r['m']}\t{r['seconds']}\t{r['ratio'] if r['ratio'] is not None else '-'}\t{r['k']}"
                 for r in runs]
        sys.stdout.write("\n".join(rows) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="indmst",
        description="Build-order optimisation for incremental minimum spanning tree design.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_gen_flags(p, n, m, wmin, wmax):
        p.add_argument("--n", type=int, default=n, help="vertex count")
        p.add_argument("--m", type=int, default=m, help="edge count")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--e0-fraction", type=float, default=0.5,
                       help="share of edges that already exist")
        p.add_argument("--weight-min", type=int, default=wmin)
        p.add_argument("--weight-max", type=int, default=wmax)

    p = sub.add_parser("solve", help="solve an instance file")
    p.add_argument("instance")
    p.add_argument("--algorithm", choices=[*SOLVERS, "brute"], default="efficient")
    p.add_argument("--output", choices=["json", "tsv"], default="json")
    p.add_argument("--trace", action="store_true", help="attach a trace audit summary")
    p.add_argument("--verbose", action="store_true", help="emit every intermediate basis")
    p.add_argument("--cap", type=int, default=None, help="max horizon for --algorithm brute")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="certify solvers against exhaustive enumeration")
    p.add_argument("instance", nargs="?")
    p.add_argument("--corpus", type=int, default=None, metavar="N",
                   help="verify N generated small instances instead of a file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--output", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("trace", help="dump and audit the one-pass scan")
    p.add_argument("instance")
    p.add_argument("--output", choices=["json", "tsv"], default="json")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("gen", help="write a random instance to stdout")
    add_gen_flags(p, 6, 10, 1, 20)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="time the one-pass solver over an m-doubling ladder")
    add_gen_flags(p, 2000, 200_000, 1, 1000)
    p.add_argument("--steps", type=int, default=4, help="ladder length ending at --m")
    p.add_argument("--output", choices=["json", "tsv"], default="tsv")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if getattr(args, "cap", "absent") is None:
            args.cap = default_cap()
        return args.func(args)
    except IndMstError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
