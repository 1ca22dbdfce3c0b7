"""Command-line harness: single runs, benchmark suites and bound sweeps.

Exit codes: 0 ok, 1 bound violation, 2 usage error, 3 evaluation error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from typing import Optional

from . import analytics, baseline, corpus, sampler
from .errors import ConditionViolation, EvaluationError, InvalidInput
from .regularity import RegularityCondition, parse_condition

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_EVAL = 0, 1, 2, 3

TRACE_HEADER = ["t", "x", "fx", "best", "popped_score", "queue_lb"]
REGRET_HEADER = ["cum_regret", "simple_regret", "bound"]
BENCH_HEADER = ["fn", "alg", "T", "R_T", "bound", "bound_name", "satisfied"]

DEFAULT_SUITE = [
    {"fn": "V1", "cond": "abs:1", "T": 10},
    {"fn": "V1", "cond": "abs:1", "T": 100},
    {"fn": "V1", "cond": "abs:1", "T": 1000},
    {"fn": "Q1", "cond": "abs:1", "T": 100},
    {"fn": "Q1", "cond": "abs:1", "T": 1000},
    {"fn": "Q1", "cond": "square:1", "T": 1000},
    {"fn": "S1", "cond": "abs", "T": 100},
    {"fn": "S1", "cond": "abs", "T": 1000},
    {"fn": "W1", "cond": "abs:3", "T": 100},
    {"fn": "W1", "cond": "abs:3", "T": 1000},
    {"fn": "P3", "cond": "power:3:1", "T": 1000},
    {"fn": "C1", "cond": "square", "T": 1000},
]

VERIFY_CONDITIONS = ["abs:1", "square:1", "power:3:1"]


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    function_id: str
    condition: str
    budget: Optional[int] = None
    epsilon: Optional[float] = None
    prune: bool = False
    algorithm: str = "binary"
    oracle_grid: int = analytics.DEFAULT_GRID
    output_path: str = "-"

    def __post_init__(self):
        if self.budget is None and self.epsilon is None:
            raise UsageError("give --budget, --epsilon, or both")
        if self.budget is not None and self.budget < 3:
            raise UsageError("--budget must be >= 3")
        if self.epsilon is not None and not self.epsilon > 0:
            raise UsageError("--epsilon must be > 0")
        if self.algorithm not in ("binary", "ps"):
            raise UsageError(f"unknown algorithm {self.algorithm!r}")


def fmt(v) -> str:
    """17 significant digits so values round-trip through text bitwise."""
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    return format(float(v), ".17g")


def lookup(fn_id: str) -> corpus.TestFunction:
    try:
        return corpus.get(fn_id)
    except KeyError:
        raise UsageError(f"unknown function {fn_id!r}") from None


def resolve_condition(fn: corpus.TestFunction, text: str) -> RegularityCondition:
    """Parse a condition spec; a bare class name picks the corpus constant."""
    if text in ("abs", "square", "power"):
        try:
            return fn.condition(text)
        except KeyError as exc:
            raise UsageError(str(exc)) from None
    try:
        return parse_condition(text)
    except InvalidInput as exc:
        raise UsageError(str(exc)) from None


def make_oracle(fn: corpus.TestFunction, cond: RegularityCondition, grid: int) -> analytics.OracleResult:
    if fn.known_min is not None:
        return analytics.exact_oracle(*fn.known_min)
    return analytics.oracle_min(fn.evaluate, fn.domain, cond, grid)


def run_algorithm(fn, cond, alg, budget=None, epsilon=None, prune=False):
    if alg == "ps":
        if cond.distance.kind != "abs":
            raise UsageError("ps runs only with abs (Lipschitz) conditions")
        if epsilon is not None or budget is None:
            raise UsageError("ps supports a fixed --budget only")
        return baseline.ps_run(fn.evaluate, fn.domain, cond.constant, budget)
    rule = sampler.StoppingRule(budget, epsilon)
    return sampler.run(fn.evaluate, fn.domain, cond, rule, prune=prune)


def trace_csv(trace, report: Optional[analytics.RegretReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRACE_HEADER + (REGRET_HEADER if report is not None else []))
    best = math.inf
    for i, r in enumerate(trace.records):
        best = min(best, r.fx)
        row = [r.t, fmt(r.x), fmt(r.fx), fmt(best), fmt(r.popped_score), fmt(r.queue_lb)]
        if report is not None:
            row += [fmt(report.cumulative[i]), fmt(report.simple[i]), fmt(report.bound[i])]
        w.writerow(row)
    return buf.getvalue()


def _emit(text: str, path: str):
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def cmd_optimize(cfg: RunConfig) -> int:
    fn = lookup(cfg.function_id)
    cond = resolve_condition(fn, cfg.condition)
    trace = run_algorithm(fn, cond, cfg.algorithm, cfg.budget, cfg.epsilon, cfg.prune)
    report = None
    if cfg.oracle_grid:
        report = analytics.regret(trace, make_oracle(fn, cond, cfg.oracle_grid), cond)
    _emit(trace_csv(trace, report), cfg.output_path)
    print(
        f"{fn.id} {cond} {trace.algorithm}: T={trace.T} best={trace.best_value:.10g} "
        f"at x={trace.best_x:.10g} ({trace.stop_reason})"
        + (" [depth cap reached]" if trace.depth_cap_hit else ""),
        file=sys.stderr,
    )
    return EXIT_OK


def load_suite(path: Optional[str]) -> list[dict]:
    if path is None:
        return DEFAULT_SUITE
    try:
        with open(path) as fh:
            suite = json.load(fh)
        return [{"fn": e["fn"], "cond": e["cond"], "T": int(e["T"])} for e in suite]
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read suite {path!r}: {exc}") from None


def bench_rows(suite: list[dict], algs: list[str], oracle_grid: int) -> list[dict]:
    explicit_ps = algs == ["ps"]
    # Validate everything before running anything.
    plan = []
    for e in suite:
        fn = lookup(e["fn"])
        cond = resolve_condition(fn, e["cond"])
        if e["T"] < 3:
            raise UsageError("suite T must be >= 3")
        for alg in algs:
            if alg == "ps" and cond.distance.kind != "abs":
                if explicit_ps:
                    raise UsageError(f"ps requested with {e['cond']} on {fn.id}")
                continue
            plan.append((fn, cond, alg, e["T"]))
    rows = []
    oracles = {}
    for fn, cond, alg, T in plan:
        key = (fn.id, str(cond))
        if key not in oracles:
            oracles[key] = make_oracle(fn, cond, oracle_grid)
        trace = run_algorithm(fn, cond, alg, T)
        rep = analytics.regret(trace, oracles[key], cond)
        rows.append(
            {
                "fn": fn.id,
                "alg": alg,
                "T": T,
                "R_T": rep.R_T,
                "bound": float(rep.bound[-1]),
                "bound_name": rep.bound_name,
                "satisfied": rep.satisfied(),
                "slack": rep.slack,
                "cond": str(cond),
            }
        )
    return rows


def bench_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(BENCH_HEADER)
    for r in rows:
        w.writerow([r["fn"], r["alg"], r["T"], fmt(r["R_T"]), fmt(r["bound"]), r["bound_name"], fmt(r["satisfied"])])
    return buf.getvalue()


def bench_table(rows: list[dict]) -> str:
    lines = [f"{'fn':<4} {'cond':<14} {'alg':<6} {'T':>6} {'R_T':>12} {'bound':>12} {'slack':>9}  ok"]
    for r in rows:
        lines.append(
            f"{r['fn']:<4} {r['cond']:<14} {r['alg']:<6} {r['T']:>6} {r['R_T']:>12.6g} "
            f"{r['bound']:>12.6g} {r['slack']:>9.2g}  {'yes' if r['satisfied'] else 'NO'}"
        )
    return "\n".join(lines) + "\n"


def cmd_bench(suite_path: Optional[str], algs: list[str], oracle_grid: int, out: str) -> int:
    rows = bench_rows(load_suite(suite_path), algs, oracle_grid)
    _emit(bench_csv(rows), out)
    sys.stderr.write(bench_table(rows))
    return EXIT_OK if all(r["satisfied"] for r in rows) else EXIT_VIOLATION


def verify_bounds(t_max: int, conditions: list[RegularityCondition]):
    """First ``(cond, T, general, closed)`` with ``bound_general > closed form``, else None."""
    if t_max < 3:
        raise UsageError("--t-max must be >= 3")
    for cond in conditions:
        _, closed = analytics.applicable_bound(cond)
        for T in range(3, t_max + 1):
            g, c = analytics.bound_general(cond, T), closed(T)
            if g > c:
                return cond, T, g, c
    return None


def cmd_verify_bounds(t_max: int, cond_texts: list[str]) -> int:
    conds = []
    for text in cond_texts:
        try:
            conds.append(parse_condition(text))
        except InvalidInput as exc:
            raise UsageError(str(exc)) from None
    bad = verify_bounds(t_max, conds)
    names = ", ".join(str(c) for c in conds)
    if bad is None:
        print(f"pass: general bound <= closed form for T = 3..{t_max} ({names})")
        return EXIT_OK
    cond, T, g, c = bad
    print(f"violation: {cond} at T={T}: general {g!r} > closed form {c!r}")
    return EXIT_VIOLATION


def cmd_corpus_list() -> int:
    for f in corpus.builtin_corpus():
        km = "none" if f.known_min is None else f"x*={f.known_min[0]:.6g} f*={f.known_min[1]:.6g}"
        conds = "; ".join(str(ac) for ac in f.conditions)
        print(f"{f.id}\t{f.description}\tdomain={list(f.domain)}\t{km}\t{conds}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="binsample", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    o = sub.add_parser("optimize", help="run one optimization and write its trace as CSV")
    o.add_argument("--fn", required=True, help="corpus function id")
    o.add_argument("--cond", help="abs:C | square:C | power:p:C, or a bare class for the corpus constant")
    o.add_argument("--budget", type=int, help="number of queries T")
    o.add_argument("--epsilon", type=float, help="stop once best - lower bound <= epsilon")
    o.add_argument("--prune", action="store_true")
    o.add_argument("--alg", choices=["binary", "ps"], default="binary")
    o.add_argument("--oracle-grid", type=int, default=analytics.DEFAULT_GRID,
                   help="grid size for f(x*) when not known analytically; 0 drops regret columns")
    o.add_argument("--out", default="-")

    b = sub.add_parser("bench", help="binary sampling vs Piyavskii-Shubert over a suite")
    b.add_argument("--suite", help="JSON list of {fn, cond, T}; default built-in suite")
    b.add_argument("--alg", default="binary,ps", help="comma list from {binary, ps}")
    b.add_argument("--oracle-grid", type=int, default=analytics.DEFAULT_GRID)
    b.add_argument("--out", default="-")

    v = sub.add_parser("verify-bounds", help="check the general bound against closed forms")
    v.add_argument("--t-max", type=int, default=10_000)
    v.add_argument("--cond", action="append", help="repeatable; default abs:1, square:1, power:3:1")

    c = sub.add_parser("corpus", help="corpus utilities")
    c.add_argument("action", choices=["list"])
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "optimize":
            cond_text = args.cond or lookup(args.fn).conditions[0].cond.distance.kind
            cfg = RunConfig(args.fn, cond_text, args.budget, args.epsilon, args.prune,
                            args.alg, args.oracle_grid, args.out)
            return cmd_optimize(cfg)
        if args.command == "bench":
            algs = [a.strip() for a in args.alg.split(",") if a.strip()]
            if not algs or set(algs) - {"binary", "ps"}:
                raise UsageError(f"bad --alg {args.alg!r}")
            return cmd_bench(args.suite, algs, args.oracle_grid, args.out)
        if args.command == "verify-bounds":
            return cmd_verify_bounds(args.t_max, args.cond or VERIFY_CONDITIONS)
        return cmd_corpus_list()
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except EvaluationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EVAL
    except ConditionViolation as exc:
        print(f"violation: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except (EvaluationError, ConditionViolation) as exc:
        print(f"evaluation error: {exc}", file=sys.stderr)
        return EXIT_EVAL


if __name__ == "__main__":
    sys.exit(main())
