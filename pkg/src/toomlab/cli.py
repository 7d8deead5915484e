"""Command line entry point ``toomlab``."""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from .cuts import GuardExceeded, INF, thickness_connected, thickness_general
from .experiments import CONSENSUS_FIELDS, consensus_experiment, rows_to_csv, summary_row
from .geometry import span_d
from .patterns import (
    PatternError,
    format_cutspec,
    parse_cutspec,
    parse_failures,
    parse_pattern,
    render_ascii,
    serialize_pattern,
)
from .rules import Rule, evolve
from .suites import SUITES, RunConfig, records_to_csv, run_suite
from .transfer import PullbackError, pullback_cut_Q, pullback_cut_R


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_evolve(args) -> int:
    S = parse_pattern(_read(args.pattern))
    failures = parse_failures(_read(args.failures)) if args.failures else ()
    trace = evolve(args.rule, S, args.steps, failures)
    _emit(serialize_pattern(trace.final), args.output)
    return 0


def cmd_render(args) -> int:
    sys.stdout.write(render_ascii(parse_pattern(_read(args.pattern))))
    return 0


def cmd_span(args) -> int:
    S = parse_pattern(_read(args.pattern))
    res = span_d(S, Fraction(args.d))
    note = "" if res.exact else " (upper bound)"
    print(f"{res.value}{note}")
    return 0


def cmd_thickness(args) -> int:
    S = parse_pattern(_read(args.pattern))
    kw = {"max_sites": args.max_sites, "guard_k": args.max_k}
    if args.connected:
        res = thickness_connected(S, Fraction(args.alpha), Fraction(args.beta), **kw)
    else:
        res = thickness_general(S, Fraction(args.alpha), **kw)
    print("inf" if res.value == INF else res.value)
    if res.witness is not None:
        cut, m = res.witness
        print(f"# witness m={m}")
        sys.stdout.write(format_cutspec(cut))
    return 0


def cmd_pullback(args) -> int:
    S = parse_pattern(_read(args.pattern))
    cut = parse_cutspec(_read(args.cut), S.space)
    if args.which == "r":
        result, mapping = pullback_cut_R(S, cut)
        for a in sorted(mapping, key=lambda p: (p[1], p[0])):
            print(f"# {a[0]},{a[1]} -> {mapping[a][0]},{mapping[a][1]}")
    else:
        result, trace = pullback_cut_Q(S, cut)
        print(f"# start={trace.start} r={trace.r} dropped={trace.x[0]},{trace.x[1]}")
    sys.stdout.write(format_cutspec(result))
    return 0


def cmd_verify(args) -> int:
    cfg = RunConfig(seed=args.seed, trials=args.trials, max_size=args.max_size, out=args.output)
    records, status = run_suite(args.suite, cfg)
    if not args.output:
        sys.stdout.write(records_to_csv(records))
    failed = sum(not r.passed for r in records)
    print(f"{args.suite}: {len(records)} records, {failed} failed", file=sys.stderr)
    return status


def cmd_consensus(args) -> int:
    sizes = tuple(int(v) for v in args.sizes.split(","))
    cfg = RunConfig(seed=args.seed, trials=args.trials, sizes=sizes)
    if args.densities:
        cfg.densities = tuple(float(v) for v in args.densities.split(","))
    rows, summary = consensus_experiment(cfg)
    _emit(rows_to_csv(rows + [summary_row(summary)], CONSENSUS_FIELDS), args.output)
    return 0 if summary.failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="toomlab", description="Toom-rule thickness verification lab")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("evolve", help="apply a rule for a number of steps")
    e.add_argument("--rule", required=True, choices=[r.value for r in Rule])
    e.add_argument("--steps", required=True, type=int)
    e.add_argument("--failures", help="file of 'step x y value' lines")
    e.add_argument("pattern")
    e.add_argument("-o", "--output")
    e.set_defaults(func=cmd_evolve)

    r = sub.add_parser("render", help="print a pattern as ASCII")
    r.add_argument("pattern")
    r.set_defaults(func=cmd_render)

    s = sub.add_parser("span", help="cover span of a pattern")
    s.add_argument("--d", required=True, choices=["1/3", "2"])
    s.add_argument("pattern")
    s.set_defaults(func=cmd_span)

    t = sub.add_parser("thickness", help="exhaustive thickness")
    t.add_argument("--alpha", required=True)
    t.add_argument("--connected", action="store_true")
    t.add_argument("--beta", default="0")
    t.add_argument("--max-sites", type=int, default=30)
    t.add_argument("--max-k", type=int, default=4)
    t.add_argument("pattern")
    t.set_defaults(func=cmd_thickness)

    b = sub.add_parser("pullback", help="pull a cut of R(S) or Q(S) back to S")
    b.add_argument("which", choices=["r", "q"])
    b.add_argument("--cut", required=True)
    b.add_argument("pattern")
    b.set_defaults(func=cmd_pullback)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=sorted(SUITES))
    v.add_argument("--trials", type=int)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--max-size", type=int)
    v.add_argument("-o", "--output")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("consensus", help="R+ consensus-time experiment")
    c.add_argument("--sizes", default="8,12,16,20")
    c.add_argument("--trials", type=int, default=50)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--densities", help="comma list, default 0.1..0.9")
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_consensus)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (PatternError, ValueError, GuardExceeded, PullbackError, OSError) as exc:
        print(f"toomlab: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
