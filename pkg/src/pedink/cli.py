"""Command line: gen, solve, render, bench, check."""

from __future__ import annotations

import argparse
import sys
from datetime import datetime, timezone

from . import bench as bench_mod
from .baseline import BudgetExceeded
from .drawing import DrawingError, load_drawing, load_solution, save_drawing, save_solution, validate_solution
from .forge import GADGETS, LAYOUTS, GadgetNotDrawable, GadgetSpec, LayoutSpec, gadget, random_instance
from .render import render_svg
from .solve import ALGOS, solve
from .td_dp import DEFAULT_BUDGET, SolveTimeout, TableBudgetExceeded
from .tree_dp import NotAForestError

MODES = ("sped", "ped", "shped")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(",") if x)


def cmd_gen(args) -> int:
    if args.gadget:
        spec = GadgetSpec(args.gadget, p=args.p, alpha=args.alpha, beta=args.beta)
        drawing = gadget(spec)
    else:
        drawing = random_instance(LayoutSpec(args.n, args.m, args.seed, args.layout))
    _write(args.output, save_drawing(drawing))
    return 0


def cmd_solve(args) -> int:
    drawing = load_drawing(_read(args.input))
    rep = solve(drawing, args.mode, args.algo, budget_entries=args.budget_entries, timeout_ms=args.timeout_ms)
    stamp = None if args.no_timestamp else datetime.now(timezone.utc).isoformat(timespec="seconds")
    _write(args.output, save_solution(drawing, rep.solution, timestamp=stamp))
    total = drawing.total_length
    ratio = rep.solution.ink / total if total > 0 else 1.0
    print(
        f"ink {rep.solution.ink!r} of {total!r} ({ratio:.4f}); algo {rep.algo}, width {rep.width}, "
        f"solve {rep.solve_ms:.1f} ms, decomposition {rep.decomp_ms:.1f} ms",
        file=sys.stderr,
    )
    return 0


def cmd_render(args) -> int:
    drawing = load_drawing(_read(args.input))
    sol = load_solution(drawing, _read(args.solution)) if args.solution else None
    _write(args.output, render_svg(drawing, sol, dotted=args.dotted))
    return 0


def cmd_check(args) -> int:
    drawing = load_drawing(_read(args.input))
    sol = load_solution(drawing, _read(args.solution))
    bad = validate_solution(drawing, sol)
    if bad:
        print(f"invalid: {len(bad)} unresolved crossings, first {bad[:5]}")
        return 1
    print(f"valid {sol.mode.value} drawing, ink {sol.ink!r}")
    return 0


def cmd_bench(args) -> int:
    cfg = bench_mod.BenchConfig(
        n=args.n,
        ms=_int_list(args.m),
        seeds=tuple(range(args.seed, args.seed + args.seeds)),
        layouts=tuple(args.layout.split(",")),
        modes=tuple(args.mode.split(",")),
        algo=args.algo,
        budget_entries=args.budget_entries,
        timeout_ms=args.timeout_ms,
        workers=args.workers,
    )
    for lay in cfg.layouts:
        if lay not in LAYOUTS:
            raise ValueError(f"unknown layout {lay!r}")

    def progress(r):
        if args.verbose:
            print(f"{r.instance} {r.mode} {r.status} width={r.width}", file=sys.stderr)

    records = bench_mod.run_bench(cfg, progress)
    if args.output in (None, "-"):
        bench_mod.write_csv(records, sys.stdout)
    else:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            bench_mod.write_csv(records, fh)
    print(bench_mod.format_summary(bench_mod.summarize(records)), file=sys.stderr, end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pedink", description="Ink-maximal partial edge drawings.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a gadget or random drawing as JSON")
    g.add_argument("--gadget", choices=GADGETS)
    g.add_argument("--p", type=int, default=3)
    g.add_argument("--alpha", type=float, default=12.0)
    g.add_argument("--beta", type=float, default=1.0)
    g.add_argument("--n", type=int, default=40)
    g.add_argument("--m", type=int, default=50)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--layout", choices=LAYOUTS, default="spring")
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", help="compute a maximum-ink drawing")
    s.add_argument("-i", "--input", required=True)
    s.add_argument("-o", "--output")
    s.add_argument("--mode", choices=MODES, default="sped")
    s.add_argument("--algo", choices=ALGOS, default="auto")
    s.add_argument("--budget-entries", type=int, default=DEFAULT_BUDGET)
    s.add_argument("--timeout-ms", type=float)
    s.add_argument("--no-timestamp", action="store_true")
    s.set_defaults(func=cmd_solve)

    r = sub.add_parser("render", help="draw a drawing (and optional solution) as SVG")
    r.add_argument("-i", "--input", required=True)
    r.add_argument("-s", "--solution")
    r.add_argument("-o", "--output")
    r.add_argument("--dotted", action="store_true", help="show omitted parts dotted")
    r.set_defaults(func=cmd_render)

    c = sub.add_parser("check", help="validate a solution against a drawing")
    c.add_argument("-i", "--input", required=True)
    c.add_argument("-s", "--solution", required=True)
    c.set_defaults(func=cmd_check)

    b = sub.add_parser("bench", help="run the random-layout benchmark, CSV out")
    b.add_argument("--n", type=int, default=40)
    b.add_argument("--m", default="40,45,50,55,60", help="comma-separated edge counts")
    b.add_argument("--seed", type=int, default=0, help="first seed")
    b.add_argument("--seeds", type=int, default=20, help="seeds per (layout, m)")
    b.add_argument("--layout", default="spring,circular")
    b.add_argument("--mode", default="sped,ped")
    b.add_argument("--algo", choices=ALGOS, default="auto")
    b.add_argument("--budget-entries", type=int, default=DEFAULT_BUDGET)
    b.add_argument("--timeout-ms", type=float, default=60_000)
    b.add_argument("--workers", type=int, default=1)
    b.add_argument("-v", "--verbose", action="store_true")
    b.add_argument("-o", "--output")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (TableBudgetExceeded, BudgetExceeded, SolveTimeout, NotAForestError, GadgetNotDrawable) as exc:
        print(f"pedink: {exc}", file=sys.stderr)
        return 3
    except (DrawingError, ValueError, OSError) as exc:
        print(f"pedink: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
