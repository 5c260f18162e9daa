"""Benchmark harness: random layouts, per-instance solve records, CSV and summary."""

from __future__ import annotations

import csv
import io
import math
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from typing import Callable, Iterable, Optional

from .baseline import BudgetExceeded
from .decomposition import decompose
from .drawing import Mode
from .forge import LayoutSpec, random_instance
from .intersection import build_graph, split_components
from .solve import solve
from .td_dp import DEFAULT_BUDGET, SolveTimeout, TableBudgetExceeded
from .tree_dp import NotAForestError

COLUMNS = (
    "instance",
    "n",
    "m",
    "crossings",
    "k",
    "width",
    "mode",
    "algo",
    "total_length",
    "ink",
    "ink_ratio",
    "solve_ms",
    "decomp_ms",
    "peak_entries",
    "status",
)


@dataclass
class BenchRecord:
    instance: str
    n: int
    m: int
    crossings: int
    k: int
    width: int
    mode: str
    algo: str
    total_length: float
    ink: Optional[float]
    ink_ratio: Optional[float]
    solve_ms: Optional[float]
    decomp_ms: Optional[float]
    peak_entries: Optional[int]
    status: str

    @property
    def layout(self) -> str:
        return self.instance.split("-", 1)[0]


assert tuple(f.name for f in fields(BenchRecord)) == COLUMNS


@dataclass(frozen=True)
class BenchConfig:
    n: int = 40
    ms: tuple[int, ...] = (40, 45, 50, 55, 60)
    seeds: tuple[int, ...] = tuple(range(20))
    layouts: tuple[str, ...] = ("spring", "circular")
    modes: tuple[str, ...] = ("sped", "ped")
    algo: str = "auto"
    budget_entries: int = DEFAULT_BUDGET
    timeout_ms: Optional[float] = 60_000
    workers: int = 1

    def specs(self) -> list[LayoutSpec]:
        return [LayoutSpec(self.n, m, s, lay) for lay in self.layouts for m in self.ms for s in self.seeds]


def instance_id(spec: LayoutSpec) -> str:
    return f"{spec.layout}-n{spec.n}-m{spec.m}-s{spec.seed}"


def graph_width(graph) -> int:
    """Reported width: 0 without crossings, 1 for forests, else the heuristic width."""
    width = 0
    for comp in split_components(graph):
        if comp.is_forest:
            width = max(width, 1 if comp.n_edges else 0)
        else:
            width = max(width, decompose(graph.neighbor_map(comp.vertices)).width)
    return width


def bench_instance(spec: LayoutSpec, config: BenchConfig) -> list[BenchRecord]:
    """One record per mode; budget and deadline overruns become statuses."""
    drawing = random_instance(spec)
    g = build_graph(drawing)
    width = graph_width(g)
    total = drawing.total_length
    out = []
    for mode in config.modes:
        base = dict(
            instance=instance_id(spec),
            n=spec.n,
            m=len(drawing.edges),
            crossings=g.n_crossings,
            k=g.max_degree,
            width=width,
            mode=Mode(mode).value,
            algo=config.algo,
            total_length=total,
        )
        t0 = time.perf_counter()
        try:
            rep = solve(
                drawing, mode, config.algo, budget_entries=config.budget_entries, timeout_ms=config.timeout_ms, graph=g
            )
        except SolveTimeout:
            ms = (time.perf_counter() - t0) * 1e3
            out.append(BenchRecord(**base, ink=None, ink_ratio=None, solve_ms=ms, decomp_ms=None, peak_entries=None, status="timeout"))
            continue
        except (TableBudgetExceeded, BudgetExceeded, NotAForestError):
            out.append(BenchRecord(**base, ink=None, ink_ratio=None, solve_ms=None, decomp_ms=None, peak_entries=None, status="skipped"))
            continue
        ink = rep.solution.ink
        out.append(
            BenchRecord(
                **base,
                ink=ink,
                ink_ratio=ink / total if total > 0 else 1.0,
                solve_ms=rep.solve_ms,
                decomp_ms=rep.decomp_ms,
                peak_entries=rep.peak_entries,
                status="ok",
            )
        )
    return out


def _run_one(args):
    return bench_instance(*args)


def run_bench(config: BenchConfig, progress: Optional[Callable[[BenchRecord], None]] = None) -> list[BenchRecord]:
    """Records in instance order, whatever the worker count."""
    specs = config.specs()
    records: list[BenchRecord] = []
    if config.workers > 1:
        with ProcessPoolExecutor(config.workers) as pool:
            batches = pool.map(_run_one, [(s, config) for s in specs])
            for batch in batches:
                for r in batch:
                    records.append(r)
                    if progress:
                        progress(r)
    else:
        for s in specs:
            for r in bench_instance(s, config):
                records.append(r)
                if progress:
                    progress(r)
    return records


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_csv(records: Iterable[BenchRecord], fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in records:
        w.writerow([_fmt(v) for v in asdict(r).values()])


def read_csv(fh) -> list[BenchRecord]:
    ints = {"n", "m", "crossings", "k", "width", "peak_entries"}
    floats = {"total_length", "ink", "ink_ratio", "solve_ms", "decomp_ms"}
    out = []
    for row in csv.DictReader(fh):
        vals = {}
        for c in COLUMNS:
            raw = row[c]
            if c in ints:
                vals[c] = int(raw) if raw else None
            elif c in floats:
                vals[c] = float(raw) if raw else None
            else:
                vals[c] = raw
        out.append(BenchRecord(**vals))
    return out


@dataclass(frozen=True)
class SummaryRow:
    layout: str
    mode: str
    solved: int
    failed: int
    mean_ratio: float
    std_ratio: float


def summarize(records: Iterable[BenchRecord]) -> list[SummaryRow]:
    groups: dict[tuple[str, str], list[BenchRecord]] = {}
    for r in records:
        groups.setdefault((r.layout, r.mode), []).append(r)
    rows = []
    for (layout, mode), rs in sorted(groups.items()):
        ratios = [r.ink_ratio for r in rs if r.status == "ok"]
        mean = statistics.fmean(ratios) if ratios else math.nan
        std = statistics.pstdev(ratios) if len(ratios) > 1 else 0.0 if ratios else math.nan
        rows.append(SummaryRow(layout, mode, len(ratios), len(rs) - len(ratios), mean, std))
    return rows


def format_summary(rows: list[SummaryRow]) -> str:
    buf = io.StringIO()
    buf.write("layout     mode   solved failed  mean_ratio  sigma\n")
    for s in rows:
        buf.write(f"{s.layout:<10} {s.mode:<6} {s.solved:>6} {s.failed:>6}  {s.mean_ratio:>10.4f}  {s.std_ratio:.4f}\n")
    return buf.getvalue()
