"""Algorithm dispatch: per-component tree or tree-decomposition DP, brute force, SHPED."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

from .baseline import DEFAULT_BUDGET as BRUTE_BUDGET
from .baseline import brute_force, shped_ratio
from .decomposition import decompose, make_nice
from .drawing import Drawing, Mode, Solution
from .intersection import IntersectionGraph, build_graph, split_components
from .td_dp import DEFAULT_BUDGET, TdSolver
from .tree_dp import NotAForestError, solve_tree_component

ALGOS = ("auto", "tree", "td", "brute")


@dataclass
class ComponentReport:
    size: int
    crossings: int
    algo: str
    width: int
    ink: float
    peak_entries: int = 0


@dataclass
class SolveReport:
    solution: Solution
    graph: IntersectionGraph
    algo: str
    width: int = 0
    solve_ms: float = 0.0
    decomp_ms: float = 0.0
    peak_entries: int = 0
    components: list = field(default_factory=list)


def solve(
    drawing: Drawing,
    mode,
    algo: str = "auto",
    budget_entries: int = DEFAULT_BUDGET,
    timeout_ms: Optional[float] = None,
    brute_budget: int = BRUTE_BUDGET,
    graph: Optional[IntersectionGraph] = None,
) -> SolveReport:
    """Maximum-ink solution of ``drawing``.

    ``auto`` runs the tree DP on forest components and the decomposition DP on
    the rest. ``tree`` raises NotAForestError on a cyclic component. Times
    cover the solver only; decomposition time is reported apart.
    """
    mode = Mode(mode)
    if algo not in ALGOS:
        raise ValueError(f"unknown algorithm {algo!r}; expected one of {ALGOS}")
    t0 = time.perf_counter()
    g = graph if graph is not None else build_graph(drawing)

    if mode is Mode.SHPED:
        _, sol = shped_ratio(drawing, g)
        return SolveReport(sol, g, "shped", solve_ms=(time.perf_counter() - t0) * 1e3)
    if algo == "brute":
        res = brute_force(drawing, mode, budget=brute_budget, graph=g)
        return SolveReport(res.witness, g, "brute", solve_ms=(time.perf_counter() - t0) * 1e3)

    deadline = None if timeout_ms is None else t0 + timeout_ms / 1e3
    report = SolveReport(None, g, algo)
    choices = [None] * len(drawing.segments)
    solve_s = decomp_s = 0.0
    for comp in split_components(g):
        use_tree = algo == "tree" or (algo == "auto" and comp.is_forest)
        if use_tree:
            if not comp.is_forest:
                raise NotAForestError(f"component of segment {comp.vertices[0]} has a cycle")
            s = time.perf_counter()
            value, assign = solve_tree_component(g, comp, mode)
            solve_s += time.perf_counter() - s
            width = 1 if comp.n_edges else 0
            peak = 0
        else:
            s = time.perf_counter()
            nice = make_nice(decompose(g.neighbor_map(comp.vertices)))
            decomp_s += time.perf_counter() - s
            s = time.perf_counter()
            solver = TdSolver(g, comp, mode, nice=nice, budget_entries=budget_entries, deadline=deadline)
            value, assign = solver.solve()
            solve_s += time.perf_counter() - s
            width, peak = nice.width, solver.stats.peak_entries
        for u, c in assign.items():
            choices[u] = c
        report.components.append(
            ComponentReport(len(comp.vertices), comp.n_edges, "tree" if use_tree else "td", width, value, peak)
        )
        report.width = max(report.width, width)
        report.peak_entries = max(report.peak_entries, peak)
    report.solution = Solution(mode, tuple(choices))
    report.solve_ms = solve_s * 1e3
    report.decomp_ms = decomp_s * 1e3
    return report
