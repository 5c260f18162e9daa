"""Exact ink maximization over a nice tree decomposition of the intersection graph.

Each node ``t`` keeps a dense table over the choice indices of its bag
vertices, ``W(t, S)``, holding the best ink of any valid choice vector on the
vertices below ``t`` that agrees with ``S`` on the bag. Invalid ``S`` hold
``-inf``.

    leaf       W = ink(v)
    introduce  W(S + c_v) = W'(S) + ink(c_v)       if c_v is compatible with S
    forget     W(S) = max_c W'(S + c)
    join       W(S) = W1(S) + W2(S) - I(S)
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .decomposition import FORGET, INTRODUCE, JOIN, LEAF, NiceTreeDecomposition, decompose, make_nice
from .drawing import TAU, Mode, Solution
from .intersection import ChoiceSet, Component, IntersectionGraph

DEFAULT_BUDGET = 50_000_000


class TableBudgetExceeded(RuntimeError):
    pass


class SolveTimeout(RuntimeError):
    pass


class CrossingOracle:
    """Per crossing, the compatibility matrix of the two segments' choices."""

    def __init__(self, graph: IntersectionGraph, sets: dict[int, ChoiceSet]):
        self.graph = graph
        self.sets = sets
        self._hides = {}
        for u, cs in sets.items():
            for v in graph.neighbors(u):
                self._hides[(u, v)] = np.array([v in res for res in cs.resolved], dtype=bool)
        self._compat = {}

    def hides(self, u: int, v: int) -> np.ndarray:
        """Bit per choice of ``u``: does it hide the crossing with ``v``?"""
        return self._hides[(u, v)]

    def compatible(self, u: int, v: int) -> np.ndarray:
        key = (u, v)
        m = self._compat.get(key)
        if m is None:
            m = self.hides(u, v)[:, None] | self.hides(v, u)[None, :]
            self._compat[key] = m
        return m

    def query(self, u: int, cu: int, v: int, cv: int) -> bool:
        return bool(self._hides[(u, v)][cu] or self._hides[(v, u)][cv])


@dataclass
class TdStats:
    width: int = 0
    nodes: int = 0
    peak_entries: int = 0
    peak_cells: int = 0
    trace: list = field(default_factory=list)


@dataclass
class _Table:
    vars: list
    arr: np.ndarray


def _expand(vec: np.ndarray, axis: int, ndim: int) -> np.ndarray:
    shape = [1] * ndim
    shape[axis] = vec.shape[0]
    return vec.reshape(shape)


class TdSolver:
    """DP over one component's nice tree decomposition.

    ``keep_tables`` retains every node table (for post-hoc checks on small
    inputs); otherwise only forget back-pointers survive the upward pass.
    """

    def __init__(
        self,
        graph: IntersectionGraph,
        comp: Component,
        mode: Mode,
        nice: Optional[NiceTreeDecomposition] = None,
        budget_entries: int = DEFAULT_BUDGET,
        deadline: Optional[float] = None,
        keep_tables: bool = False,
        trace: bool = False,
    ):
        self.graph = graph
        self.comp = comp
        self.mode = Mode(mode)
        members = set(comp.vertices)
        if nice is None:
            nice = make_nice(decompose(graph.neighbor_map(comp.vertices)))
        covered = set().union(*(n.bag for n in nice.nodes)) if nice.nodes else set()
        if covered != members:
            raise ValueError("decomposition does not match the component's vertices")
        self.nice = nice
        all_sets = choice_sets_for(graph, self.mode, comp.vertices)
        self.sets = all_sets
        self.ink = {u: np.array([c.ink for c in cs.choices]) for u, cs in all_sets.items()}
        self.oracle = CrossingOracle(graph, all_sets)
        self.budget = budget_entries
        self.deadline = deadline
        self.keep_tables = keep_tables
        self.tables: dict[int, _Table] = {}
        self.backptr: dict[int, tuple[list, np.ndarray]] = {}
        self.stats = TdStats(width=nice.width, nodes=len(nice.nodes))
        self._trace = trace
        self.tol = TAU * sum(graph.length(u) for u in comp.vertices)
        self.value: Optional[float] = None

    def _check(self, shape):
        cells = int(np.prod(shape, dtype=np.int64)) if shape else 1
        if cells > self.budget:
            raise TableBudgetExceeded(
                f"table of {cells} entries exceeds budget {self.budget} (bag size {len(shape)})"
            )
        if self.deadline is not None and time.perf_counter() > self.deadline:
            raise SolveTimeout("solver deadline passed")
        return cells

    def _bag_ink(self, vars_) -> np.ndarray:
        n = len(vars_)
        total = np.zeros([1] * n) if n else np.zeros(())
        for ax, u in enumerate(vars_):
            total = total + _expand(self.ink[u], ax, n)
        return total

    def run(self) -> float:
        nodes = self.nice.nodes
        live: dict[int, _Table] = {}
        for t in self.nice.postorder():
            node = nodes[t]
            if node.kind == LEAF:
                if not node.bag:
                    tab = _Table([], np.zeros(()))
                else:
                    v = node.vertex
                    self._check((len(self.sets[v]),))
                    tab = _Table([v], self.ink[v].copy())
            elif node.kind == INTRODUCE:
                tab = self._introduce(live.pop(node.children[0]), node.vertex)
            elif node.kind == FORGET:
                tab = self._forget(t, live.pop(node.children[0]), node.vertex)
            elif node.kind == JOIN:
                tab = self._join(live.pop(node.children[0]), live.pop(node.children[1]))
            else:
                raise ValueError(f"unknown node kind {node.kind}")
            live[t] = tab
            if self.keep_tables:
                self.tables[t] = tab
            cells = tab.arr.size
            entries = int(np.count_nonzero(np.isfinite(tab.arr)))
            self.stats.peak_cells = max(self.stats.peak_cells, cells)
            self.stats.peak_entries = max(self.stats.peak_entries, entries)
            if self._trace:
                self.stats.trace.append((t, node.kind, len(node.bag), entries))
        root = live[self.nice.root]
        self.value = float(root.arr.reshape(()) if root.arr.ndim == 0 else root.arr.max())
        return self.value

    def _introduce(self, child: _Table, v: int) -> _Table:
        n_v = len(self.sets[v])
        shape = child.arr.shape + (n_v,)
        self._check(shape)
        nd = len(shape)
        arr = child.arr[..., None] + _expand(self.ink[v], nd - 1, nd)
        for ax, w in enumerate(child.vars):
            if (w, v) in self.oracle._hides:
                ok = self.oracle.compatible(w, v)
                pshape = [1] * nd
                pshape[ax] = ok.shape[0]
                pshape[-1] = n_v
                arr += np.where(ok, 0.0, -np.inf).reshape(pshape)
        return _Table(child.vars + [v], arr)

    def _forget(self, t: int, child: _Table, v: int) -> _Table:
        ax = child.vars.index(v)
        self._check(child.arr.shape[:ax] + child.arr.shape[ax + 1 :])
        best = child.arr.max(axis=ax)
        near = child.arr >= np.expand_dims(best, ax) - self.tol
        self.backptr[t] = (child.vars, np.argmax(near, axis=ax).astype(np.int32))
        return _Table(child.vars[:ax] + child.vars[ax + 1 :], best)

    def _join(self, a: _Table, b: _Table) -> _Table:
        perm = [b.vars.index(u) for u in a.vars]
        self._check(a.arr.shape)
        arr = a.arr + np.transpose(b.arr, perm) - self._bag_ink(a.vars)
        return _Table(list(a.vars), arr)

    def backtrack(self) -> dict[int, int]:
        """Choice index per vertex, reconstructed top-down via forget back-pointers."""
        if self.value is None:
            self.run()
        nodes = self.nice.nodes
        pick: dict[int, int] = {}
        stack = [self.nice.root]
        while stack:
            t = stack.pop()
            node = nodes[t]
            if node.kind == FORGET:
                child_vars, bp = self.backptr[t]
                key = tuple(pick[u] for u in child_vars if u != node.vertex)
                pick[node.vertex] = int(bp[key]) if key else int(bp)
            stack.extend(node.children)
        return pick

    def solve(self):
        """Returns ``(value, {segment: Choice})``."""
        value = self.run()
        pick = self.backtrack()
        return value, {u: self.sets[u].choices[i] for u, i in pick.items()}


def choice_sets_for(graph: IntersectionGraph, mode: Mode, vertices) -> dict[int, ChoiceSet]:
    from .intersection import ped_choices, sped_choices

    make = sped_choices if Mode(mode) is Mode.SPED else ped_choices
    return {u: make(graph, u) for u in vertices}


def _solve_all(graph: IntersectionGraph, mode: Mode, components=None, **kw) -> Solution:
    from .intersection import split_components

    comps = split_components(graph) if components is None else components
    choices = [None] * len(graph.segments)
    for comp in comps:
        _, assign = TdSolver(graph, comp, mode, **kw).solve()
        for u, c in assign.items():
            choices[u] = c
    return Solution(Mode(mode), tuple(choices))


def solve_sped_td(graph: IntersectionGraph, components=None, **kw) -> Solution:
    return _solve_all(graph, Mode.SPED, components, **kw)


def solve_ped_td(graph: IntersectionGraph, components=None, **kw) -> Solution:
    return _solve_all(graph, Mode.PED, components, **kw)
