"""Exact ink maximization when the intersection graph is a forest.

Bottom-up DP over each rooted tree. For a vertex ``u`` with choice ``i``,
``W[u][i]`` is the best ink in the subtree of ``u``. A child ``v`` contributes
``long(v)`` (its best value) when ``u``'s choice hides their crossing, and
``short(v)`` (best value among choices of ``v`` hiding the crossing)
otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .drawing import TAU, Mode, Solution
from .intersection import (
    ChoiceSet,
    Component,
    IntersectionGraph,
    distinct_positions,
    ped_choices,
    sped_choices,
)


class NotAForestError(ValueError):
    pass


@dataclass
class TreeDpState:
    """DP tables of one component; ``parent[root]`` is None."""

    root: int
    parent: dict
    children: dict
    choice_sets: dict
    W: dict = field(default_factory=dict)
    short: dict = field(default_factory=dict)
    long: dict = field(default_factory=dict)


def first_near_max(values, candidates, tol):
    """Smallest candidate index whose value is within ``tol`` of the best."""
    best = max(values[i] for i in candidates)
    for i in candidates:
        if values[i] >= best - tol:
            return i
    raise AssertionError("unreachable")


def _root_tree(graph: IntersectionGraph, comp: Component):
    root = comp.vertices[0]
    parent = {root: None}
    order = [root]
    for u in order:
        for v in graph.neighbors(u):
            if v not in parent:
                parent[v] = u
                order.append(v)
            elif v != parent[u]:
                raise NotAForestError(f"component containing segment {root} has a cycle")
    children = {u: [] for u in order}
    for u in order[1:]:
        children[parent[u]].append(u)
    return root, parent, children, order


def _sped_row_incremental(graph, u, cs: ChoiceSet, kids, short, long):
    """All W values of u in O(deg) after sorting, by sliding the stub length."""
    L = graph.length(u)
    tol = TAU * L
    kidset = set(kids)
    # neighbors ordered by their distance to the nearer endpoint
    by_mind = sorted(
        ((min(d, L - d), v) for v, d in zip(graph.neighbors(u), graph.positions(u))), key=lambda e: e[0]
    )
    row = [0.0] * len(cs)
    row[0] = cs.choices[0].ink + sum(short[v] for v in kids)
    running = sum(long[v] for v in kids)
    ptr = 0
    for i in range(1, len(cs)):
        stub = cs.choices[i].stub
        while ptr < len(by_mind) and by_mind[ptr][0] < stub - tol:
            v = by_mind[ptr][1]
            if v in kidset:
                running += short[v] - long[v]
            ptr += 1
        row[i] = cs.choices[i].ink + running
    return row


def _ped_row_incremental(graph, u, cs: ChoiceSet, kids, short, long):
    """All W values of u in O(deg^2) by growing the gap to the right."""
    L = graph.length(u)
    tol = TAU * L
    pos = distinct_positions(graph, u)
    if not pos:
        return [cs.choices[0].ink + sum(short[v] for v in kids)]
    kidset = set(kids)
    events = [(d, v) for v, d in zip(graph.neighbors(u), graph.positions(u))]
    base = sum(short[v] for v in kids)
    row = []
    for a in range(len(pos)):
        lo = pos[a] - tol
        ptr = 0
        while ptr < len(events) and events[ptr][0] < lo:
            ptr += 1
        running = base
        for b in range(a, len(pos)):
            hi = pos[b] + tol
            while ptr < len(events) and events[ptr][0] <= hi:
                v = events[ptr][1]
                if v in kidset:
                    running += long[v] - short[v]
                ptr += 1
            row.append(cs.choices[len(row)].ink + running)
    return row


def _row_naive(cs: ChoiceSet, kids, short, long):
    return [
        c.ink + sum(long[v] if v in res else short[v] for v in kids)
        for c, res in zip(cs.choices, cs.resolved)
    ]


def tree_tables(graph: IntersectionGraph, comp: Component, mode: Mode, naive: bool = False) -> TreeDpState:
    mode = Mode(mode)
    if not comp.is_forest:
        raise NotAForestError(f"component of segment {comp.vertices[0]} is not a tree")
    root, parent, children, order = _root_tree(graph, comp)
    make = sped_choices if mode is Mode.SPED else ped_choices
    state = TreeDpState(root, parent, children, {u: make(graph, u) for u in order})
    for u in reversed(order):
        cs = state.choice_sets[u]
        kids = children[u]
        if naive:
            row = _row_naive(cs, kids, state.short, state.long)
        elif mode is Mode.SPED:
            row = _sped_row_incremental(graph, u, cs, kids, state.short, state.long)
        else:
            row = _ped_row_incremental(graph, u, cs, kids, state.short, state.long)
        state.W[u] = row
        state.long[u] = max(row)
        p = parent[u]
        if p is not None:
            state.short[u] = max(w for w, res in zip(row, cs.resolved) if p in res)
    return state


def backtrack(state: TreeDpState, tol: float) -> dict[int, int]:
    """Choice index per vertex; ties go to the smallest index."""
    pick = {}
    r = state.root
    pick[r] = first_near_max(state.W[r], range(len(state.W[r])), tol)
    stack = [r]
    while stack:
        u = stack.pop()
        hidden = state.choice_sets[u].resolved[pick[u]]
        for v in state.children[u]:
            cs = state.choice_sets[v]
            if v in hidden:
                cand = range(len(cs))
            else:
                cand = [i for i, res in enumerate(cs.resolved) if u in res]
            pick[v] = first_near_max(state.W[v], cand, tol)
            stack.append(v)
    return pick


def solve_tree_component(graph: IntersectionGraph, comp: Component, mode: Mode, naive: bool = False):
    """Returns ``(value, {segment: Choice})`` for one tree component."""
    state = tree_tables(graph, comp, mode, naive=naive)
    tol = TAU * sum(graph.length(u) for u in comp.vertices)
    pick = backtrack(state, tol)
    value = state.long[state.root]
    return value, {u: state.choice_sets[u].choices[i] for u, i in pick.items()}


def _solve_forest(graph: IntersectionGraph, mode: Mode, components=None) -> Solution:
    from .intersection import split_components

    comps = split_components(graph) if components is None else components
    choices = [None] * len(graph.segments)
    for comp in comps:
        _, assign = solve_tree_component(graph, comp, mode)
        for u, c in assign.items():
            choices[u] = c
    return Solution(Mode(mode), tuple(choices))


def solve_sped_tree(graph: IntersectionGraph, components=None) -> Solution:
    return _solve_forest(graph, Mode.SPED, components)


def solve_ped_tree(graph: IntersectionGraph, components=None) -> Solution:
    return _solve_forest(graph, Mode.PED, components)
