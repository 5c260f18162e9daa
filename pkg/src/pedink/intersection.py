"""Segment crossings, the intersection graph, and per-segment choice sets."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .drawing import TAU, Choice, Drawing, DrawingError, Point, Segment


class DegenerateDrawingError(DrawingError):
    """Overlapping segments or a crossing that touches a segment endpoint."""


@dataclass(frozen=True)
class Crossing:
    u: int
    v: int
    point: Point
    du: float
    dv: float

    def position_on(self, seg: int) -> float:
        if seg == self.u:
            return self.du
        if seg == self.v:
            return self.dv
        raise ValueError(f"crossing ({self.u}, {self.v}) does not involve segment {seg}")

    def other(self, seg: int) -> int:
        return self.v if seg == self.u else self.u


def _cross(ax, ay, bx, by):
    return ax * by - ay * bx


def _crossing(s: Segment, t: Segment) -> Optional[Crossing]:
    px, py = s.a.x, s.a.y
    rx, ry = s.b.x - px, s.b.y - py
    qx, qy = t.a.x, t.a.y
    sx, sy = t.b.x - qx, t.b.y - qy
    ls, lt = s.length, t.length
    shared = {s.u, s.v} & {t.u, t.v}
    denom = _cross(rx, ry, sx, sy)
    wx, wy = qx - px, qy - py
    if abs(denom) <= TAU * ls * lt:
        # parallel; collinear if t.a lies on the line of s
        if abs(_cross(wx, wy, rx, ry)) > TAU * ls * max(ls, lt):
            return None
        # project t onto s and measure the overlap length
        t0 = (wx * rx + wy * ry) / ls
        t1 = ((t.b.x - px) * rx + (t.b.y - py) * ry) / ls
        lo, hi = max(0.0, min(t0, t1)), min(ls, max(t0, t1))
        if hi - lo > TAU * min(ls, lt):
            raise DegenerateDrawingError(f"degenerate overlap between segments {s.id} and {t.id}")
        if hi - lo >= -TAU * min(ls, lt) and not shared:
            raise DegenerateDrawingError(f"endpoint-touching crossing between segments {s.id} and {t.id}")
        return None
    ts = _cross(wx, wy, sx, sy) / denom
    tt = _cross(wx, wy, rx, ry) / denom
    if ts < -TAU or ts > 1 + TAU or tt < -TAU or tt > 1 + TAU:
        return None
    if shared:
        # two non-collinear segments meet only at their common vertex
        return None
    if min(ts, 1 - ts) <= TAU or min(tt, 1 - tt) <= TAU:
        raise DegenerateDrawingError(f"endpoint-touching crossing between segments {s.id} and {t.id}")
    point = Point(px + ts * rx, py + ts * ry)
    return Crossing(s.id, t.id, point, ts * ls, tt * lt)


def compute_crossings(drawing: Drawing) -> list[Crossing]:
    """All proper interior crossings, ordered by (u, v) with u < v."""
    segs = drawing.segments
    out = []
    for i in range(len(segs)):
        si = segs[i]
        ax0, ax1 = sorted((si.a.x, si.b.x))
        ay0, ay1 = sorted((si.a.y, si.b.y))
        pad = TAU * si.length
        for j in range(i + 1, len(segs)):
            sj = segs[j]
            if (
                max(sj.a.x, sj.b.x) < ax0 - pad
                or min(sj.a.x, sj.b.x) > ax1 + pad
                or max(sj.a.y, sj.b.y) < ay0 - pad
                or min(sj.a.y, sj.b.y) > ay1 + pad
            ):
                continue
            x = _crossing(si, sj)
            if x is not None:
                out.append(x)
    return out


@dataclass(frozen=True)
class ChoiceSet:
    """Candidate choices for one segment and the neighbors each one resolves."""

    vertex: int
    choices: tuple[Choice, ...]
    resolved: tuple[frozenset, ...]

    def __len__(self):
        return len(self.choices)


class IntersectionGraph:
    """One vertex per segment, one edge per crossing.

    ``adjacency[u]`` lists ``(neighbor, crossing)`` sorted by the crossing's
    position along ``u``.
    """

    def __init__(self, drawing: Drawing, crossings: list[Crossing]):
        self.drawing = drawing
        self.segments = drawing.segments
        self.crossings = crossings
        adj: list[list[tuple[int, Crossing]]] = [[] for _ in self.segments]
        for x in crossings:
            adj[x.u].append((x.v, x))
            adj[x.v].append((x.u, x))
        for u, lst in enumerate(adj):
            lst.sort(key=lambda e: e[1].position_on(u))
        self.adjacency = [tuple(lst) for lst in adj]
        self._between = {}
        for x in crossings:
            self._between[(x.u, x.v)] = x
            self._between[(x.v, x.u)] = x

    @property
    def vertices(self) -> range:
        return range(len(self.segments))

    @property
    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)

    k = max_degree

    @property
    def n_crossings(self) -> int:
        return len(self.crossings)

    def degree(self, u: int) -> int:
        return len(self.adjacency[u])

    def neighbors(self, u: int) -> list[int]:
        return [v for v, _ in self.adjacency[u]]

    def positions(self, u: int) -> list[float]:
        return [x.position_on(u) for _, x in self.adjacency[u]]

    def length(self, u: int) -> float:
        return self.segments[u].length

    def crossing(self, u: int, v: int) -> Crossing:
        return self._between[(u, v)]

    def neighbor_map(self, vertices=None) -> dict[int, set[int]]:
        vs = self.vertices if vertices is None else vertices
        keep = set(vs)
        return {u: {v for v in self.neighbors(u) if v in keep} for u in vs}

    def dump(self) -> str:
        """JSON debug dump: adjacency and crossing positions per vertex."""
        return json.dumps(
            {
                "vertices": [
                    {
                        "id": u,
                        "length": self.length(u),
                        "neighbors": self.neighbors(u),
                        "positions": self.positions(u),
                    }
                    for u in self.vertices
                ],
                "k": self.max_degree,
                "crossings": self.n_crossings,
            }
        )


def build_graph(drawing: Drawing) -> IntersectionGraph:
    return IntersectionGraph(drawing, compute_crossings(drawing))


def metric_graph(lengths, table) -> IntersectionGraph:
    """Intersection graph from segment lengths and a crossing table.

    ``table`` holds ``(u, v, du, dv)`` rows. The carrier drawing lays the
    segments out as parallel horizontal bars, so only the table defines
    crossings; use ``unresolved`` (not ``validate_solution``) to check
    solutions against it.
    """
    pts, edges = [], []
    for i, L in enumerate(lengths):
        pts.extend([(0.0, float(i)), (float(L), float(i))])
        edges.append((2 * i, 2 * i + 1))
    drawing = Drawing.from_points(pts, edges)
    segs = drawing.segments
    crossings = []
    for u, v, du, dv in table:
        if u == v or not (0 < du < segs[u].length and 0 < dv < segs[v].length):
            raise DrawingError(f"bad crossing row {(u, v, du, dv)}")
        if u > v:
            u, v, du, dv = v, u, dv, du
        crossings.append(Crossing(u, v, segs[u].point_at(du), float(du), float(dv)))
    crossings.sort(key=lambda x: (x.u, x.v))
    return IntersectionGraph(drawing, crossings)


def unresolved(graph: IntersectionGraph, solution) -> list[tuple[int, int]]:
    """Crossings of ``graph`` that ``solution`` leaves visible."""
    bad = []
    for x in graph.crossings:
        cu, cv = solution.choices[x.u], solution.choices[x.v]
        if not (cu.resolves(x.du, graph.length(x.u)) or cv.resolves(x.dv, graph.length(x.v))):
            bad.append((x.u, x.v))
    return bad


def _resolved_by(graph: IntersectionGraph, u: int, choice: Choice) -> frozenset:
    L = graph.length(u)
    return frozenset(v for v, x in graph.adjacency[u] if choice.resolves(x.position_on(u), L))


def sped_choices(graph: IntersectionGraph, u: int) -> ChoiceSet:
    """Full segment first, then one stub pair per crossing, shortest first."""
    L = graph.length(u)
    stubs = sorted(min(d, L - d) for d in graph.positions(u))
    choices = [Choice.full(L)] + [Choice.stubs(s, L) for s in stubs]
    return ChoiceSet(u, tuple(choices), tuple(_resolved_by(graph, u, c) for c in choices))


def distinct_positions(graph: IntersectionGraph, u: int) -> list[float]:
    L = graph.length(u)
    out: list[float] = []
    for d in graph.positions(u):
        if not out or d - out[-1] > TAU * L:
            out.append(d)
    return out


def ped_choices(graph: IntersectionGraph, u: int) -> ChoiceSet:
    """Every gap spanning crossing positions ``p_i <= p_j`` (zero width allowed)."""
    L = graph.length(u)
    pos = distinct_positions(graph, u)
    if not pos:
        choices = [Choice.no_gap(L)]
    else:
        choices = [
            Choice.gap_between(pos[i], pos[j], L) for i in range(len(pos)) for j in range(i, len(pos))
        ]
    return ChoiceSet(u, tuple(choices), tuple(_resolved_by(graph, u, c) for c in choices))


def choice_sets(graph: IntersectionGraph, mode) -> list[ChoiceSet]:
    from .drawing import Mode

    mode = Mode(mode)
    fn = {Mode.SPED: sped_choices, Mode.PED: ped_choices}.get(mode)
    if fn is None:
        raise ValueError(f"no finite choice sets for mode {mode.value}")
    return [fn(graph, u) for u in graph.vertices]


def choices_compatible(graph: IntersectionGraph, u: int, cu: Choice, v: int, cv: Choice) -> bool:
    """True iff the crossing of u and v is hidden by at least one side."""
    x = graph._between.get((u, v))
    if x is None:
        raise ValueError(f"segments {u} and {v} do not cross")
    return cu.resolves(x.position_on(u), graph.length(u)) or cv.resolves(x.position_on(v), graph.length(v))


@dataclass(frozen=True)
class Component:
    vertices: tuple[int, ...]
    n_edges: int
    is_forest: bool

    @property
    def kind(self) -> str:
        return "forest" if self.is_forest else "general"


def split_components(graph: IntersectionGraph) -> list[Component]:
    seen = [False] * len(graph.segments)
    comps = []
    for s in graph.vertices:
        if seen[s]:
            continue
        seen[s] = True
        stack, members = [s], []
        while stack:
            u = stack.pop()
            members.append(u)
            for v in graph.neighbors(u):
                if not seen[v]:
                    seen[v] = True
                    stack.append(v)
        members.sort()
        n_edges = sum(graph.degree(u) for u in members) // 2
        # connected, so acyclic iff |E| = |V| - 1
        comps.append(Component(tuple(members), n_edges, n_edges == len(members) - 1))
    return comps
