"""Test and benchmark drawings: hardness gadgets and random layouts."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import networkx as nx
import numpy as np

from .drawing import Drawing
from .intersection import DegenerateDrawingError, IntersectionGraph, build_graph, compute_crossings, metric_graph

GADGETS = ("pair8", "pair4", "clause", "sped-cycle", "ped-cycle", "ped-clause", "ped-weight")


@dataclass(frozen=True)
class GadgetSpec:
    kind: str
    p: int = 3
    alpha: float = 12.0
    beta: float = 1.0

    def __post_init__(self):
        if self.kind not in GADGETS:
            raise ValueError(f"unknown gadget {self.kind!r}; expected one of {GADGETS}")
        if self.kind == "sped-cycle" and self.p < 2:
            raise ValueError("variable cycle needs p >= 2 pairs")
        if self.kind == "ped-cycle" and self.p < 3:
            raise ValueError("PED variable cycle needs p >= 3 segments")
        if self.kind.startswith("ped-"):
            if not (self.alpha > 0 and self.beta > 0):
                raise ValueError("alpha and beta must be positive")
            if self.alpha < 4 * self.beta:
                warnings.warn(f"alpha={self.alpha} < 4*beta={4 * self.beta}; gadget values assume alpha >> beta")


def _unit(ax, ay, bx, by):
    d = math.hypot(bx - ax, by - ay)
    return (bx - ax) / d, (by - ay) / d


def _extended_polygon(corners, ext):
    """Sides of a closed polygon, each prolonged by ``ext`` beyond both corners."""
    segs = []
    n = len(corners)
    for i in range(n):
        (ax, ay), (bx, by) = corners[i], corners[(i + 1) % n]
        ux, uy = _unit(ax, ay, bx, by)
        segs.append(((ax - ext * ux, ay - ext * uy), (bx + ext * ux, by + ext * uy)))
    return segs


def _regular_polygon(n, side):
    if n == 4:
        h = side / 2
        return [(-h, -h), (h, -h), (h, h), (-h, h)]
    r = side / (2 * math.sin(math.pi / n))
    return [(r * math.cos(2 * math.pi * i / n - math.pi / 2), r * math.sin(2 * math.pi * i / n - math.pi / 2)) for i in range(n)]


def from_segments(segs) -> Drawing:
    """Drawing with two fresh vertices per segment."""
    pts, edges = [], []
    for a, b in segs:
        pts.extend([a, b])
        edges.append((len(pts) - 2, len(pts) - 1))
    return Drawing.from_points(pts, edges)


def compose(*drawings: Drawing) -> Drawing:
    """Disjoint union; vertex ids of later drawings are shifted."""
    pts, edges = [], []
    for d in drawings:
        remap = {}
        for vid, p in d.vertices:
            remap[vid] = len(pts)
            pts.append((p.x, p.y))
        edges.extend((remap[u], remap[v]) for u, v in d.edges)
    return Drawing.from_points(pts, edges)


def _pair(la, lb):
    # crossing at (1, 0): distance 1 from (0, 0) and from (1, 1)
    return [((0.0, 0.0), (float(la), 0.0)), ((1.0, 1.0), (1.0, 1.0 - lb))]


def pair_drawing(la: float, lb: float) -> Drawing:
    """Two segments of lengths ``la`` and ``lb`` crossing at distance 1 from one end of each."""
    if min(la, lb) <= 2:
        raise ValueError("both lengths must exceed 2")
    return from_segments(_pair(la, lb))


def _clause_triangle_sped():
    return _extended_polygon([(0.0, 0.0), (6.0, 0.0), (3.0, 3.0 * math.sqrt(3.0))], 1.0)


_EXPECTED_CROSSINGS = {
    "pair8": lambda s: 1,
    "pair4": lambda s: 1,
    "clause": lambda s: 3,
    "sped-cycle": lambda s: 2 * s.p,
    "ped-cycle": lambda s: s.p,
    "ped-clause": lambda s: 18,
    "ped-weight": lambda s: 4,
}


class GadgetNotDrawable(ValueError):
    pass


def gadget(spec: GadgetSpec) -> Drawing:
    if spec.kind == "pair8":
        segs = _pair(8, 8)
    elif spec.kind == "pair4":
        segs = _pair(4, 4)
    elif spec.kind == "clause":
        segs = _clause_triangle_sped()
    elif spec.kind == "sped-cycle":
        segs = _extended_polygon(_regular_polygon(2 * spec.p, 6.0), 1.0)
    elif spec.kind == "ped-cycle":
        segs = _extended_polygon(_regular_polygon(spec.p, spec.alpha), spec.beta)
    elif spec.kind == "ped-weight":
        segs = _extended_polygon(_regular_polygon(4, 18 * spec.alpha), spec.beta)
    else:
        raise GadgetNotDrawable(
            "the PED clause gadget's crossing positions admit no straight-line drawing; "
            "use gadget_graph() for its intersection graph"
        )
    drawing = from_segments(segs)
    found = len(compute_crossings(drawing))
    expected = _EXPECTED_CROSSINGS[spec.kind](spec)
    if found != expected:
        raise ValueError(f"gadget {spec.kind} produced {found} crossings, expected {expected}")
    return drawing


def ped_clause_graph(alpha: float, beta: float) -> IntersectionGraph:
    """Intersection graph of the PED clause gadget, built from its crossing table.

    Segments 0-2 form the central triangle (length 4 alpha + 2 beta); segment
    ``i`` meets ``i+1`` at ``beta + alpha`` on ``i`` and ``beta`` on ``i+1``,
    and its weight cycle at ``4 alpha + beta``. Segments ``3 + 4i .. 6 + 4i``
    form weight cycle ``i`` (length 18 alpha + 2 beta, corners ``beta`` from
    the ends); the first one is crossed at its midpoint.
    """
    tri, wl = 4 * alpha + 2 * beta, 18 * alpha + 2 * beta
    lengths = [tri] * 3 + [wl] * 12
    table = []
    for i in range(3):
        table.append((i, (i + 1) % 3, beta + alpha, beta))
        w = 3 + 4 * i
        table.append((i, w, 4 * alpha + beta, wl / 2))
        for j in range(4):
            table.append((w + j, w + (j + 1) % 4, wl - beta, beta))
    return metric_graph(lengths, table)


def gadget_graph(spec: GadgetSpec) -> IntersectionGraph:
    """Intersection graph of any gadget, including the metric-only clause."""
    if spec.kind == "ped-clause":
        return ped_clause_graph(spec.alpha, spec.beta)
    return build_graph(gadget(spec))


# -- random instances -------------------------------------------------------

LAYOUTS = ("spring", "circular")


@dataclass(frozen=True)
class LayoutSpec:
    n: int
    m: int
    seed: int = 0
    layout: str = "spring"
    iterations: int = 50
    scale: float = 100.0

    def __post_init__(self):
        if self.layout not in LAYOUTS:
            raise ValueError(f"unknown layout {self.layout!r}")
        if self.n < 0 or self.m < 0 or self.m > self.n * (self.n - 1) // 2:
            raise ValueError(f"G({self.n}, {self.m}) is not a simple graph")


def chord_crossings(pos: np.ndarray, edges: np.ndarray) -> int:
    """Crossing chords when vertex ``v`` sits at slot ``pos[v]`` of a circle."""
    a, b = pos[edges[:, 0]], pos[edges[:, 1]]
    lo, hi = np.minimum(a, b), np.maximum(a, b)
    inter = (lo[:, None] < lo[None, :]) & (lo[None, :] < hi[:, None]) & (hi[:, None] < hi[None, :])
    return int(inter.sum())


def _slots(order):
    pos = np.empty(len(order), dtype=int)
    pos[order] = np.arange(len(order))
    return pos


def _improve(order, edges):
    # first-improvement local search over single-vertex moves and reversals
    n = len(order)
    best = chord_crossings(_slots(order), edges)
    improved = True
    while improved:
        improved = False
        for v in range(n):
            rest = [x for x in order if x != v]
            for j in range(n):
                cand = rest[:j] + [v] + rest[j:]
                c = chord_crossings(_slots(cand), edges)
                if c < best:
                    best, order, improved = c, cand, True
        for i in range(n):
            for j in range(i + 2, n + 1):
                cand = order[:i] + order[i:j][::-1] + order[j:]
                c = chord_crossings(_slots(cand), edges)
                if c < best:
                    best, order, improved = c, cand, True
    return order, best


def circle_order(g: nx.Graph, starts: int = 4) -> list[int]:
    """Vertex order around a circle with few chord crossings.

    Components are laid out one after another in DFS preorder. The largest
    one is started from each of its ``starts`` highest-degree vertices and
    the best locally optimal order is kept.
    """
    nodes = sorted(g.nodes())
    if g.number_of_edges() == 0:
        return nodes
    edges = np.array(sorted(g.edges()), dtype=int).reshape(-1, 2)
    comps = sorted((sorted(c) for c in nx.connected_components(g)), key=lambda c: c[0])
    big = max(comps, key=len)
    roots = sorted(big, key=lambda v: (-g.degree(v), v))[:starts]
    best = None
    for r in roots:
        order = []
        for comp in comps:
            src = r if comp is big else comp[0]
            order += list(nx.dfs_preorder_nodes(g.subgraph(comp), source=src))
        order, c = _improve(order, edges)
        if best is None or c < best[1]:
            best = (order, c)
    return best[0]


def _layout(g: nx.Graph, spec: LayoutSpec) -> np.ndarray:
    n = spec.n
    if spec.layout == "circular":
        ang = 2 * np.pi * np.arange(n) / max(n, 1)
        pts = np.empty((n, 2))
        pts[circle_order(g)] = spec.scale * np.column_stack([np.cos(ang), np.sin(ang)])
        return pts
    pos = nx.spring_layout(g, iterations=spec.iterations, seed=spec.seed, scale=spec.scale)
    return np.array([pos[i] for i in range(n)], dtype=float)


def random_instance(spec: LayoutSpec, max_retries: int = 20, jitter: float = 1e-4) -> Drawing:
    """G(n, m) drawn with a spring or circular layout.

    The circular layout spaces vertices evenly on a circle in the order
    given by ``circle_order``.

    Degenerate drawings (endpoint touching, collinear overlap) are retried
    with every coordinate shifted by uniform noise of ``jitter * scale``,
    drawn from a generator seeded by ``(seed, attempt)``.
    """
    g = nx.gnm_random_graph(spec.n, spec.m, seed=spec.seed)
    base = _layout(g, spec)
    edges = sorted((min(u, v), max(u, v)) for u, v in g.edges())
    for attempt in range(max_retries + 1):
        pts = base
        if attempt:
            rng = np.random.default_rng([spec.seed, attempt])
            pts = base + rng.uniform(-1, 1, base.shape) * jitter * spec.scale
        try:
            drawing = Drawing.from_points([tuple(p) for p in pts], edges)
            compute_crossings(drawing)
            return drawing
        except DegenerateDrawingError:
            continue
    raise RuntimeError(f"could not produce a non-degenerate drawing for {spec} in {max_retries} retries")
