"""Drawing model: points, segments, drawings, per-edge choices and solutions.

Positions along a segment are always measured from its endpoint ``a``, which
is the endpoint with the smaller vertex id.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

# Relative tolerance for degeneracy and resolution tests (times segment length).
TAU = 1e-9


class DrawingError(ValueError):
    """Malformed drawing or solution input."""


class Mode(str, enum.Enum):
    SPED = "sped"
    PED = "ped"
    SHPED = "shped"


class ChoiceKind(str, enum.Enum):
    FULL = "full"
    STUBS = "stubs"
    GAP = "gap"
    NO_GAP = "nogap"


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise DrawingError(f"non-finite coordinate ({self.x}, {self.y})")


@dataclass(frozen=True)
class Segment:
    id: int
    u: int
    v: int
    a: Point
    b: Point

    @property
    def length(self) -> float:
        return math.hypot(self.b.x - self.a.x, self.b.y - self.a.y)

    def point_at(self, d: float) -> Point:
        """Point at distance ``d`` from endpoint ``a``."""
        t = d / self.length
        return Point(self.a.x + t * (self.b.x - self.a.x), self.a.y + t * (self.b.y - self.a.y))


@dataclass(frozen=True)
class Drawing:
    """A straight-line drawing of a simple graph.

    ``vertices`` maps ids to points in input order; ``edges`` keeps the input
    order and orientation. Segment ``i`` corresponds to ``edges[i]``.
    """

    vertices: tuple[tuple[int, Point], ...]
    edges: tuple[tuple[int, int], ...]
    segments: tuple[Segment, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        pos = {}
        for vid, p in self.vertices:
            if vid in pos:
                raise DrawingError(f"duplicate vertex id {vid}")
            pos[vid] = p
        seen = set()
        segs = []
        for i, (u, v) in enumerate(self.edges):
            if u == v:
                raise DrawingError(f"self-loop at vertex {u} (edge {i})")
            for w in (u, v):
                if w not in pos:
                    raise DrawingError(f"edge {i} ({u}, {v}) references unknown vertex {w}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise DrawingError(f"duplicate edge ({u}, {v})")
            seen.add(key)
            lo, hi = key
            seg = Segment(i, u, v, pos[lo], pos[hi])
            if seg.length <= 0.0:
                raise DrawingError(f"zero-length segment for edge {i} ({u}, {v})")
            segs.append(seg)
        object.__setattr__(self, "segments", tuple(segs))

    @classmethod
    def from_points(cls, points: Sequence[tuple[float, float]], edges: Iterable[tuple[int, int]]) -> "Drawing":
        verts = tuple((i, Point(float(x), float(y))) for i, (x, y) in enumerate(points))
        return cls(verts, tuple((int(u), int(v)) for u, v in edges))

    @property
    def positions(self) -> dict[int, Point]:
        return dict(self.vertices)

    @property
    def total_length(self) -> float:
        return math.fsum(s.length for s in self.segments)

    def edge_index(self) -> dict[tuple[int, int], int]:
        return {(min(u, v), max(u, v)): i for i, (u, v) in enumerate(self.edges)}

    def to_json(self) -> str:
        data = {
            "vertices": [{"id": vid, "x": p.x, "y": p.y} for vid, p in self.vertices],
            "edges": [[u, v] for u, v in self.edges],
        }
        return json.dumps(data)


@dataclass(frozen=True)
class Choice:
    """How one segment is drawn.

    ``stub`` is the per-side stub length for STUBS; ``gap`` the erased
    interval ``(lo, hi)`` for GAP. ``ink`` is the drawn length.
    """

    kind: ChoiceKind
    ink: float
    stub: Optional[float] = None
    gap: Optional[tuple[float, float]] = None

    @classmethod
    def full(cls, length: float) -> "Choice":
        return cls(ChoiceKind.FULL, length)

    @classmethod
    def no_gap(cls, length: float) -> "Choice":
        return cls(ChoiceKind.NO_GAP, length)

    @classmethod
    def stubs(cls, stub: float, length: float) -> "Choice":
        if stub < 0 or stub > length / 2 * (1 + TAU):
            raise DrawingError(f"stub length {stub} outside [0, {length / 2}]")
        return cls(ChoiceKind.STUBS, 2.0 * stub, stub=stub)

    @classmethod
    def gap_between(cls, lo: float, hi: float, length: float) -> "Choice":
        if not (0.0 <= lo <= hi <= length * (1 + TAU)):
            raise DrawingError(f"gap [{lo}, {hi}] outside segment of length {length}")
        return cls(ChoiceKind.GAP, length - (hi - lo), gap=(lo, hi))

    def resolves(self, d: float, length: float) -> bool:
        """Does this choice hide a crossing at distance ``d`` from endpoint a?

        Closed semantics: a stub ending exactly at the crossing, or a gap
        whose boundary lies on it, hides it.
        """
        tol = TAU * length
        if self.kind is ChoiceKind.STUBS:
            return min(d, length - d) >= self.stub - tol
        if self.kind is ChoiceKind.GAP:
            lo, hi = self.gap
            return lo - tol <= d <= hi + tol
        return False

    def drawn_pieces(self, length: float) -> list[tuple[float, float]]:
        """Drawn intervals along the segment, as (start, end) distances from a."""
        if self.kind is ChoiceKind.STUBS:
            if 2.0 * self.stub >= length:
                return [(0.0, length)]
            return [p for p in ((0.0, self.stub), (length - self.stub, length)) if p[1] > p[0]]
        if self.kind is ChoiceKind.GAP:
            lo, hi = self.gap
            return [p for p in ((0.0, lo), (hi, length)) if p[1] > p[0]]
        return [(0.0, length)]

    def key(self) -> tuple:
        return (self.kind.value, self.stub, self.gap)


@dataclass(frozen=True)
class Solution:
    """A choice per segment (indexed by segment id)."""

    mode: Mode
    choices: tuple[Optional[Choice], ...]
    delta: Optional[float] = None

    @property
    def ink(self) -> float:
        return ink(self)


def ink(solution: Solution) -> float:
    missing = [i for i, c in enumerate(solution.choices) if c is None]
    if missing:
        raise DrawingError(f"solution has no choice for segments {missing}")
    return math.fsum(c.ink for c in solution.choices)


_ALLOWED = {
    Mode.SPED: {ChoiceKind.FULL, ChoiceKind.STUBS},
    Mode.SHPED: {ChoiceKind.FULL, ChoiceKind.STUBS},
    Mode.PED: set(ChoiceKind),
}


def validate_solution(drawing: Drawing, solution: Solution) -> list[tuple[int, int]]:
    """Return the crossings (pairs of segment ids) left unresolved.

    An empty list means the solution is a valid partial edge drawing.
    """
    from .intersection import compute_crossings

    if len(solution.choices) != len(drawing.segments):
        raise DrawingError(
            f"solution covers {len(solution.choices)} segments, drawing has {len(drawing.segments)}"
        )
    for i, c in enumerate(solution.choices):
        if c is None:
            raise DrawingError(f"no choice for segment {i}")
        if c.kind not in _ALLOWED[solution.mode]:
            raise DrawingError(f"choice kind {c.kind.value} not allowed in mode {solution.mode.value}")
    segs = drawing.segments
    bad = []
    for x in compute_crossings(drawing):
        cu, cv = solution.choices[x.u], solution.choices[x.v]
        if not (cu.resolves(x.du, segs[x.u].length) or cv.resolves(x.dv, segs[x.v].length)):
            bad.append((x.u, x.v))
    return bad


def scale_drawing(drawing: Drawing, c: float) -> Drawing:
    if not (c > 0 and math.isfinite(c)):
        raise DrawingError(f"scale factor must be positive and finite, got {c}")
    verts = tuple((vid, Point(p.x * c, p.y * c)) for vid, p in drawing.vertices)
    return Drawing(verts, drawing.edges)


# -- file formats -----------------------------------------------------------


def load_drawing(text: str | bytes) -> Drawing:
    try:
        data = json.loads(text)
        verts = tuple((int(v["id"]), Point(float(v["x"]), float(v["y"]))) for v in data["vertices"])
        edges = tuple((int(e[0]), int(e[1])) for e in data["edges"])
    except (KeyError, TypeError, IndexError, ValueError) as exc:
        if isinstance(exc, DrawingError):
            raise
        raise DrawingError(f"cannot parse drawing: {exc}") from exc
    return Drawing(verts, edges)


def save_drawing(drawing: Drawing) -> str:
    return drawing.to_json()


def solution_to_dict(drawing: Drawing, solution: Solution) -> dict:
    out = []
    for (u, v), c in zip(drawing.edges, solution.choices):
        kind = "full" if c.kind in (ChoiceKind.FULL, ChoiceKind.NO_GAP) else c.kind.value
        out.append(
            {
                "edge": [u, v],
                "kind": kind,
                "stub": c.stub,
                "gap": list(c.gap) if c.gap is not None else None,
            }
        )
    return {"mode": solution.mode.value, "ink": ink(solution), "delta": solution.delta, "choices": out}


def save_solution(drawing: Drawing, solution: Solution, timestamp: Optional[str] = None) -> str:
    data = solution_to_dict(drawing, solution)
    if timestamp is not None:
        data = {"generated": timestamp, **data}
    return json.dumps(data, indent=1)


def load_solution(drawing: Drawing, text: str | bytes) -> Solution:
    try:
        data = json.loads(text)
        mode = Mode(data["mode"])
        index = drawing.edge_index()
        choices: list[Optional[Choice]] = [None] * len(drawing.segments)
        for entry in data["choices"]:
            u, v = entry["edge"]
            key = (min(u, v), max(u, v))
            if key not in index:
                raise DrawingError(f"solution references unknown edge ({u}, {v})")
            seg = drawing.segments[index[key]]
            kind = entry["kind"]
            if kind == "full":
                c = Choice.full(seg.length)
            elif kind == "stubs":
                c = Choice.stubs(float(entry["stub"]), seg.length)
            elif kind == "gap":
                lo, hi = entry["gap"]
                c = Choice.gap_between(float(lo), float(hi), seg.length)
            else:
                raise DrawingError(f"unknown choice kind {kind!r}")
            choices[index[key]] = c
        delta = data.get("delta")
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, DrawingError):
            raise
        raise DrawingError(f"cannot parse solution: {exc}") from exc
    return Solution(mode, tuple(choices), None if delta is None else float(delta))
