"""Reference solvers: exhaustive enumeration and the homogeneous stub ratio."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .drawing import TAU, Choice, Drawing, Mode, Solution
from .intersection import IntersectionGraph, build_graph, choice_sets

DEFAULT_BUDGET = 100_000_000
_BLOCK = 1 << 18


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class OracleResult:
    ink: float
    count: int
    witness: Solution
    enumerated: int


def _unique_choices(cs, length):
    # choices that hide the same crossings with the same ink (up to float
    # noise from distinct-but-equal positions) describe one drawing
    tol = TAU * length
    kept = []
    for c, res in zip(cs.choices, cs.resolved):
        if not any(k.kind is c.kind and r == res and abs(k.ink - c.ink) <= tol for k, r in kept):
            kept.append((c, res))
    return kept


def brute_force(
    drawing: Drawing, mode: Mode, budget: int = DEFAULT_BUDGET, graph: IntersectionGraph | None = None
) -> OracleResult:
    """Enumerate every choice vector, keep the valid ones, report the best.

    Choices of one segment that hide the same crossings with equal ink are
    merged first. The optimum count includes
    every vector within ``TAU * total length`` of the best ink. Enumeration
    runs in lexicographic order of (segment id, choice index), vectorized over
    the trailing segments; the witness is the first optimal vector.
    """
    mode = Mode(mode)
    g = graph if graph is not None else build_graph(drawing)
    options = [_unique_choices(cs, g.length(cs.vertex)) for cs in choice_sets(g, mode)]
    m = len(options)
    sizes = [len(o) for o in options]
    total = math.prod(sizes)
    if total > budget:
        raise BudgetExceeded(f"{total} choice vectors exceed budget {budget}")
    if m == 0:
        return OracleResult(0.0, 1, Solution(mode, ()), 1)

    # split into an outer python loop and an inner numpy block
    split = m
    block = 1
    while split > 0 and block * sizes[split - 1] <= _BLOCK:
        split -= 1
        block *= sizes[split]
    inner = list(range(split, m))
    nd = len(inner)

    inks = [np.array([c.ink for c, _ in o]) for o in options]
    hides = {}
    for x in g.crossings:
        for a, b in ((x.u, x.v), (x.v, x.u)):
            hides[(a, b)] = np.array([b in res for _, res in options[a]], dtype=bool)

    def expand(vec, seg):
        shape = [1] * nd
        shape[seg - split] = len(vec)
        return vec.reshape(shape)

    inner_ink = np.zeros([1] * nd)
    for s in inner:
        inner_ink = inner_ink + expand(inks[s], s)
    inner_ink = np.broadcast_to(inner_ink, [sizes[s] for s in inner]) if nd else inner_ink
    inner_valid = np.ones([sizes[s] for s in inner], dtype=bool)
    outer_pairs, mixed = [], []
    for x in g.crossings:
        u, v = x.u, x.v
        if u >= split and v >= split:
            ok = hides[(u, v)][:, None] | hides[(v, u)][None, :]
            shape = [1] * nd
            shape[u - split], shape[v - split] = ok.shape
            inner_valid &= ok.reshape(shape)
        elif u < split and v < split:
            outer_pairs.append((u, v))
        else:
            o, i = (u, v) if u < split else (v, u)
            mixed.append((o, i))

    def blocks():
        for combo in itertools.product(*(range(sizes[s]) for s in range(split))):
            if any(not (hides[(u, v)][combo[u]] or hides[(v, u)][combo[v]]) for u, v in outer_pairs):
                yield combo, None, None
                continue
            valid = inner_valid.copy()
            for o, i in mixed:
                if not hides[(o, i)][combo[o]]:
                    valid &= expand(hides[(i, o)], i)
            base = math.fsum(inks[s][combo[s]] for s in range(split))
            yield combo, valid, inner_ink + base

    best = -math.inf
    for _, valid, val in blocks():
        if valid is not None and valid.any():
            best = max(best, float(val[valid].max()))
    if best == -math.inf:
        raise AssertionError("no valid choice vector; a full/stub split always exists")
    tol = TAU * drawing.total_length
    count = 0
    witness = None
    for combo, valid, val in blocks():
        if valid is None:
            continue
        hit = valid & (val >= best - tol)
        n = int(np.count_nonzero(hit))
        if n and witness is None:
            flat = int(np.flatnonzero(hit.ravel())[0])
            rest = np.unravel_index(flat, hit.shape) if nd else ()
            witness = tuple(combo) + tuple(int(r) for r in rest)
        count += n
    sol = Solution(mode, tuple(options[s][witness[s]][0] for s in range(m)))
    return OracleResult(best, count, sol, total)


def shped_ratio(drawing: Drawing, graph: IntersectionGraph | None = None) -> tuple[float, Solution]:
    """Largest common stub ratio that hides every crossing.

    Each crossing is hidden by whichever of its two segments needs the larger
    ratio; the answer is the minimum of these over all crossings, capped at 1/2.
    """
    g = graph if graph is not None else build_graph(drawing)
    segs = drawing.segments
    delta = 0.5
    for x in g.crossings:
        lu, lv = segs[x.u].length, segs[x.v].length
        ru = min(x.du, lu - x.du) / lu
        rv = min(x.dv, lv - x.dv) / lv
        delta = min(delta, max(ru, rv))
    choices = tuple(
        Choice.full(s.length) if delta >= 0.5 else Choice.stubs(delta * s.length, s.length) for s in segs
    )
    return delta, Solution(Mode.SHPED, choices, delta)
