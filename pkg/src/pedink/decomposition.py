"""Tree decompositions of intersection graphs and their nice form.

Graphs are passed as adjacency mappings ``{vertex: iterable of neighbors}``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, Optional

EXACT_LIMIT = 12


@dataclass(frozen=True)
class TreeDecomposition:
    """Bags ``bags[t]`` on a tree given by parent links (``None`` for roots)."""

    bags: tuple[frozenset, ...]
    parent: tuple[Optional[int], ...]

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def tree_edges(self):
        return [(t, p) for t, p in enumerate(self.parent) if p is not None]


LEAF, INTRODUCE, FORGET, JOIN = "leaf", "introduce", "forget", "join"


@dataclass(frozen=True)
class NiceNode:
    kind: str
    bag: frozenset
    children: tuple[int, ...]
    vertex: Optional[int] = None


@dataclass(frozen=True)
class NiceTreeDecomposition:
    nodes: tuple[NiceNode, ...]
    root: int

    @property
    def width(self) -> int:
        return max((len(n.bag) for n in self.nodes), default=0) - 1

    @property
    def bags(self):
        return tuple(n.bag for n in self.nodes)

    @property
    def parent(self):
        par = [None] * len(self.nodes)
        for t, n in enumerate(self.nodes):
            for c in n.children:
                par[c] = t
        return tuple(par)

    def postorder(self) -> list[int]:
        out, stack = [], [self.root]
        while stack:
            t = stack.pop()
            out.append(t)
            stack.extend(self.nodes[t].children)
        return out[::-1]

    def to_json(self) -> str:
        return json.dumps(
            {
                "root": self.root,
                "nodes": [
                    {"kind": n.kind, "bag": sorted(n.bag), "children": list(n.children), "vertex": n.vertex}
                    for n in self.nodes
                ],
            }
        )


# -- elimination orderings --------------------------------------------------


def _normalize(adj: Mapping) -> dict[int, set[int]]:
    g = {u: set(vs) for u, vs in adj.items()}
    for u, vs in list(g.items()):
        vs.discard(u)
        for v in vs:
            g.setdefault(v, set()).add(u)
    return g


def min_fill_ordering(adj: Mapping) -> list[int]:
    """Greedy min-fill, ties by min degree, then by vertex id."""
    g = _normalize(adj)
    order = []
    while g:
        best, best_key = None, None
        for v in sorted(g):
            nb = list(g[v])
            fill = 0
            for i in range(len(nb)):
                gi = g[nb[i]]
                for j in range(i + 1, len(nb)):
                    if nb[j] not in gi:
                        fill += 1
            key = (fill, len(nb), v)
            if best_key is None or key < best_key:
                best, best_key = v, key
        nb = g.pop(best)
        for a in nb:
            g[a].discard(best)
            g[a] |= nb - {a}
        order.append(best)
    return order


def ordering_width(adj: Mapping, order) -> int:
    g = _normalize(adj)
    width = -1
    for v in order:
        nb = g.pop(v)
        width = max(width, len(nb))
        for a in nb:
            g[a].discard(v)
            g[a] |= nb - {a}
    return width


def _degeneracy(g: dict[int, set[int]]) -> int:
    g = {u: set(vs) for u, vs in g.items()}
    best = 0
    while g:
        v = min(g, key=lambda x: (len(g[x]), x))
        best = max(best, len(g[v]))
        for a in g.pop(v):
            g[a].discard(v)
    return best


def _has_cycle(g: dict[int, set[int]]) -> bool:
    n_edges = sum(len(vs) for vs in g.values()) // 2
    seen, n_comp = set(), 0
    for s in g:
        if s in seen:
            continue
        n_comp += 1
        stack = [s]
        seen.add(s)
        while stack:
            u = stack.pop()
            for v in g[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
    return n_edges > len(g) - n_comp


def exact_ordering(adj: Mapping) -> list[int]:
    """Optimal elimination ordering by dynamic programming over vertex subsets.

    ``TW(S) = min_v max(TW(S - v), |Q(S - v, v)|)`` where ``Q(S, v)`` are the
    vertices outside ``S + v`` reachable from ``v`` through ``S``.
    Exponential; intended for at most ``EXACT_LIMIT`` vertices.
    """
    g = _normalize(adj)
    verts = sorted(g)
    n = len(verts)
    idx = {v: i for i, v in enumerate(verts)}
    nbm = [0] * n
    for v in verts:
        for w in g[v]:
            nbm[idx[v]] |= 1 << idx[w]
    full = (1 << n) - 1

    def q_size(S, i):
        reach = nbm[i] & ~(1 << i)
        inner = reach & S
        seen = inner
        while inner:
            low = inner & -inner
            inner ^= low
            new = nbm[low.bit_length() - 1] & ~seen & ~(1 << i)
            seen |= new & S
            inner |= new & S
            reach |= new
        return bin(reach & ~S & ~(1 << i)).count("1")

    tw = {0: -1}
    choice = {}
    for S in range(1, full + 1):
        best, arg = None, None
        rest = S
        while rest:
            low = rest & -rest
            rest ^= low
            i = low.bit_length() - 1
            T = S ^ low
            val = max(tw[T], q_size(T, i))
            if best is None or val < best:
                best, arg = val, i
        tw[S] = best
        choice[S] = arg
    # the DP eliminates S - v first, then v: rebuild back to front
    order = []
    S = full
    while S:
        i = choice[S]
        order.append(verts[i])
        S ^= 1 << i
    return order[::-1]


def elimination_ordering(adj: Mapping, exact_limit: int = EXACT_LIMIT) -> list[int]:
    order = min_fill_ordering(adj)
    g = _normalize(adj)
    if 0 < len(g) <= exact_limit:
        lower = max(_degeneracy(g), 2 if _has_cycle(g) else min(1, max((len(v) for v in g.values()), default=0)))
        if ordering_width(g, order) > lower:
            exact = exact_ordering(g)
            if ordering_width(g, exact) < ordering_width(g, order):
                order = exact
    return order


def from_ordering(adj: Mapping, order) -> TreeDecomposition:
    """Bags ``{v} + later neighbors`` in the filled graph, one per vertex.

    Bags contained in their parent are merged away.
    """
    g = _normalize(adj)
    if not g:
        return TreeDecomposition((), ())
    pos = {v: i for i, v in enumerate(order)}
    bag_of = {}
    par_of = {}
    for v in order:
        nb = g.pop(v)
        bag_of[v] = frozenset(nb | {v})
        par_of[v] = min(nb, key=pos.__getitem__) if nb else None
        for a in nb:
            g[a].discard(v)
            g[a] |= nb - {a}
    # join separate elimination trees (disconnected input) under the last root
    roots = [v for v in order if par_of[v] is None]
    for r in roots[:-1]:
        par_of[r] = roots[-1]
    # merge bags that are subsets of their parent bag
    alias = {}
    for v in reversed(order):
        p = par_of[v]
        while p is not None and p in alias:
            p = alias[p]
        par_of[v] = p
        if p is not None and bag_of[v] <= bag_of[p]:
            alias[v] = p
    keep = [v for v in order if v not in alias]
    nid = {v: i for i, v in enumerate(keep)}

    def resolve(p):
        while p is not None and p in alias:
            p = alias[p]
        return p

    bags = tuple(bag_of[v] for v in keep)
    parent = tuple(None if resolve(par_of[v]) is None else nid[resolve(par_of[v])] for v in keep)
    return TreeDecomposition(bags, parent)


def decompose(adj: Mapping, exact_limit: int = EXACT_LIMIT) -> TreeDecomposition:
    return from_ordering(adj, elimination_ordering(adj, exact_limit))


# -- nice form --------------------------------------------------------------


def make_nice(td: TreeDecomposition, adj: Optional[Mapping] = None) -> NiceTreeDecomposition:
    """Leaf/introduce/forget/join form with an empty root bag and equal width.

    Rooted at the first root of ``td``. Children are chained onto their
    parent bag by forgets then introduces; several children are combined
    by a left-deep sequence of binary joins.
    """
    if adj is not None:
        problems = validate_td(adj, td)
        if problems:
            raise ValueError(f"invalid tree decomposition: {problems[0]}")
    nodes: list[NiceNode] = []

    def add(kind, bag, children=(), vertex=None):
        nodes.append(NiceNode(kind, frozenset(bag), tuple(children), vertex))
        return len(nodes) - 1

    if not td.bags:
        root = add(LEAF, frozenset(), ())
        return NiceTreeDecomposition(tuple(nodes), root)

    kids: dict[int, list[int]] = {t: [] for t in range(len(td.bags))}
    roots = []
    for t, p in enumerate(td.parent):
        if p is None:
            roots.append(t)
        else:
            kids[p].append(t)
    if len(roots) != 1:
        raise ValueError(f"tree decomposition has {len(roots)} roots")

    def chain(node, src: frozenset, dst: frozenset):
        bag = set(src)
        for v in sorted(src - dst):
            bag.discard(v)
            node = add(FORGET, bag, (node,), v)
        for v in sorted(dst - src):
            bag.add(v)
            node = add(INTRODUCE, bag, (node,), v)
        return node

    def leaf_chain(bag: frozenset):
        vs = sorted(bag)
        node = add(LEAF, {vs[0]}, (), vs[0])
        return chain(node, frozenset({vs[0]}), bag)

    # post-order over the input tree, no recursion
    order, stack = [], [roots[0]]
    while stack:
        t = stack.pop()
        order.append(t)
        stack.extend(kids[t])
    top = {}
    for t in reversed(order):
        bag = td.bags[t]
        subs = [chain(top[c], td.bags[c], bag) for c in kids[t]]
        if not subs:
            top[t] = leaf_chain(bag)
            continue
        node = subs[0]
        for other in subs[1:]:
            node = add(JOIN, bag, (node, other))
        top[t] = node
    root = chain(top[roots[0]], td.bags[roots[0]], frozenset())
    return NiceTreeDecomposition(tuple(nodes), root)


def validate_td(adj: Mapping, td) -> list[str]:
    """Every violated decomposition axiom, as readable messages."""
    g = _normalize(adj)
    bags = td.bags
    parent = td.parent
    problems = []
    n = len(bags)
    roots = [t for t in range(n) if parent[t] is None]
    if n and len(roots) != 1:
        problems.append(f"tree violation: {len(roots)} roots")
    # acyclic parent links
    for t in range(n):
        seen, p = set(), t
        while p is not None:
            if p in seen:
                problems.append(f"tree violation: cycle through node {t}")
                break
            seen.add(p)
            p = parent[p]
    if problems:
        return problems
    where: dict[int, list[int]] = {}
    for t, b in enumerate(bags):
        for v in b:
            where.setdefault(v, []).append(t)
    for v in sorted(g):
        if v not in where:
            problems.append(f"vertex-cover violation {v}")
    for v, ts in sorted(where.items()):
        if v not in g:
            problems.append(f"unknown vertex {v} in bags")
            continue
        # nodes containing v are connected iff exactly one of them has its parent outside
        tops = [t for t in ts if parent[t] is None or v not in bags[parent[t]]]
        if len(tops) != 1:
            problems.append(f"connectivity violation {v}")
    for u in sorted(g):
        for v in sorted(g[u]):
            if u < v and not any(u in b and v in b for b in bags):
                problems.append(f"edge-cover violation ({u},{v})")
    if isinstance(td, NiceTreeDecomposition):
        problems.extend(_validate_nice(td))
    return problems


def _validate_nice(td: NiceTreeDecomposition) -> list[str]:
    problems = []
    if td.nodes[td.root].bag:
        problems.append("nice violation: root bag not empty")
    for t, n in enumerate(td.nodes):
        ch = [td.nodes[c] for c in n.children]
        if n.kind == LEAF:
            if ch or len(n.bag) != 1 and not (t == td.root and not n.bag):
                problems.append(f"nice violation: leaf {t}")
        elif n.kind == INTRODUCE:
            if len(ch) != 1 or n.vertex in ch[0].bag or n.bag != ch[0].bag | {n.vertex}:
                problems.append(f"nice violation: introduce {t}")
        elif n.kind == FORGET:
            if len(ch) != 1 or n.vertex not in ch[0].bag or n.bag != ch[0].bag - {n.vertex}:
                problems.append(f"nice violation: forget {t}")
        elif n.kind == JOIN:
            if len(ch) != 2 or any(c.bag != n.bag for c in ch):
                problems.append(f"nice violation: join {t}")
        else:
            problems.append(f"nice violation: unknown kind {n.kind!r} at node {t}")
    return problems
