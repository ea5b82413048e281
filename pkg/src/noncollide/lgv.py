"""Nonintersecting-path determinants on finite acyclic directed graphs.

The single-path Green function G(u, v) sums edge-weight products over all
directed u -> v paths. For D-compatible source/sink sets, det[G(u_i, v_j)]
equals the weighted count of nonintersecting path tuples; the cancellation
argument behind that identity (swap the tails of the two lowest-indexed
paths through the last intersection vertex) is exposed here as ``tail_swap``
so it can be tested directly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from graphlib import CycleError, TopologicalSorter
from itertools import permutations, product
from typing import Hashable, Iterable, Sequence

from ._exact import ExactNumber, det_bareiss

Vertex = Hashable

DEFAULT_ENUMERATION_CAP = 10**7


class EnumerationCapError(RuntimeError):
    """Raised when a brute-force operation would exceed its tuple budget."""


class PathGraph:
    """Immutable weighted acyclic digraph with an explicit vertex total order.

    The ordering (``order``) is part of the structure: the involution needs a
    deterministic "last vertex of intersection". If no order is supplied,
    construction order is used.
    """

    def __init__(
        self,
        edges: Iterable[tuple[Vertex, Vertex, ExactNumber]],
        vertices: Iterable[Vertex] = (),
        order: Sequence[Vertex] | None = None,
    ):
        self._weights: dict[tuple[Vertex, Vertex], ExactNumber] = {}
        self._succ: dict[Vertex, list[Vertex]] = {}
        self._pred: dict[Vertex, list[Vertex]] = {}
        seen: list[Vertex] = []

        def touch(v: Vertex) -> None:
            if v not in self._succ:
                self._succ[v] = []
                self._pred[v] = []
                seen.append(v)

        for v in vertices:
            touch(v)
        for u, v, w in edges:
            touch(u)
            touch(v)
            if (u, v) in self._weights:
                raise ValueError(f"duplicate edge {u} -> {v}")
            self._weights[(u, v)] = w
            self._succ[u].append(v)
            self._pred[v].append(u)

        if order is None:
            order = seen
        order = list(order)
        if len(order) != len(seen) or set(order) != set(seen):
            raise ValueError("order must list every vertex exactly once")
        self._rank = {v: i for i, v in enumerate(order)}
        self._order = tuple(order)

        ts = TopologicalSorter({v: self._pred[v] for v in seen})
        try:
            self._topo = tuple(ts.static_order())
        except CycleError as exc:
            raise ValueError("graph contains a directed cycle") from exc
        # per-source Green function vectors, filled lazily (read-mostly)
        self._green_cache: dict[Vertex, dict[Vertex, ExactNumber]] = {}

    @property
    def vertices(self) -> tuple[Vertex, ...]:
        return self._order

    def rank(self, v: Vertex) -> int:
        """Position of v in the fixed total order."""
        return self._rank[v]

    def successors(self, v: Vertex) -> tuple[Vertex, ...]:
        return tuple(self._succ[v])

    def weight(self, u: Vertex, v: Vertex) -> ExactNumber:
        return self._weights[(u, v)]

    def has_vertex(self, v: Vertex) -> bool:
        return v in self._succ

    def path_weight(self, path: Sequence[Vertex]) -> ExactNumber:
        w: ExactNumber = 1
        for a, b in zip(path, path[1:]):
            w *= self._weights[(a, b)]
        return w

    def to_json(self) -> dict:
        return {
            "vertices": [_vertex_json(v) for v in self._order],
            "order": [_vertex_json(v) for v in self._order],
            "edges": [
                {"from": _vertex_json(u), "to": _vertex_json(v), "weight": _weight_json(w)}
                for (u, v), w in self._weights.items()
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "PathGraph":
        vertices = [_vertex_load(v) for v in data["vertices"]]
        order = [_vertex_load(v) for v in data.get("order", data["vertices"])]
        edges = [
            (
                _vertex_load(e["from"]),
                _vertex_load(e["to"]),
                _weight_load(e.get("weight", 1)),
            )
            for e in data["edges"]
        ]
        return cls(edges, vertices=vertices, order=order)


def _vertex_json(v: Vertex):
    return list(v) if isinstance(v, tuple) else v


def _vertex_load(v) -> Vertex:
    return tuple(v) if isinstance(v, list) else v


def _weight_json(w: ExactNumber):
    return w if isinstance(w, int) else str(w)


def _weight_load(w) -> ExactNumber:
    return w if isinstance(w, int) else Fraction(w)


@dataclass(frozen=True)
class PathTuple:
    """A permutation together with one path per source.

    Path i runs from the i-th source to the sigma(i)-th sink; paths are
    stored as vertex sequences (edges are recoverable because the graph has
    at most one edge per ordered vertex pair).
    """

    permutation: tuple[int, ...]
    paths: tuple[tuple[Vertex, ...], ...]

    def sign(self) -> int:
        sign = 1
        perm = list(self.permutation)
        for i in range(len(perm)):
            while perm[i] != i:
                j = perm[i]
                perm[i], perm[j] = perm[j], perm[i]
                sign = -sign
        return sign

    def weight(self, g: PathGraph) -> ExactNumber:
        w: ExactNumber = 1
        for p in self.paths:
            w *= g.path_weight(p)
        return w

    def intersection_vertices(self) -> set[Vertex]:
        seen: set[Vertex] = set()
        shared: set[Vertex] = set()
        for p in self.paths:
            in_path = set(p)
            shared |= seen & in_path
            seen |= in_path
        return shared


def green_function(g: PathGraph, u: Vertex, v: Vertex) -> ExactNumber:
    """Sum over all directed u -> v paths of the product of edge weights."""
    if not g.has_vertex(u):
        raise KeyError(f"unknown vertex {u!r}")
    if not g.has_vertex(v):
        raise KeyError(f"unknown vertex {v!r}")
    table = g._green_cache.get(u)
    if table is None:
        table = {u: 1}
        for w in g._topo:
            acc = table.get(w, 0)
            if acc == 0:
                continue
            for succ in g.successors(w):
                table[succ] = table.get(succ, 0) + acc * g.weight(w, succ)
        g._green_cache[u] = table
    return table.get(v, 0)


def lgv_determinant(
    g: PathGraph, sources: Sequence[Vertex], sinks: Sequence[Vertex]
) -> ExactNumber:
    """det[G(u_i, v_j)]; equals the nonintersecting-tuple weight when the
    sources are D-compatible with the sinks."""
    if len(sources) != len(sinks):
        raise ValueError("need equally many sources and sinks")
    matrix = [[green_function(g, u, v) for v in sinks] for u in sources]
    return det_bareiss(matrix)


def enumerate_paths(
    g: PathGraph, u: Vertex, v: Vertex, cap: int = DEFAULT_ENUMERATION_CAP
) -> list[tuple[Vertex, ...]]:
    """All directed u -> v paths as vertex sequences."""
    if not g.has_vertex(u) or not g.has_vertex(v):
        raise KeyError("unknown vertex")
    out: list[tuple[Vertex, ...]] = []
    stack = [(u,)]
    while stack:
        path = stack.pop()
        head = path[-1]
        if head == v:
            out.append(path)
            if len(out) > cap:
                raise EnumerationCapError(f"more than {cap} paths {u!r} -> {v!r}")
            continue
        for succ in g.successors(head):
            stack.append(path + (succ,))
    return out


def _tuple_space(
    g: PathGraph,
    sources: Sequence[Vertex],
    sinks: Sequence[Vertex],
    cap: int,
) -> list[list[tuple[Vertex, ...]]]:
    per_pair = [enumerate_paths(g, u, v, cap) for u, v in zip(sources, sinks)]
    total = 1
    for plist in per_pair:
        total *= len(plist)
        if total > cap:
            raise EnumerationCapError(f"tuple space exceeds cap {cap}")
    return per_pair

def _disjoint(paths: Sequence[tuple[Vertex, ...]]) -> bool:
    seen: set[Vertex] = set()
    for p in paths:
        for v in p:
            if v in seen:
                return False
        seen.update(p)
    return True


def brute_force_tuples(
    g: PathGraph,
    sources: Sequence[Vertex],
    sinks: Sequence[Vertex],
    nonintersecting_only: bool = True,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> ExactNumber:
    """Direct evaluation of the identity-pairing tuple sum.

    Sums path-tuple weights over all (P_1, ..., P_N) with P_i from source i
    to sink i, optionally restricted to pairwise vertex-disjoint tuples.
    """
    if len(sources) != len(sinks):
        raise ValueError("need equally many sources and sinks")
    per_pair = _tuple_space(g, sources, sinks, cap)
    total: ExactNumber = 0
    for combo in product(*per_pair):
        if nonintersecting_only and not _disjoint(combo):
            continue
        w: ExactNumber = 1
        for p in combo:
            w *= g.path_weight(p)
        total += w
    return total


def enumerate_tuples(
    g: PathGraph,
    sources: Sequence[Vertex],
    sinks: Sequence[Vertex],
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> list[PathTuple]:
    """Every (sigma, P_1, ..., P_N) with P_i from source i to sink sigma(i)."""
    n = len(sources)
    if n != len(sinks):
        raise ValueError("need equally many sources and sinks")
    out: list[PathTuple] = []
    for perm in permutations(range(n)):
        per_pair = _tuple_space(g, sources, [sinks[k] for k in perm], cap)
        for combo in product(*per_pair):
            out.append(PathTuple(perm, combo))
            if len(out) > cap:
                raise EnumerationCapError(f"tuple space exceeds cap {cap}")
    return out


def tail_swap(c: PathTuple, g: PathGraph) -> PathTuple:
    """Swap the tails of the two lowest-indexed paths through the last
    intersection vertex, composing the permutation with their transposition.

    This is a sign-reversing, weight-preserving involution on intersecting
    tuples; it has no fixed points and preserves the intersection set.
    """
    shared = c.intersection_vertices()
    if not shared:
        raise ValueError("nonintersecting input: tail_swap undefined")
    v = max(shared, key=g.rank)
    through = [i for i, p in enumerate(c.paths) if v in p]
    i, j = through[0], through[1]
    pi, pj = c.paths[i], c.paths[j]
    cut_i = pi.index(v)
    cut_j = pj.index(v)
    new_i = pi[: cut_i + 1] + pj[cut_j + 1 :]
    new_j = pj[: cut_j + 1] + pi[cut_i + 1 :]
    paths = list(c.paths)
    paths[i], paths[j] = new_i, new_j
    perm = list(c.permutation)
    perm[i], perm[j] = perm[j], perm[i]
    return PathTuple(tuple(perm), tuple(paths))


def check_compatibility(
    g: PathGraph,
    sources: Sequence[Vertex],
    sinks: Sequence[Vertex],
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> bool:
    """True iff for every i < j each path u_i -> v_j meets each u_j -> v_i."""
    n = len(sources)
    if n != len(sinks):
        raise ValueError("need equally many sources and sinks")
    for i in range(n):
        for j in range(i + 1, n):
            crossing_a = enumerate_paths(g, sources[i], sinks[j], cap)
            crossing_b = enumerate_paths(g, sources[j], sinks[i], cap)
            if len(crossing_a) * len(crossing_b) > cap:
                raise EnumerationCapError("compatibility check exceeds cap")
            for p in crossing_a:
                pset = set(p)
                for q in crossing_b:
                    if pset.isdisjoint(q):
                        return False
    return True


def walk_graph(horizon: int, x_min: int, x_max: int) -> PathGraph:
    """The spatio-temporal lattice for simple walks: vertices (x, t) with
    x + t even, edges (x, t) -> (x +- 1, t + 1), all weights 1.

    Contains every path between time-0 and time-T vertices with positions in
    [x_min, x_max] (such paths cannot leave the diamond kept here). The
    vertex order is lexicographic in (t, x), so the involution's "last
    intersection vertex" is the latest-in-time, rightmost one.
    """
    vertices = [
        (x, t)
        for t in range(horizon + 1)
        for x in range(
            x_min - min(t, horizon - t), x_max + min(t, horizon - t) + 1
        )
        if (x + t) % 2 == 0
    ]
    vset = set(vertices)
    edges = [
        ((x, t), (x + dx, t + 1), 1)
        for (x, t) in vertices
        for dx in (-1, 1)
        if (x + dx, t + 1) in vset
    ]
    order = sorted(vertices, key=lambda v: (v[1], v[0]))
    return PathGraph(edges, vertices=vertices, order=order)


def load_graph(path: str) -> PathGraph:
    with open(path, "r", encoding="utf-8") as fh:
        return PathGraph.from_json(json.load(fh))
