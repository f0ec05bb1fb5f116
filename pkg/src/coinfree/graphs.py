"""Finite connected graphs with loops and parallel edges allowed.

Everything downstream leans on a single total order: vertices and edges
sort by their textual identifier, darts by (edge id, forward before
backward).  All tie-breaking (spanning trees, searches, side-dart
choices) reduces to that order, which is what makes the whole pipeline
deterministic.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .points import GraphPoint, InteriorPoint, VertexPoint


@dataclass(frozen=True)
class EdgeRec:
    id: str
    origin: str
    terminus: str

    @property
    def is_loop(self) -> bool:
        return self.origin == self.terminus


@dataclass(frozen=True)
class Dart:
    """Oriented edge: the forward dart runs origin -> terminus."""

    edge: str
    forward: bool

    def reversed(self) -> Dart:
        return Dart(self.edge, not self.forward)

    def __repr__(self) -> str:
        return f"{self.edge}{'+' if self.forward else '-'}"


def dart_key(d: Dart) -> tuple:
    return (d.edge, 0 if d.forward else 1)


class GraphClass(Enum):
    INTERVAL = "Interval"
    CIRCLE = "Circle"
    BRANCHED = "Branched"


@dataclass(frozen=True)
class Graph:
    name: str
    vertices: tuple[str, ...]
    edges: tuple[EdgeRec, ...]
    _edge_map: dict = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_edge_map", {e.id: e for e in self.edges})

    def edge(self, eid: str) -> EdgeRec:
        return self._edge_map[eid]

    def has_edge(self, eid: str) -> bool:
        return eid in self._edge_map

    def darts(self) -> list[Dart]:
        out = []
        for e in sorted(self.edges, key=lambda e: e.id):
            out.append(Dart(e.id, True))
            out.append(Dart(e.id, False))
        return out

    def darts_at(self, v: str) -> list[Dart]:
        """Darts based at v, in dart order.  A loop contributes both."""
        out = []
        for e in sorted(self.edges, key=lambda e: e.id):
            if e.origin == v:
                out.append(Dart(e.id, True))
            if e.terminus == v:
                out.append(Dart(e.id, False))
        return sorted(out, key=dart_key)

    def degree(self, v: str) -> int:
        return len(self.darts_at(v))

    def base(self, d: Dart) -> str:
        e = self.edge(d.edge)
        return e.origin if d.forward else e.terminus

    def tip(self, d: Dart) -> str:
        e = self.edge(d.edge)
        return e.terminus if d.forward else e.origin

    def point(self, edge: str, t: Fraction) -> GraphPoint:
        """Canonical point: coordinate 0/1 collapses to the vertex."""
        t = Fraction(t)
        if not 0 <= t <= 1:
            raise ValueError(f"coordinate {t} outside [0, 1] on edge {edge!r}")
        e = self.edge(edge)
        if t == 0:
            return VertexPoint(e.origin)
        if t == 1:
            return VertexPoint(e.terminus)
        return InteriorPoint(edge, t)

    def contains_point(self, p: GraphPoint) -> bool:
        if isinstance(p, VertexPoint):
            return p.vertex in self.vertices
        return self.has_edge(p.edge) and 0 < p.t < 1


def validate(g: Graph) -> list[str]:
    """Return the list of violated invariants (empty means valid)."""
    problems = []
    if not g.vertices:
        problems.append("graph has no vertices")
    seen_v = set()
    for v in g.vertices:
        if v in seen_v:
            problems.append(f"duplicate vertex id {v!r}")
        seen_v.add(v)
    seen_e = set()
    for e in g.edges:
        if e.id in seen_e:
            problems.append(f"duplicate edge id {e.id!r}")
        seen_e.add(e.id)
        for end in (e.origin, e.terminus):
            if end not in seen_v:
                problems.append(f"edge {e.id!r} references unknown vertex {end!r}")
    if not g.edges:
        problems.append("graph has no edges")
    if not problems and not _connected(g):
        problems.append("graph is not connected")
    return problems


def _connected(g: Graph) -> bool:
    if not g.vertices:
        return False
    adj: dict[str, set[str]] = {v: set() for v in g.vertices}
    for e in g.edges:
        adj[e.origin].add(e.terminus)
        adj[e.terminus].add(e.origin)
    seen = {g.vertices[0]}
    queue = deque([g.vertices[0]])
    while queue:
        v = queue.popleft()
        for u in adj[v]:
            if u not in seen:
                seen.add(u)
                queue.append(u)
    return len(seen) == len(g.vertices)


def classify(g: Graph) -> GraphClass:
    """Interval (path graph), Circle (every degree 2), or Branched."""
    degrees = [g.degree(v) for v in g.vertices]
    if any(d >= 3 for d in degrees):
        return GraphClass.BRANCHED
    if all(d == 2 for d in degrees):
        return GraphClass.CIRCLE
    return GraphClass.INTERVAL


@dataclass(frozen=True)
class SubdivisionMap:
    """Point relabeling for one edge subdivision, both directions."""

    edge: str
    cut: Fraction
    new_vertex: str
    first: str
    second: str

    def to_new(self, p: GraphPoint) -> GraphPoint:
        if isinstance(p, VertexPoint) or p.edge != self.edge:
            return p
        if p.t == self.cut:
            return VertexPoint(self.new_vertex)
        if p.t < self.cut:
            return InteriorPoint(self.first, p.t / self.cut)
        return InteriorPoint(self.second, (p.t - self.cut) / (1 - self.cut))

    def to_old(self, p: GraphPoint) -> GraphPoint:
        if isinstance(p, VertexPoint):
            if p.vertex == self.new_vertex:
                return InteriorPoint(self.edge, self.cut)
            return p
        if p.edge == self.first:
            return InteriorPoint(self.edge, p.t * self.cut)
        if p.edge == self.second:
            return InteriorPoint(self.edge, self.cut + p.t * (1 - self.cut))
        return p

    # Coordinate maps in the forward frame, for track transport.
    def coord_to_old(self, eid: str, c: Fraction) -> Fraction:
        if eid == self.first:
            return c * self.cut
        if eid == self.second:
            return self.cut + c * (1 - self.cut)
        raise ValueError(eid)


def _fresh_id(base: str, taken: set[str]) -> str:
    name = base
    while name in taken:
        name += "'"
    return name


def subdivide(g: Graph, eid: str, t: Fraction) -> tuple[Graph, SubdivisionMap]:
    """Cut edge eid at interior coordinate t into two edges and a new vertex."""
    t = Fraction(t)
    if not 0 < t < 1:
        raise ValueError(f"subdivision point {t} must be interior")
    e = g.edge(eid)
    taken = set(g.vertices) | {r.id for r in g.edges}
    new_v = _fresh_id(f"{eid}.x", taken)
    first = _fresh_id(f"{eid}.1", taken | {new_v})
    second = _fresh_id(f"{eid}.2", taken | {new_v, first})
    vertices = tuple(sorted(g.vertices + (new_v,)))
    edges = tuple(
        sorted(
            [r for r in g.edges if r.id != eid]
            + [EdgeRec(first, e.origin, new_v), EdgeRec(second, new_v, e.terminus)],
            key=lambda r: r.id,
        )
    )
    sub = SubdivisionMap(eid, t, new_v, first, second)
    return Graph(g.name, vertices, edges), sub


def _vertex_hops(g: Graph, source: str) -> dict[str, int]:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for d in g.darts_at(v):
            u = g.tip(d)
            if u not in dist:
                dist[u] = dist[v] + 1
                queue.append(u)
    return dist


def path_distance(g: Graph, p: GraphPoint, q: GraphPoint) -> Fraction:
    """Geodesic distance in the metric realization (every edge length 1)."""
    for x in (p, q):
        if not g.contains_point(x):
            raise ValueError(f"point {x} not on graph {g.name!r}")

    def ends(x: GraphPoint) -> list[tuple[str, Fraction]]:
        if isinstance(x, VertexPoint):
            return [(x.vertex, Fraction(0))]
        e = g.edge(x.edge)
        return [(e.origin, x.t), (e.terminus, 1 - x.t)]

    best = None
    if (
        isinstance(p, InteriorPoint)
        and isinstance(q, InteriorPoint)
        and p.edge == q.edge
    ):
        best = abs(p.t - q.t)
    for u, du in ends(p):
        hops = _vertex_hops(g, u)
        for v, dv in ends(q):
            if v in hops:
                cand = du + hops[v] + dv
                if best is None or cand < best:
                    best = cand
    if best is None:
        raise ValueError("points lie in different components")
    return best


class ForkRouteError(ValueError):
    """No usable fork is reachable from the requested retreat end."""


@dataclass(frozen=True)
class ForkRoute:
    """Route from a retreat end to a fork vertex with two free side darts.

    start is the dart of the value edge based at the retreat end; path
    leads from that base vertex to fork_vertex (empty when the base is
    itself usable); gamma and lambda_ are the two side darts, in dart
    order, both based at the fork and distinct from the dart along which
    the route arrives (and from its reverse).
    """

    start: Dart
    path: tuple[Dart, ...]
    fork_vertex: str
    gamma: Dart
    lambda_: Dart


def _admissible_side_darts(g: Graph, v: str, excluded: set[Dart]) -> list[Dart]:
    return [d for d in g.darts_at(v) if d not in excluded]


def fork_route(g: Graph, start: Dart) -> ForkRoute:
    """Shortest route from base(start) to a vertex with two free side darts.

    The search never traverses the start dart's edge: the maps that use
    the route are parked on that edge, and a route doubling back through
    it cannot keep the two schedules apart.
    """
    base = g.base(start)
    # Empty path: arriving along the value edge itself, so both of its
    # darts are off limits as side roads.
    here_excluded = {start, start.reversed()}
    sides = _admissible_side_darts(g, base, here_excluded)
    if len(sides) >= 2:
        return ForkRoute(start, (), base, sides[0], sides[1])

    parent: dict[str, Dart] = {}
    depth = {base: 0}
    level = [base]
    while level:
        found = []
        next_level = []
        for v in sorted(level):
            for d in g.darts_at(v):
                if d.edge == start.edge:
                    continue
                u = g.tip(d)
                if u in depth:
                    continue
                depth[u] = depth[v] + 1
                parent[u] = d
                next_level.append(u)
                # A side dart on the value edge could collide with the
                # retreat ray, so both of its darts stay off limits here too.
                sides = _admissible_side_darts(
                    g,
                    u,
                    {d.reversed(), Dart(start.edge, True), Dart(start.edge, False)},
                )
                if len(sides) >= 2:
                    found.append((u, sides))
        if found:
            found.sort(key=lambda pair: pair[0])
            v, sides = found[0]
            path = []
            while v != base:
                d = parent[v]
                path.append(d)
                v = g.base(d)
            path.reverse()
            return ForkRoute(start, tuple(path), found[0][0], sides[0], sides[1])
        level = next_level
    raise ForkRouteError(
        f"no fork with two free side darts reachable from {base!r} "
        f"avoiding edge {start.edge!r} in graph {g.name!r}"
    )


def spanning_tree(g: Graph) -> tuple[frozenset[str], tuple[Dart, ...]]:
    """Breadth-first spanning tree from the smallest vertex.

    Returns (tree edge ids, generator darts): one forward dart per
    non-tree edge, in edge order.  Rank = len(generators) = E - V + 1.
    """
    root = min(g.vertices)
    tree: set[str] = set()
    seen = {root}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for d in g.darts_at(v):
            u = g.tip(d)
            if u not in seen:
                seen.add(u)
                tree.add(d.edge)
                queue.append(u)
    gens = tuple(
        Dart(e.id, True) for e in sorted(g.edges, key=lambda e: e.id) if e.id not in tree
    )
    return frozenset(tree), gens


def tree_path(g: Graph, tree: frozenset[str], u: str, v: str) -> tuple[Dart, ...]:
    """The unique reduced dart path from u to v inside the spanning tree."""
    if u == v:
        return ()
    parent: dict[str, Dart] = {}
    seen = {u}
    queue = deque([u])
    while queue:
        w = queue.popleft()
        if w == v:
            break
        for d in g.darts_at(w):
            if d.edge not in tree:
                continue
            x = g.tip(d)
            if x not in seen:
                seen.add(x)
                parent[x] = d
                queue.append(x)
    if v not in parent:
        raise ValueError(f"no tree path from {u!r} to {v!r}")
    path = []
    w = v
    while w != u:
        d = parent[w]
        path.append(d)
        w = g.base(d)
    path.reverse()
    return tuple(path)
