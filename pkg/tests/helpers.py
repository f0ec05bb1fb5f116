"""Shared builders for the test suite: a small graph catalog, canonical
maps, and a seeded random map generator.

Everything here is deterministic given the caller's Random instance, so
failures reproduce from the seed printed by the test.
"""
from __future__ import annotations

import random
from fractions import Fraction

from coinfree.graphs import Dart, EdgeRec, Graph, spanning_tree, tree_path
from coinfree.plmap import (
    EdgeTrack,
    PLMap,
    TrackSegment,
    constant_segment_at,
    validate_map,
)
from coinfree.points import GraphPoint, InteriorPoint, VertexPoint

ZERO = Fraction(0)
ONE = Fraction(1)


# ---------------------------------------------------------------------------
# Graph catalog


def figure_eight() -> Graph:
    return Graph("eight", ("v",), (EdgeRec("a", "v", "v"), EdgeRec("b", "v", "v")))


def theta() -> Graph:
    return Graph(
        "theta",
        ("n", "s"),
        (EdgeRec("p", "n", "s"), EdgeRec("q", "n", "s"), EdgeRec("r", "n", "s")),
    )


def lollipop() -> Graph:
    # cycle (the loop) with a tail; the junction has degree 3
    return Graph(
        "lollipop",
        ("hub", "tip"),
        (EdgeRec("loop", "hub", "hub"), EdgeRec("stem", "hub", "tip")),
    )


def k4() -> Graph:
    vs = ("w1", "w2", "w3", "w4")
    es = []
    n = 0
    for i in range(4):
        for j in range(i + 1, 4):
            n += 1
            es.append(EdgeRec(f"e{n}", vs[i], vs[j]))
    return Graph("k4", vs, tuple(es))


def path3() -> Graph:
    return Graph(
        "path3",
        ("p0", "p1", "p2", "p3"),
        (EdgeRec("s1", "p0", "p1"), EdgeRec("s2", "p1", "p2"), EdgeRec("s3", "p2", "p3")),
    )


def single_edge() -> Graph:
    return Graph("seg", ("x0", "x1"), (EdgeRec("s", "x0", "x1"),))


def triangle() -> Graph:
    return Graph(
        "triangle",
        ("t1", "t2", "t3"),
        (EdgeRec("c1", "t1", "t2"), EdgeRec("c2", "t2", "t3"), EdgeRec("c3", "t3", "t1")),
    )


def ring() -> Graph:
    """One vertex, one loop: the smallest circle."""
    return Graph("ring", ("z",), (EdgeRec("c", "z", "z"),))


def cycle(n: int, name: str | None = None) -> Graph:
    vs = tuple(f"y{i}" for i in range(n))
    es = tuple(EdgeRec(f"d{i}", vs[i], vs[(i + 1) % n]) for i in range(n))
    return Graph(name or f"cycle{n}", vs, es)


def balloon() -> Graph:
    """Loop on a degree-3 vertex whose only other edge is a dangling stem.

    The one Branched shape where no fork route exists for the loop itself.
    """
    return Graph(
        "balloon", ("kn", "tail"), (EdgeRec("bag", "kn", "kn"), EdgeRec("string", "kn", "tail"))
    )


BRANCHED_CATALOG = (figure_eight, theta, lollipop, k4)
DOMAIN_CATALOG = (figure_eight, theta, lollipop, k4, path3)


# ---------------------------------------------------------------------------
# Canonical maps


def build_map(name: str, dom: Graph, cod: Graph, vertex_images, tracks) -> PLMap:
    m = PLMap.build(name, dom, cod, vertex_images, tracks)
    problems = validate_map(m)
    assert not problems, problems
    return m


def identity_map(g: Graph, name: str = "id") -> PLMap:
    vi = {v: VertexPoint(v) for v in g.vertices}
    tracks = {
        e.id: EdgeTrack((TrackSegment(ZERO, ONE, e.id, ZERO, ONE),)) for e in g.edges
    }
    return build_map(name, g, g, vi, tracks)


def constant_map(dom: Graph, cod: Graph, p: GraphPoint, name: str = "const") -> PLMap:
    vi = {v: p for v in dom.vertices}
    tracks = {
        e.id: EdgeTrack((constant_segment_at(cod, ZERO, ONE, p),)) for e in dom.edges
    }
    return build_map(name, dom, cod, vi, tracks)


def loop_power_map(dom: Graph, cod: Graph, degree: int, name: str | None = None) -> PLMap:
    """Degree-d self-map pattern for one-vertex, one-loop graphs."""
    (dv,) = dom.vertices
    (de,) = [e.id for e in dom.edges]
    (cv,) = cod.vertices
    (ce,) = [e.id for e in cod.edges]
    if degree == 0:
        return constant_map(dom, cod, VertexPoint(cv), name or "deg0")
    k = abs(degree)
    a0, a1 = (ZERO, ONE) if degree > 0 else (ONE, ZERO)
    segs = tuple(
        TrackSegment(Fraction(i, k), Fraction(i + 1, k), ce, a0, a1) for i in range(k)
    )
    return build_map(
        name or f"deg{degree}", dom, cod, {dv: VertexPoint(cv)}, {de: EdgeTrack(segs)}
    )


# ---------------------------------------------------------------------------
# Random generation


def random_point(rng: random.Random, g: Graph, vertex_bias: float = 0.4) -> GraphPoint:
    if rng.random() < vertex_bias:
        return VertexPoint(rng.choice(g.vertices))
    e = rng.choice(g.edges)
    return InteriorPoint(e.id, Fraction(rng.randint(1, 7), 8))


def _walk(rng: random.Random, g: Graph, u: str, w: str, budget: int) -> list[Dart]:
    """Dart path u -> w, padded with a detour when the budget allows."""
    tree, _ = spanning_tree(g)
    darts = list(tree_path(g, tree, u, w))
    slack = budget - len(darts)
    want_detour = (u == w and not darts) or rng.random() < 0.5
    if slack >= 1 and want_detour:
        at = rng.randint(0, len(darts))
        base = u if at == 0 else g.tip(darts[at - 1])
        d = rng.choice(g.darts_at(base))
        if g.tip(d) == base:
            darts.insert(at, d)
        elif slack >= 2:
            darts[at:at] = [d, d.reversed()]
    return darts


def random_track(
    rng: random.Random, cod: Graph, p0: GraphPoint, p1: GraphPoint, max_segments: int = 6
) -> EdgeTrack:
    """Track from p0 to p1 with at most max_segments affine sweeps."""
    head: list[tuple[str, Fraction, Fraction]] = []
    tail: list[tuple[str, Fraction, Fraction]] = []
    if isinstance(p0, InteriorPoint):
        e = cod.edge(p0.edge)
        if rng.random() < 0.5:
            head.append((p0.edge, p0.t, ZERO))
            u = e.origin
        else:
            head.append((p0.edge, p0.t, ONE))
            u = e.terminus
    else:
        u = p0.vertex
    if isinstance(p1, InteriorPoint):
        e = cod.edge(p1.edge)
        if rng.random() < 0.5:
            tail.append((p1.edge, ZERO, p1.t))
            w = e.origin
        else:
            tail.append((p1.edge, ONE, p1.t))
            w = e.terminus
    else:
        w = p1.vertex
    budget = max_segments - len(head) - len(tail)
    sweeps = head
    for d in _walk(rng, cod, u, w, budget):
        sweeps.append((d.edge, ZERO, ONE) if d.forward else (d.edge, ONE, ZERO))
    sweeps.extend(tail)
    if not sweeps:
        return EdgeTrack((constant_segment_at(cod, ZERO, ONE, p0),))
    cuts = sorted(
        Fraction(k, 16) for k in rng.sample(range(1, 16), len(sweeps) - 1)
    )
    times = [ZERO, *cuts, ONE]
    segs = tuple(
        TrackSegment(times[i], times[i + 1], e, a0, a1)
        for i, (e, a0, a1) in enumerate(sweeps)
    )
    return EdgeTrack(segs)


def random_pl_map(rng: random.Random, name: str, dom: Graph, cod: Graph) -> PLMap:
    vi = {v: random_point(rng, cod) for v in dom.vertices}
    tracks = {
        e.id: random_track(rng, cod, vi[e.origin], vi[e.terminus]) for e in dom.edges
    }
    return build_map(name, dom, cod, vi, tracks)


def random_branched_pair(rng: random.Random, index: int = 0) -> tuple[PLMap, PLMap]:
    """A random pair as the property suite draws them: any catalog domain,
    Branched codomain, tracks of at most 6 segments."""
    dom = rng.choice(DOMAIN_CATALOG)()
    cod = rng.choice(BRANCHED_CATALOG)()
    f = random_pl_map(rng, "f", dom, cod)
    g = random_pl_map(rng, "g", dom, cod)
    return f, g


def random_graph(rng: random.Random, max_edges: int = 6) -> Graph:
    """Small connected graph with 1..max_edges edges; loops allowed."""
    n_edges = rng.randint(1, max_edges)
    n_vertices = rng.randint(1, n_edges + 1)
    vs = tuple(f"u{i}" for i in range(n_vertices))
    es: list[EdgeRec] = []
    reached = ["u0"]
    for i in range(n_edges):
        # first edges sweep in the unreached vertices so the result is connected
        unreached = [v for v in vs if v not in reached]
        if unreached:
            a = rng.choice(reached)
            b = unreached[0]
            reached.append(b)
        else:
            a = rng.choice(vs)
            b = rng.choice(vs)
        es.append(EdgeRec(f"m{i}", a, b))
    return Graph(f"rand{n_edges}{n_vertices}", vs, tuple(es))
