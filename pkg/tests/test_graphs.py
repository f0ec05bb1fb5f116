"""Graph layer: validation, classification, subdivision, metric, forks."""
from __future__ import annotations

import random
from collections import deque
from fractions import Fraction

import pytest

from coinfree.graphs import (
    Dart,
    EdgeRec,
    ForkRouteError,
    Graph,
    GraphClass,
    classify,
    dart_key,
    fork_route,
    path_distance,
    spanning_tree,
    subdivide,
    tree_path,
    validate,
)
from coinfree.points import InteriorPoint, VertexPoint
from helpers import (
    balloon,
    cycle,
    figure_eight,
    lollipop,
    path3,
    random_graph,
    ring,
    single_edge,
    theta,
    triangle,
)


class TestValidate:
    def test_figure_eight_ok(self):
        assert validate(figure_eight()) == []

    def test_single_edge_ok(self):
        assert validate(single_edge()) == []

    def test_disconnected_reported(self):
        g = Graph(
            "twoseg",
            ("a1", "a2", "b1", "b2"),
            (EdgeRec("e1", "a1", "a2"), EdgeRec("e2", "b1", "b2")),
        )
        problems = validate(g)
        assert any("not connected" in p for p in problems)

    def test_edge_with_unknown_endpoint(self):
        g = Graph("bad", ("u",), (EdgeRec("e", "u", "ghost"),))
        assert any("ghost" in p for p in validate(g))

    def test_no_edges_rejected(self):
        g = Graph("bare", ("u",), ())
        assert validate(g) != []


class TestClassify:
    def test_triangle_is_circle(self):
        assert classify(triangle()) is GraphClass.CIRCLE

    def test_single_edge_is_interval(self):
        assert classify(single_edge()) is GraphClass.INTERVAL

    def test_figure_eight_is_branched(self):
        assert classify(figure_eight()) is GraphClass.BRANCHED

    def test_path3_is_interval(self):
        assert classify(path3()) is GraphClass.INTERVAL

    def test_ring_is_circle(self):
        assert classify(ring()) is GraphClass.CIRCLE

    def test_exactly_one_class_on_random_catalog(self, rng):
        # every connected graph lands in exactly one class
        for _ in range(200):
            g = random_graph(rng)
            assert validate(g) == []
            degrees = [g.degree(v) for v in g.vertices]
            is_interval = max(degrees) <= 2 and len(g.edges) == len(g.vertices) - 1
            is_circle = all(d == 2 for d in degrees)
            is_branched = max(degrees) >= 3
            assert [is_interval, is_circle, is_branched].count(True) == 1
            expected = (
                GraphClass.INTERVAL
                if is_interval
                else GraphClass.CIRCLE if is_circle else GraphClass.BRANCHED
            )
            assert classify(g) is expected


class TestSubdivide:
    def test_loop_becomes_two_edges(self):
        g = Graph("loopy", ("v",), (EdgeRec("a", "v", "v"),))
        g2, sub = subdivide(g, "a", Fraction(1, 2))
        assert len(g2.vertices) == 2
        assert len(g2.edges) == 2
        assert sub.to_new(InteriorPoint("a", Fraction(1, 4))) == InteriorPoint(
            sub.first, Fraction(1, 2)
        )

    def test_cut_point_becomes_vertex(self):
        g = single_edge()
        g2, sub = subdivide(g, "s", Fraction(1, 3))
        assert sub.to_new(InteriorPoint("s", Fraction(1, 3))) == VertexPoint(sub.new_vertex)

    def test_affine_relabeling_after_cut(self):
        g = single_edge()
        g2, sub = subdivide(g, "s", Fraction(1, 3))
        assert sub.to_new(InteriorPoint("s", Fraction(2, 3))) == InteriorPoint(
            sub.second, Fraction(1, 2)
        )
        # oracle: both parameterizations must put every sample at the same
        # arclength position; first covers [0,cut], second [cut,1]
        for k in range(1, 24):
            t = Fraction(k, 24)
            p = sub.to_new(InteriorPoint("s", t))
            if isinstance(p, VertexPoint):
                assert t == sub.cut
                continue
            if p.edge == sub.first:
                assert p.t * sub.cut == t
            else:
                assert sub.cut + p.t * (1 - sub.cut) == t

    def test_relabel_round_trips(self, rng):
        for _ in range(50):
            g = random_graph(rng)
            e = rng.choice(g.edges)
            cut = Fraction(rng.randint(1, 15), 16)
            g2, sub = subdivide(g, e.id, cut)
            assert validate(g2) == []
            for k in range(1, 16):
                p = InteriorPoint(e.id, Fraction(k, 16))
                assert sub.to_old(sub.to_new(p)) == p

    def test_classification_preserved(self, rng):
        for _ in range(80):
            g = random_graph(rng)
            e = rng.choice(g.edges)
            g2, _ = subdivide(g, e.id, Fraction(1, 2))
            assert classify(g2) is classify(g)

    def test_out_of_range_cut_rejected(self):
        with pytest.raises(ValueError):
            subdivide(single_edge(), "s", Fraction(0))
        with pytest.raises(ValueError):
            subdivide(single_edge(), "s", Fraction(3, 2))


class TestForkRoute:
    def test_figure_eight_empty_path(self):
        g = figure_eight()
        r = fork_route(g, Dart("a", True))
        assert r.path == ()
        assert r.fork_vertex == "v"
        # oracle: enumerate all darts at v, drop the value edge's, keep
        # the two smallest
        admissible = [d for d in g.darts_at("v") if d.edge != "a"]
        assert (r.gamma, r.lambda_) == (admissible[0], admissible[1])
        assert r.gamma == Dart("b", True)
        assert r.lambda_ == Dart("b", False)

    def test_theta_sides_are_other_edges(self):
        g = theta()
        r = fork_route(g, Dart("p", True))
        assert r.path == ()
        assert r.fork_vertex == "n"
        assert {r.gamma.edge, r.lambda_.edge} == {"q", "r"}

    def test_tailed_lollipop_retreat_path(self):
        # cycle with a two-edge tail; route from the outer tail vertex
        # must walk one dart inward to reach the junction
        g = Graph(
            "tadpole",
            ("c", "x1", "x2"),
            (EdgeRec("loop", "c", "c"), EdgeRec("t1", "c", "x1"), EdgeRec("t2", "x1", "x2")),
        )
        r = fork_route(g, Dart("t2", True))
        assert len(r.path) == 1
        assert r.fork_vertex == "c"
        assert g.degree("c") == 3
        assert r.path == (Dart("t1", False),)

    def test_balloon_has_no_route(self):
        g = balloon()
        with pytest.raises(ForkRouteError):
            fork_route(g, Dart("bag", True))
        with pytest.raises(ForkRouteError):
            fork_route(g, Dart("bag", False))

    def test_route_invariants_on_random_branched_graphs(self, rng):
        checked = 0
        for _ in range(300):
            g = random_graph(rng)
            if classify(g) is not GraphClass.BRANCHED:
                continue
            for start in g.darts():
                try:
                    r = fork_route(g, start)
                except ForkRouteError:
                    assert not _reachable_forks(g, start)
                    continue
                checked += 1
                assert g.degree(r.fork_vertex) >= 3
                assert r.gamma != r.lambda_
                assert g.base(r.gamma) == r.fork_vertex
                assert g.base(r.lambda_) == r.fork_vertex
                assert r.gamma.edge != start.edge
                assert r.lambda_.edge != start.edge
                here = g.base(start)
                for d in r.path:
                    assert g.base(d) == here
                    assert d.edge != start.edge
                    here = g.tip(d)
                assert here == r.fork_vertex
                if r.path:
                    arrival = r.path[-1]
                    assert r.gamma != arrival.reversed()
                    assert r.lambda_ != arrival.reversed()
        assert checked > 100


def _reachable_forks(g: Graph, start: Dart) -> list[str]:
    """Independent check: vertices reachable from base(start) without the
    value edge that offer two admissible side darts."""
    base = g.base(start)
    seen = {base}
    queue = deque([base])
    arrival: dict[str, Dart] = {}
    hits = []
    banned = {Dart(start.edge, True), Dart(start.edge, False)}
    while queue:
        v = queue.popleft()
        excluded = set(banned)
        if v in arrival:
            excluded.add(arrival[v].reversed())
        if len([d for d in g.darts_at(v) if d not in excluded]) >= 2:
            hits.append(v)
        for d in g.darts_at(v):
            if d.edge == start.edge:
                continue
            u = g.tip(d)
            if u not in seen:
                seen.add(u)
                arrival[u] = d
                queue.append(u)
    return hits


class TestPathDistance:
    def test_same_point(self):
        g = figure_eight()
        p = InteriorPoint("a", Fraction(1, 4))
        assert path_distance(g, p, p) == 0

    def test_same_edge(self):
        g = single_edge()
        assert path_distance(
            g, InteriorPoint("s", Fraction(1, 4)), InteriorPoint("s", Fraction(3, 4))
        ) == Fraction(1, 2)

    def test_figure_eight_between_loops(self):
        g = figure_eight()
        p = InteriorPoint("a", Fraction(1, 4))
        q = InteriorPoint("b", Fraction(1, 4))
        # oracle: enumerate the four ways around through the wedge vertex
        routes = [
            pa + qb
            for pa in (Fraction(1, 4), Fraction(3, 4))
            for qb in (Fraction(1, 4), Fraction(3, 4))
        ]
        assert path_distance(g, p, q) == min(routes) == Fraction(1, 2)

    def test_metric_axioms_on_samples(self, rng):
        for _ in range(40):
            g = random_graph(rng)
            pts = []
            for _ in range(3):
                e = rng.choice(g.edges)
                pts.append(InteriorPoint(e.id, Fraction(rng.randint(1, 7), 8)))
            p, q, r = pts
            assert path_distance(g, p, p) == 0
            assert path_distance(g, p, q) == path_distance(g, q, p)
            assert path_distance(g, p, r) <= path_distance(g, p, q) + path_distance(g, q, r)
            if p != q:
                assert path_distance(g, p, q) > 0


class TestSpanningTree:
    def test_figure_eight(self):
        tree, gens = spanning_tree(figure_eight())
        assert tree == frozenset()
        assert gens == (Dart("a", True), Dart("b", True))

    def test_triangle(self):
        tree, gens = spanning_tree(triangle())
        assert len(tree) == 2
        assert len(gens) == 1

    def test_theta_rank_two(self):
        tree, gens = spanning_tree(theta())
        # rank = E - V + 1 = 3 - 2 + 1
        assert len(tree) == 1
        assert len(gens) == 2

    def test_rank_formula_on_random_graphs(self, rng):
        for _ in range(100):
            g = random_graph(rng)
            tree, gens = spanning_tree(g)
            assert len(gens) == len(g.edges) - len(g.vertices) + 1
            assert len(tree) == len(g.vertices) - 1

    def test_tree_path_connects(self, rng):
        for _ in range(40):
            g = random_graph(rng)
            tree, _ = spanning_tree(g)
            u = rng.choice(g.vertices)
            v = rng.choice(g.vertices)
            here = u
            for d in tree_path(g, tree, u, v):
                assert d.edge in tree
                assert g.base(d) == here
                here = g.tip(d)
            assert here == v


class TestDartOrder:
    def test_dart_order_forward_first(self):
        assert dart_key(Dart("a", True)) < dart_key(Dart("a", False))
        assert dart_key(Dart("a", False)) < dart_key(Dart("b", True))

    def test_darts_at_counts_loop_twice(self):
        g = lollipop()
        assert g.degree("hub") == 3
        assert g.degree("tip") == 1
        assert len(g.darts_at("hub")) == 3

    def test_cycle_degrees(self):
        g = cycle(5)
        assert all(g.degree(v) == 2 for v in g.vertices)
        assert classify(g) is GraphClass.CIRCLE
