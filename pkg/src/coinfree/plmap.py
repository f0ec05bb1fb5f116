"""Piecewise-linear maps between graphs, with exact rational tracks.

A map carries, per domain edge, a track: consecutive parameter
subintervals of [0, 1], each swept affinely inside one codomain edge.
Coordinates are stored in the carrier edge's forward frame (origin at 0)
and may sweep in either direction; a constant segment parks the map at
one point.  All arithmetic is fractions.Fraction, so coincidence
detection is exact, not approximate.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .graphs import Dart, Graph, SubdivisionMap, dart_key
from .homotopy import HomotopyStep, StepKind, TrackFragment
from .points import GraphPoint, InteriorPoint, VertexPoint, point_sort_key

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class TrackSegment:
    """Affine sweep from a0 to a1 inside one codomain edge over [t0, t1]."""

    t0: Fraction
    t1: Fraction
    edge: str
    a0: Fraction
    a1: Fraction

    @property
    def carrier(self) -> Dart:
        return Dart(self.edge, True)

    @property
    def constant(self) -> bool:
        return self.a0 == self.a1

    def coord_at(self, t: Fraction) -> Fraction:
        if self.t1 == self.t0:
            return self.a0
        return self.a0 + (t - self.t0) * (self.a1 - self.a0) / (self.t1 - self.t0)


def segment(t0, t1, edge, a0, a1) -> TrackSegment:
    return TrackSegment(Fraction(t0), Fraction(t1), edge, Fraction(a0), Fraction(a1))


@dataclass(frozen=True)
class EdgeTrack:
    segments: tuple[TrackSegment, ...]

    def breakpoints(self) -> list[Fraction]:
        out = [self.segments[0].t0]
        for s in self.segments:
            out.append(s.t1)
        return out

    def segment_at(self, t: Fraction) -> TrackSegment:
        for s in self.segments:
            if s.t0 <= t <= s.t1:
                return s
        raise ValueError(f"parameter {t} outside [0, 1]")

    def coord_at(self, t: Fraction) -> tuple[str, Fraction]:
        s = self.segment_at(t)
        return s.edge, s.coord_at(t)

    def value_at(self, t: Fraction, codomain: Graph) -> GraphPoint:
        e, c = self.coord_at(t)
        return codomain.point(e, c)

    def start(self, codomain: Graph) -> GraphPoint:
        s = self.segments[0]
        return codomain.point(s.edge, s.a0)

    def end(self, codomain: Graph) -> GraphPoint:
        s = self.segments[-1]
        return codomain.point(s.edge, s.a1)


def track_of(*segs: TrackSegment) -> EdgeTrack:
    return EdgeTrack(tuple(segs))


def constant_segment_at(g: Graph, t0: Fraction, t1: Fraction, p: GraphPoint) -> TrackSegment:
    """Constant segment parked at p; a vertex parks on its smallest dart."""
    if isinstance(p, InteriorPoint):
        return TrackSegment(t0, t1, p.edge, p.t, p.t)
    darts = g.darts_at(p.vertex)
    if not darts:
        raise ValueError(f"vertex {p.vertex!r} has no incident edge")
    d = darts[0]
    coord = ZERO if d.forward else ONE
    return TrackSegment(t0, t1, d.edge, coord, coord)


def refine_track(track: EdgeTrack, params) -> EdgeTrack:
    """Insert breakpoints at the given parameters (no-op where present)."""
    cuts = sorted({Fraction(p) for p in params})
    segs: list[TrackSegment] = []
    for s in track.segments:
        inner = [p for p in cuts if s.t0 < p < s.t1]
        lo, c_lo = s.t0, s.a0
        for p in inner:
            c = s.coord_at(p)
            segs.append(TrackSegment(lo, p, s.edge, c_lo, c))
            lo, c_lo = p, c
        segs.append(TrackSegment(lo, s.t1, s.edge, c_lo, s.a1))
    return EdgeTrack(tuple(segs))


def common_refinement(a: EdgeTrack, b: EdgeTrack) -> tuple[EdgeTrack, EdgeTrack]:
    """Rewrite both tracks over the union of their breakpoints."""
    cuts = set(a.breakpoints()) | set(b.breakpoints())
    return refine_track(a, cuts), refine_track(b, cuts)


def fragment_of(track: EdgeTrack, lo: Fraction, hi: Fraction) -> tuple[TrackSegment, ...]:
    refined = refine_track(track, [lo, hi])
    return tuple(s for s in refined.segments if lo <= s.t0 and s.t1 <= hi)


def splice(track: EdgeTrack, lo: Fraction, hi: Fraction, replacement) -> EdgeTrack:
    """Replace the [lo, hi] portion of a track with the given segments."""
    refined = refine_track(track, [lo, hi])
    before = [s for s in refined.segments if s.t1 <= lo]
    after = [s for s in refined.segments if s.t0 >= hi]
    repl = list(replacement)
    if not repl or repl[0].t0 != lo or repl[-1].t1 != hi:
        raise ValueError("replacement does not cover the window")
    return EdgeTrack(tuple(before + repl + after))


def squeeze(segments, new_lo: Fraction, new_hi: Fraction) -> tuple[TrackSegment, ...]:
    """Affinely reparameterize a fragment onto [new_lo, new_hi]."""
    old_lo = segments[0].t0
    old_hi = segments[-1].t1
    span_old = old_hi - old_lo
    span_new = new_hi - new_lo
    if span_old == 0:
        raise ValueError("cannot squeeze a zero-length fragment")

    def remap(t):
        return new_lo + (t - old_lo) * span_new / span_old

    return tuple(
        TrackSegment(remap(s.t0), remap(s.t1), s.edge, s.a0, s.a1) for s in segments
    )


@dataclass(frozen=True)
class PLMap:
    name: str
    domain: Graph
    codomain: Graph
    vertex_images: tuple[tuple[str, GraphPoint], ...]
    tracks: tuple[tuple[str, EdgeTrack], ...]
    _vmap: dict = field(default=None, compare=False, repr=False)
    _tmap: dict = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_vmap", dict(self.vertex_images))
        object.__setattr__(self, "_tmap", dict(self.tracks))

    @staticmethod
    def build(name: str, domain: Graph, codomain: Graph, vertex_images, tracks) -> PLMap:
        vi = tuple(sorted(vertex_images.items()))
        tr = tuple(sorted(tracks.items()))
        return PLMap(name, domain, codomain, vi, tr)

    def vertex_image(self, v: str) -> GraphPoint:
        return self._vmap[v]

    def track(self, e: str) -> EdgeTrack:
        return self._tmap[e]

    def with_track(self, e: str, t: EdgeTrack) -> PLMap:
        tracks = dict(self._tmap)
        tracks[e] = t
        return PLMap.build(self.name, self.domain, self.codomain, dict(self._vmap), tracks)

    def with_changes(self, vertex_images=None, tracks=None) -> PLMap:
        vi = dict(self._vmap)
        if vertex_images:
            vi.update(vertex_images)
        tr = dict(self._tmap)
        if tracks:
            tr.update(tracks)
        return PLMap.build(self.name, self.domain, self.codomain, vi, tr)


def validate_map(m: PLMap) -> list[str]:
    """Structural invariants; empty list means the map is well formed."""
    problems: list[str] = []
    for v in m.domain.vertices:
        if v not in m._vmap:
            problems.append(f"missing image for vertex {v!r}")
        elif not m.codomain.contains_point(m._vmap[v]):
            problems.append(f"image of vertex {v!r} not on codomain")
    for e in m.domain.edges:
        if e.id not in m._tmap:
            problems.append(f"missing track for edge {e.id!r}")
    for eid, track in m.tracks:
        if not m.domain.has_edge(eid):
            problems.append(f"track for unknown edge {eid!r}")
            continue
        segs = track.segments
        if not segs:
            problems.append(f"track {eid!r} has no segments")
            continue
        if segs[0].t0 != 0 or segs[-1].t1 != 1:
            problems.append(f"track {eid!r} does not cover [0, 1]")
        for s in segs:
            if not s.t0 < s.t1:
                problems.append(f"track {eid!r}: empty segment at {s.t0}")
            if not m.codomain.has_edge(s.edge):
                problems.append(f"track {eid!r}: unknown carrier {s.edge!r}")
                continue
            for a in (s.a0, s.a1):
                if not 0 <= a <= 1:
                    problems.append(f"track {eid!r}: coordinate {a} outside [0, 1]")
        for prev, nxt in zip(segs, segs[1:]):
            if prev.t1 != nxt.t0:
                problems.append(f"track {eid!r}: parameter gap at {prev.t1}")
            elif m.codomain.has_edge(prev.edge) and m.codomain.has_edge(nxt.edge):
                if m.codomain.point(prev.edge, prev.a1) != m.codomain.point(nxt.edge, nxt.a0):
                    problems.append(f"track {eid!r}: discontinuity at {prev.t1}")
        if problems:
            continue
        rec = m.domain.edge(eid)
        if rec.origin in m._vmap and track.start(m.codomain) != m._vmap[rec.origin]:
            problems.append(f"track {eid!r} start disagrees with image of {rec.origin!r}")
        if rec.terminus in m._vmap and track.end(m.codomain) != m._vmap[rec.terminus]:
            problems.append(f"track {eid!r} end disagrees with image of {rec.terminus!r}")
    return problems


def evaluate(m: PLMap, p: GraphPoint) -> GraphPoint:
    """Image of a domain point, in canonical form."""
    if isinstance(p, VertexPoint):
        if p.vertex not in m._vmap:
            raise ValueError(f"point {p} not on domain of {m.name!r}")
        return m._vmap[p.vertex]
    if not m.domain.has_edge(p.edge) or not 0 < p.t < 1:
        raise ValueError(f"point {p} not on domain of {m.name!r}")
    return m.track(p.edge).value_at(p.t, m.codomain)


class Transversality(Enum):
    CROSSING = "Crossing"
    TANGENTIAL = "Tangential"
    AT_VERTEX_LOCATION = "AtVertexLocation"
    AT_VERTEX_VALUE = "AtVertexValue"


@dataclass(frozen=True)
class CoincidencePoint:
    location: GraphPoint
    value: GraphPoint
    transversality: Transversality


class DegenerateOverlapError(ValueError):
    """The maps agree on a whole subinterval; isolated analysis impossible."""

    def __init__(self, overlaps):
        self.overlaps = tuple(overlaps)  # (edge, lo, hi) triples
        spans = ", ".join(f"{e}[{lo},{hi}]" for e, lo, hi in self.overlaps)
        super().__init__(
            f"maps agree on a positive-length set ({spans}); "
            "apply general_position first"
        )


def _check_pair(f: PLMap, g: PLMap) -> None:
    if f.domain != g.domain or f.codomain != g.codomain:
        raise ValueError("maps must share domain and codomain")


def _scan_edge(f: PLMap, g: PLMap, eid: str):
    """Exact coincidence parameters and overlap intervals on one edge."""
    cod = f.codomain
    tf, tg = common_refinement(f.track(eid), g.track(eid))
    roots: set[Fraction] = set()
    overlaps: list[tuple[Fraction, Fraction]] = []
    for sf, sg in zip(tf.segments, tg.segments):
        for t, cf, cg in ((sf.t0, sf.a0, sg.a0), (sf.t1, sf.a1, sg.a1)):
            if cod.point(sf.edge, cf) == cod.point(sg.edge, cg):
                roots.add(t)
        if sf.constant and sg.constant:
            if cod.point(sf.edge, sf.a0) == cod.point(sg.edge, sg.a0):
                overlaps.append((sf.t0, sf.t1))
            continue
        if sf.edge == sg.edge:
            d0 = sf.a0 - sg.a0
            d1 = sf.a1 - sg.a1
            if d0 == 0 and d1 == 0:
                overlaps.append((sf.t0, sf.t1))
            elif d0 != d1:
                t = sf.t0 + (sf.t1 - sf.t0) * d0 / (d0 - d1)
                if sf.t0 <= t <= sf.t1:
                    roots.add(t)
        # Different carriers meet only at shared vertices, which appear at
        # segment endpoints; those are covered by the endpoint checks.
    merged: list[tuple[Fraction, Fraction]] = []
    for lo, hi in sorted(overlaps):
        if merged and merged[-1][1] >= lo:
            merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
        else:
            merged.append((lo, hi))
    return sorted(t for t in roots if 0 < t < 1), merged, (tf, tg)


def _sign_of_difference(tf: EdgeTrack, tg: EdgeTrack, t: Fraction) -> int:
    ef, cf = tf.coord_at(t)
    eg, cg = tg.coord_at(t)
    if ef != eg:
        raise AssertionError("sign probe off the shared carrier")
    d = cf - cg
    return (d > 0) - (d < 0)


def _transversality_at(
    tf: EdgeTrack, tg: EdgeTrack, t: Fraction
) -> Transversality:
    cuts = sorted(set(tf.breakpoints()) | {t})
    i = cuts.index(t)
    left_probe = (cuts[i - 1] + t) / 2
    right_probe = (t + cuts[i + 1]) / 2
    s_left = _sign_of_difference(tf, tg, left_probe)
    s_right = _sign_of_difference(tf, tg, right_probe)
    if s_left == 0 or s_right == 0:
        raise AssertionError("probe landed on a coincidence")
    return Transversality.CROSSING if s_left * s_right < 0 else Transversality.TANGENTIAL


def collect_overlaps(f: PLMap, g: PLMap) -> list[tuple[str, Fraction, Fraction]]:
    _check_pair(f, g)
    out = []
    for e in sorted(f.domain.edges, key=lambda e: e.id):
        _, merged, _ = _scan_edge(f, g, e.id)
        out.extend((e.id, lo, hi) for lo, hi in merged)
    return out


def coincidences(f: PLMap, g: PLMap) -> list[CoincidencePoint]:
    """All points where f and g agree, exactly, with transversality tags.

    Raises DegenerateOverlapError when the agreement set has positive
    length somewhere; run general_position first in that case.
    """
    _check_pair(f, g)
    found: list[CoincidencePoint] = []
    all_overlaps: list[tuple[str, Fraction, Fraction]] = []
    for v in sorted(f.domain.vertices):
        pf = evaluate(f, VertexPoint(v))
        pg = evaluate(g, VertexPoint(v))
        if pf == pg:
            found.append(
                CoincidencePoint(VertexPoint(v), pf, Transversality.AT_VERTEX_LOCATION)
            )
    for e in sorted(f.domain.edges, key=lambda e: e.id):
        roots, merged, (tf, tg) = _scan_edge(f, g, e.id)
        all_overlaps.extend((e.id, lo, hi) for lo, hi in merged)
        if merged:
            continue
        for t in roots:
            value = tf.value_at(t, f.codomain)
            if isinstance(value, VertexPoint):
                tag = Transversality.AT_VERTEX_VALUE
            else:
                tag = _transversality_at(tf, tg, t)
            found.append(CoincidencePoint(InteriorPoint(e.id, t), value, tag))
    if all_overlaps:
        raise DegenerateOverlapError(all_overlaps)
    return found


def is_coincidence_free(f: PLMap, g: PLMap) -> bool:
    return not coincidences(f, g)


# ---------------------------------------------------------------------------
# General position: remove positive-length agreement.


def _coords_on_carrier(m: PLMap, eid: str, carrier: str) -> list[Fraction]:
    out = []
    for s in m.track(eid).segments:
        if s.edge == carrier:
            out.extend((s.a0, s.a1))
    return out


def _fix_piece(
    f: PLMap, g: PLMap, eid: str, s: TrackSegment
) -> tuple[TrackSegment, ...]:
    """Replacement for g on one affine piece where f and g agree.

    Strictly monotone piece: delay g (quarter-point value at the
    midpoint), so the maps agree only at the piece ends.  Constant piece:
    tent away from f, retreating toward the carrier's lower end, with
    depth half the gap to the nearest other coordinate in play; from a
    vertex, the tent dips into the carrier instead.
    """
    p, q = s.t0, s.t1
    mid = (p + q) / 2
    if not s.constant:
        quarter = s.a0 + (s.a1 - s.a0) / 4
        return (
            TrackSegment(p, mid, s.edge, s.a0, quarter),
            TrackSegment(mid, q, s.edge, quarter, s.a1),
        )
    v = s.a0
    coords = set(_coords_on_carrier(f, eid, s.edge)) | set(
        _coords_on_carrier(g, eid, s.edge)
    )
    if v == 0:
        above = [c for c in coords if c > 0] or [ONE]
        peak = min(above) / 2
    elif v == 1:
        below = [c for c in coords if c < 1] or [ZERO]
        peak = 1 - (1 - max(below)) / 2
    else:
        floor = max([c for c in coords if c < v] or [ZERO])
        peak = v - (v - floor) / 2
    return (
        TrackSegment(p, mid, s.edge, v, peak),
        TrackSegment(mid, q, s.edge, peak, v),
    )


def general_position(
    f: PLMap, g: PLMap
) -> tuple[PLMap, PLMap, list[HomotopyStep]]:
    """Deform g until the agreement set of (f, g) is finite.

    Each positive-length overlap is split into the affine pieces of the
    common path and every piece is replaced rel endpoints.  f is never
    modified.
    """
    _check_pair(f, g)
    steps: list[HomotopyStep] = []
    for _ in range(64):
        overlaps = collect_overlaps(f, g)
        if not overlaps:
            return f, g, steps
        for eid, lo, hi in overlaps:
            track = g.track(eid)
            pieces = [s for s in refine_track(track, [lo, hi]).segments if lo <= s.t0 and s.t1 <= hi]
            replacement: list[TrackSegment] = []
            for s in pieces:
                replacement.extend(_fix_piece(f, g, eid, s))
            old_fragment = fragment_of(track, lo, hi)
            g = g.with_track(eid, splice(track, lo, hi, replacement))
            steps.append(
                HomotopyStep(
                    kind=StepKind.GENERAL_POSITION,
                    maps_changed="g",
                    windows=((eid, lo, hi),),
                    replaced=(TrackFragment("g", eid, lo, hi, old_fragment),),
                    replacement=(TrackFragment("g", eid, lo, hi, tuple(replacement)),),
                    note="overlap removed",
                )
            )
    raise AssertionError("general position did not stabilize")


# ---------------------------------------------------------------------------
# Track construction from breakpoint schedules, and map composition.


def _resolve_carrier(
    g: Graph, a: GraphPoint, b: GraphPoint
) -> tuple[str, Fraction, Fraction]:
    """Carrier edge and forward-frame coordinates for one schedule step."""
    if isinstance(a, InteriorPoint) and isinstance(b, InteriorPoint):
        if a.edge != b.edge:
            raise ValueError(f"{a} and {b} do not share a closed edge")
        return a.edge, a.t, b.t
    if isinstance(a, InteriorPoint):
        e = g.edge(a.edge)
        assert isinstance(b, VertexPoint)
        if e.is_loop and e.origin == b.vertex:
            raise ValueError(
                f"{b} is ambiguous on loop {a.edge!r}; use an e:@ endpoint form"
            )
        if e.origin == b.vertex:
            return a.edge, a.t, ZERO
        if e.terminus == b.vertex:
            return a.edge, a.t, ONE
        raise ValueError(f"{a} and {b} do not share a closed edge")
    if isinstance(b, InteriorPoint):
        e, c1, c0 = _resolve_carrier(g, b, a)
        return e, c0, c1
    # vertex to vertex
    assert isinstance(a, VertexPoint) and isinstance(b, VertexPoint)
    if a.vertex == b.vertex:
        raise ValueError("constant steps are handled by the caller")
    joining = [
        e
        for e in g.edges
        if {e.origin, e.terminus} == {a.vertex, b.vertex}
    ]
    if len(joining) != 1:
        raise ValueError(
            f"edge between {a} and {b} is "
            + ("missing" if not joining else "ambiguous; use e:@ endpoint forms")
        )
    e = joining[0]
    if e.origin == a.vertex:
        return e.id, ZERO, ONE
    return e.id, ONE, ZERO


def track_from_points(
    codomain: Graph, schedule: list[tuple[Fraction, GraphPoint]]
) -> EdgeTrack:
    """Build a track from a breakpoint schedule of (parameter, point).

    Consecutive points must share a closed edge; loop-adjacent points
    must use interior or e:@ endpoint coordinates so the carrier is
    unambiguous (a bare vertex is ambiguous on a loop).
    """
    if len(schedule) < 2:
        raise ValueError("schedule needs at least two breakpoints")
    segs: list[TrackSegment] = []
    for (t0, a), (t1, b) in zip(schedule, schedule[1:]):
        t0, t1 = Fraction(t0), Fraction(t1)
        if not t0 < t1:
            raise ValueError(f"schedule times must increase ({t0} then {t1})")
        if a == b:
            segs.append(constant_segment_at(codomain, t0, t1, a))
            continue
        eid, c0, c1 = _resolve_carrier(codomain, a, b)
        segs.append(TrackSegment(t0, t1, eid, c0, c1))
    if segs[0].t0 != 0 or segs[-1].t1 != 1:
        raise ValueError("schedule must start at 0 and end at 1")
    return EdgeTrack(tuple(segs))


def compose(outer: PLMap, inner: PLMap) -> PLMap:
    """The composite map outer . inner (apply inner first)."""
    if inner.codomain != outer.domain:
        raise ValueError("codomain of inner must be the domain of outer")
    vi = {v: evaluate(outer, p) for v, p in inner.vertex_images}
    tracks = {}
    for eid, track in inner.tracks:
        segs: list[TrackSegment] = []
        for s in track.segments:
            segs.extend(_compose_segment(outer, s))
        tracks[eid] = EdgeTrack(tuple(segs))
    return PLMap.build(
        f"{outer.name}.{inner.name}", inner.domain, outer.codomain, vi, tracks
    )


def _compose_segment(outer: PLMap, s: TrackSegment) -> list[TrackSegment]:
    """outer restricted along one affine sweep of an edge of its domain."""
    if s.constant:
        p = outer.domain.point(s.edge, s.a0)
        return [constant_segment_at(outer.codomain, s.t0, s.t1, evaluate(outer, p))]
    track = outer.track(s.edge)
    lo_c, hi_c = (s.a0, s.a1) if s.a0 < s.a1 else (s.a1, s.a0)
    refined = refine_track(track, [c for c in (lo_c, hi_c) if 0 < c < 1])
    part = [t for t in refined.segments if lo_c <= t.t0 and t.t1 <= hi_c]
    if s.a0 > s.a1:
        part = [
            TrackSegment(t.t1, t.t0, t.edge, t.a1, t.a0) for t in reversed(part)
        ]
        # reflect the edge-coordinate parameter onto the sweep direction
    out: list[TrackSegment] = []
    span_c = s.a1 - s.a0
    for t in part:
        u0 = s.t0 + (t.t0 - s.a0) * (s.t1 - s.t0) / span_c
        u1 = s.t0 + (t.t1 - s.a0) * (s.t1 - s.t0) / span_c
        out.append(TrackSegment(u0, u1, t.edge, t.a0, t.a1))
    return out


# ---------------------------------------------------------------------------
# Transport of a map across a codomain edge subdivision.


def map_to_subdivided(m: PLMap, new_cod: Graph, sub: SubdivisionMap) -> PLMap:
    vi = {v: sub.to_new(p) for v, p in m.vertex_images}
    cut = sub.cut
    tracks = {}
    for eid, track in m.tracks:
        segs: list[TrackSegment] = []
        for s in track.segments:
            if s.edge != sub.edge:
                segs.append(s)
                continue
            pieces = [s]
            if min(s.a0, s.a1) < cut < max(s.a0, s.a1):
                t_cut = s.t0 + (s.t1 - s.t0) * (cut - s.a0) / (s.a1 - s.a0)
                pieces = [
                    TrackSegment(s.t0, t_cut, s.edge, s.a0, cut),
                    TrackSegment(t_cut, s.t1, s.edge, cut, s.a1),
                ]
            for p in pieces:
                if p.a0 == cut and p.a1 == cut:
                    segs.append(
                        constant_segment_at(
                            new_cod, p.t0, p.t1, VertexPoint(sub.new_vertex)
                        )
                    )
                elif max(p.a0, p.a1) <= cut:
                    segs.append(
                        TrackSegment(p.t0, p.t1, sub.first, p.a0 / cut, p.a1 / cut)
                    )
                else:
                    segs.append(
                        TrackSegment(
                            p.t0,
                            p.t1,
                            sub.second,
                            (p.a0 - cut) / (1 - cut),
                            (p.a1 - cut) / (1 - cut),
                        )
                    )
        tracks[eid] = EdgeTrack(tuple(segs))
    return PLMap(m.name, m.domain, new_cod, tuple(sorted(vi.items())), tuple(sorted(tracks.items())))


def map_to_coarsened(m: PLMap, original_cod: Graph, sub: SubdivisionMap) -> PLMap:
    vi = {v: sub.to_old(p) for v, p in m.vertex_images}
    tracks = {}
    for eid, track in m.tracks:
        segs = []
        for s in track.segments:
            if s.edge in (sub.first, sub.second):
                segs.append(
                    TrackSegment(
                        s.t0,
                        s.t1,
                        sub.edge,
                        sub.coord_to_old(s.edge, s.a0),
                        sub.coord_to_old(s.edge, s.a1),
                    )
                )
            else:
                segs.append(s)
        tracks[eid] = EdgeTrack(tuple(segs))
    return PLMap(m.name, m.domain, original_cod, tuple(sorted(vi.items())), tuple(sorted(tracks.items())))
