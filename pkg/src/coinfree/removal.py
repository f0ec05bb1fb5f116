"""Constructive removal of coincidences by homotopy.

The pipeline works window by window: isolate one coincidence inside a
parameter window on its domain edge, replace both tracks there by
schedules that provably avoid each other, and repeat.  Transversal
crossings need the fork maneuver (retreat to a branch vertex, duck into
two different side darts, pass, return); everything else is removable by
cheap local perturbations.  Every replacement is verified on the spot by
the exact solver, so a bug here fails loudly instead of shipping a bogus
"coincidence free" answer.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .certify import circle_degree, nielsen_circle
from .graphs import (
    Dart,
    ForkRoute,
    ForkRouteError,
    Graph,
    GraphClass,
    classify,
    fork_route,
    subdivide,
)
from .homotopy import HomotopyStep, LocalWindow, StepKind, TrackFragment
from .plmap import (
    CoincidencePoint,
    EdgeTrack,
    PLMap,
    TrackSegment,
    Transversality,
    _scan_edge,
    _transversality_at,
    coincidences,
    common_refinement,
    constant_segment_at,
    fragment_of,
    general_position,
    map_to_coarsened,
    map_to_subdivided,
    refine_track,
    splice,
    squeeze,
    validate_map,
)
from .points import GraphPoint, InteriorPoint, VertexPoint

ZERO = Fraction(0)
ONE = Fraction(1)
QUARTER = Fraction(1, 4)


class RemovalError(RuntimeError):
    pass


class UnsupportedCodomainError(RemovalError):
    """Raised for map pairs the theory deliberately leaves out."""


@dataclass(frozen=True)
class CoincidenceFree:
    pass


@dataclass(frozen=True)
class CircleObstruction:
    nielsen: int


@dataclass(frozen=True)
class RemovalReport:
    final_f: PLMap
    final_g: PLMap
    steps: tuple[HomotopyStep, ...]
    outcome: CoincidenceFree | CircleObstruction


def _check_pair(f: PLMap, g: PLMap) -> None:
    if f.domain != g.domain or f.codomain != g.codomain:
        raise ValueError("maps must share domain and codomain")


def _frag(m: PLMap, label: str, eid: str, lo: Fraction, hi: Fraction) -> TrackFragment:
    return TrackFragment(label, eid, lo, hi, fragment_of(m.track(eid), lo, hi))


def _isolating_window(f: PLMap, g: PLMap, c: CoincidencePoint) -> LocalWindow:
    """Window around c free of other coincidences and track breakpoints.

    The breakpoint lists include 0 and 1, so the window automatically
    stays strictly inside the edge; half the gap keeps every excluded
    feature strictly outside the closed window.
    """
    t0 = c.location.t
    eid = c.location.edge
    near: list[Fraction] = []
    for cp in coincidences(f, g):
        if isinstance(cp.location, InteriorPoint) and cp.location.edge == eid:
            near.append(cp.location.t)
    near.extend(f.track(eid).breakpoints())
    near.extend(g.track(eid).breakpoints())
    gaps = [abs(x - t0) for x in near if x != t0]
    return LocalWindow(eid, t0, min(gaps) / 2)


def _window_coords(
    m: PLMap, sigma: str, lo: Fraction, hi: Fraction, rho: str
) -> tuple[Fraction, Fraction]:
    """Boundary coordinates of m's window fragment on the value edge."""
    inside = [
        s
        for s in refine_track(m.track(sigma), [lo, hi]).segments
        if lo <= s.t0 and s.t1 <= hi
    ]
    if any(s.edge != rho for s in inside):
        raise RemovalError("window fragment leaves the value edge")
    return inside[0].a0, inside[-1].a1


def _window_clean(f: PLMap, g: PLMap, eid: str, lo: Fraction, hi: Fraction) -> None:
    roots, overlaps, _ = _scan_edge(f, g, eid)
    if any(lo <= t <= hi for t in roots) or any(
        b > lo and a < hi for a, b in overlaps
    ):
        raise RemovalError("replacement schedules still meet inside the window")


# ---------------------------------------------------------------------------
# Normal form.


def normal_form(
    f: PLMap, g: PLMap, c: CoincidencePoint
) -> tuple[LocalWindow, bool]:
    """Isolating window on which the pair straddles: one map enters the
    window above the other and exits below it, both riding the value
    edge the whole way.  swapped reports that g, not f, is the map on
    top at the window's left end."""
    if c.transversality is not Transversality.CROSSING:
        raise RemovalError("normal form requires a transversal crossing")
    w = _isolating_window(f, g, c)
    rho = c.value.edge
    cf0, cf1 = _window_coords(f, w.edge, w.lo, w.hi, rho)
    cg0, cg1 = _window_coords(g, w.edge, w.lo, w.hi, rho)
    if cf0 == cg0 or cf1 == cg1 or (cf0 > cg0) == (cf1 > cg1):
        raise RemovalError("window boundary values do not straddle")
    return w, cf0 < cg0


# ---------------------------------------------------------------------------
# Fork maneuver.


def fork_maneuver(
    f: PLMap, g: PLMap, w: LocalWindow, r: ForkRoute
) -> tuple[PLMap, PLMap, HomotopyStep]:
    """Replace both window fragments by the passing schedules.

    The map entering the window nearer the fork leads: it retreats to
    the fork by relative time 3/20, hides in one side dart until 13/20,
    and walks out to its own exit height; the trailing map follows at
    7/20 and 17/20 using the other side dart.  Heights are measured
    from the retreat end, motions are affine in path length, and the
    result is checked exactly before it is accepted.
    """
    cod = f.codomain
    if classify(cod) is not GraphClass.BRANCHED:
        raise RemovalError("fork maneuver requires a branched codomain")
    rho = r.start.edge
    sigma, lo, hi = w.edge, w.lo, w.hi
    fwd = r.start.forward

    def height(coord: Fraction) -> Fraction:
        return coord if fwd else 1 - coord

    def coord(h: Fraction) -> Fraction:
        return h if fwd else 1 - h

    cf0, cf1 = _window_coords(f, sigma, lo, hi, rho)
    cg0, cg1 = _window_coords(g, sigma, lo, hi, rho)
    a_f, b_f = height(cf0), height(cf1)
    a_g, b_g = height(cg0), height(cg1)
    if a_f == a_g or b_f == b_g or (a_f > a_g) == (b_f > b_g):
        raise RemovalError("window is not in crossing normal form")
    lead_is_g = a_g < a_f
    a_lead, b_lead = (a_g, b_g) if lead_is_g else (a_f, b_f)
    a_trail, b_trail = (a_f, b_f) if lead_is_g else (a_g, b_g)
    L = len(r.path)
    fork_point = VertexPoint(r.fork_vertex)

    def retreat(t0: Fraction, t1: Fraction, h0: Fraction) -> list[TrackSegment]:
        total = h0 + L
        if total == 0:
            return [constant_segment_at(cod, t0, t1, fork_point)]
        segs = []
        span = t1 - t0
        cur = t0 + span * h0 / total
        if h0 > 0:
            segs.append(TrackSegment(t0, cur, rho, coord(h0), coord(ZERO)))
        for j, d in enumerate(r.path, start=1):
            nxt = t0 + span * (h0 + j) / total
            a0, a1 = (ZERO, ONE) if d.forward else (ONE, ZERO)
            segs.append(TrackSegment(cur, nxt, d.edge, a0, a1))
            cur = nxt
        return segs

    def advance(t0: Fraction, t1: Fraction, h1: Fraction) -> list[TrackSegment]:
        total = L + h1
        if total == 0:
            return [constant_segment_at(cod, t0, t1, fork_point)]
        segs = []
        span = t1 - t0
        cur = t0
        for j, d in enumerate(reversed(r.path), start=1):
            nxt = t0 + span * j / total
            back = d.reversed()
            a0, a1 = (ZERO, ONE) if back.forward else (ONE, ZERO)
            segs.append(TrackSegment(cur, nxt, back.edge, a0, a1))
            cur = nxt
        if h1 > 0:
            segs.append(TrackSegment(cur, t1, rho, coord(ZERO), coord(h1)))
        return segs

    def duck(t0: Fraction, tmid: Fraction, t1: Fraction, d: Dart) -> list[TrackSegment]:
        rest, deep = (ZERO, QUARTER) if d.forward else (ONE, 1 - QUARTER)
        return [
            TrackSegment(t0, tmid, d.edge, rest, deep),
            TrackSegment(tmid, t1, d.edge, deep, rest),
        ]

    t1, t2, t3, t4 = (
        Fraction(3, 20),
        Fraction(7, 20),
        Fraction(13, 20),
        Fraction(17, 20),
    )
    lead = (
        retreat(ZERO, t1, a_lead)
        + duck(t1, t2, t3, r.lambda_)
        + advance(t3, ONE, b_lead)
    )
    trail = (
        retreat(ZERO, t2, a_trail)
        + duck(t2, t3, t4, r.gamma)
        + advance(t4, ONE, b_trail)
    )
    lead = squeeze(lead, lo, hi)
    trail = squeeze(trail, lo, hi)
    f_new = trail if lead_is_g else lead
    g_new = lead if lead_is_g else trail

    old_f = _frag(f, "f", sigma, lo, hi)
    old_g = _frag(g, "g", sigma, lo, hi)
    f2 = f.with_track(sigma, splice(f.track(sigma), lo, hi, list(f_new)))
    g2 = g.with_track(sigma, splice(g.track(sigma), lo, hi, list(g_new)))
    for m in (f2, g2):
        problems = validate_map(m)
        if problems:
            raise RemovalError(f"maneuver produced an invalid map: {problems[0]}")
    _window_clean(f2, g2, sigma, lo, hi)
    step = HomotopyStep(
        kind=StepKind.FORK_MANEUVER,
        maps_changed="both",
        windows=((sigma, lo, hi),),
        replaced=(old_f, old_g),
        replacement=(
            TrackFragment("f", sigma, lo, hi, f_new),
            TrackFragment("g", sigma, lo, hi, g_new),
        ),
        note=(
            f"fork {r.fork_vertex}, route length {L}, "
            f"leading map {'g' if lead_is_g else 'f'}"
        ),
    )
    return f2, g2, step


# ---------------------------------------------------------------------------
# Push-off of non-crossing coincidences.


def push_off(
    f: PLMap, g: PLMap, c: CoincidencePoint
) -> tuple[PLMap, PLMap, HomotopyStep]:
    if c.transversality is Transversality.TANGENTIAL:
        return _push_off_tangential(f, g, c)
    if c.transversality is Transversality.AT_VERTEX_VALUE:
        return _push_off_vertex_value(f, g, c)
    if c.transversality is Transversality.AT_VERTEX_LOCATION:
        return _push_off_vertex_location(f, g, c)
    raise RemovalError("push_off does not handle transversal crossings")


def _push_off_tangential(f, g, c):
    """Tent g away from f on the side f already stays on; since the
    difference keeps one sign on the whole window, adding to it can
    never create a zero, so no coincidence survives or appears."""
    w = _isolating_window(f, g, c)
    sigma, lo, hi = w.edge, w.lo, w.hi
    t0 = c.location.t
    rho = c.value.edge
    c0 = c.value.t
    probe = (lo + t0) / 2
    ef, cf = f.track(sigma).coord_at(probe)
    eg, cg = g.track(sigma).coord_at(probe)
    if ef != rho or eg != rho or cf == cg:
        raise RemovalError("tangential window is not single-carrier")
    g_lo = _window_coords(g, sigma, lo, hi, rho)[0]
    g_hi = _window_coords(g, sigma, lo, hi, rho)[1]
    mid = c0 - c0 / 2 if cf > cg else c0 + (1 - c0) / 2
    replacement = (
        TrackSegment(lo, t0, rho, g_lo, mid),
        TrackSegment(t0, hi, rho, mid, g_hi),
    )
    old = _frag(g, "g", sigma, lo, hi)
    g2 = g.with_track(sigma, splice(g.track(sigma), lo, hi, list(replacement)))
    _window_clean(f, g2, sigma, lo, hi)
    step = HomotopyStep(
        kind=StepKind.PUSH_OFF,
        maps_changed="g",
        windows=((sigma, lo, hi),),
        replaced=(old,),
        replacement=(TrackFragment("g", sigma, lo, hi, replacement),),
        note=f"tangential touch at {c.location} cleared",
    )
    return f, g2, step


def _time_shift_fragment(
    track: EdgeTrack, lo: Fraction, t0: Fraction, hi: Fraction, target: Fraction
) -> tuple[TrackSegment, ...]:
    """Window fragment reparameterized so the t0 event happens at target."""

    def remap(u: Fraction) -> Fraction:
        if u <= t0:
            return lo + (u - lo) * (target - lo) / (t0 - lo)
        return target + (u - t0) * (hi - target) / (hi - t0)

    inside = [
        s
        for s in refine_track(track, [lo, t0, hi]).segments
        if lo <= s.t0 and s.t1 <= hi
    ]
    return tuple(
        TrackSegment(remap(s.t0), remap(s.t1), s.edge, s.a0, s.a1) for s in inside
    )


def _assess_candidate(f, g, sigma, lo, hi, cod):
    """Window coincidences of a candidate pair.

    Returns (count, acceptable): acceptable means every survivor is an
    interior transversal crossing, the only kind the maneuver can still
    remove later.
    """
    roots, overlaps, (tf, tg) = _scan_edge(f, g, sigma)
    if any(b > lo and a < hi for a, b in overlaps):
        return None
    inside = [t for t in roots if lo <= t <= hi]
    for t in inside:
        value = tf.value_at(t, cod)
        if isinstance(value, VertexPoint):
            return None
        if _transversality_at(tf, tg, t) is not Transversality.CROSSING:
            return None
    return len(inside)


def _push_off_vertex_value(f, g, c):
    """The common value sits at a codomain vertex: nudge one map's
    schedule in time so the two vertex visits no longer line up.

    A time shift cannot always avoid creating a fresh crossing (two maps
    exiting into the same edge may still have to trade places), so
    candidates are ranked: first one leaving the window empty, else the
    fewest surviving interior crossings.
    """
    w = _isolating_window(f, g, c)
    sigma, lo, hi = w.edge, w.lo, w.hi
    t0 = c.location.t
    cod = f.codomain
    targets = []
    for num, den in ((1, 2), (1, 3), (2, 3), (1, 5), (2, 5), (3, 5)):
        theta = Fraction(num, den)
        targets.append(t0 + (hi - t0) * theta)
        targets.append(t0 - (t0 - lo) * theta)
    best = None
    for label in ("g", "f"):
        victim = g if label == "g" else f
        for target in targets:
            frag = _time_shift_fragment(victim.track(sigma), lo, t0, hi, target)
            shifted = victim.with_track(
                sigma, splice(victim.track(sigma), lo, hi, list(frag))
            )
            pair = (f, shifted) if label == "g" else (shifted, g)
            count = _assess_candidate(*pair, sigma, lo, hi, cod)
            if count is None:
                continue
            entry = (count, label, shifted, frag)
            if count == 0:
                best = entry
                break
            if best is None or count < best[0]:
                best = entry
        if best is not None and best[0] == 0:
            break
    if best is None:
        raise RemovalError(f"no usable time shift for vertex value at {c.location}")
    _, label, shifted, frag = best
    old = _frag(g if label == "g" else f, label, sigma, lo, hi)
    f2, g2 = (f, shifted) if label == "g" else (shifted, g)
    step = HomotopyStep(
        kind=StepKind.PUSH_OFF,
        maps_changed=label,
        windows=((sigma, lo, hi),),
        replaced=(old,),
        replacement=(TrackFragment(label, sigma, lo, hi, frag),),
        note=f"vertex-valued touch at {c.location} shifted in time",
    )
    return f2, g2, step


def _displacement_candidates(cod: Graph, p: GraphPoint):
    """Nearby replacement values for a displaced vertex image, nearest
    candidates first at each depth, depths shrinking geometrically."""
    out = []
    for k in range(6):
        scale = Fraction(1, 2**k)
        if isinstance(p, VertexPoint):
            depth = QUARTER * scale
            for d in cod.darts_at(p.vertex):
                out.append(cod.point(d.edge, depth if d.forward else 1 - depth))
        else:
            for delta in (-p.t * scale / 2, (1 - p.t) * scale / 2):
                out.append(cod.point(p.edge, p.t + delta))
    return out


def _connector(cod: Graph, p: GraphPoint, target: InteriorPoint):
    """Edge and coordinates of the straight path from p to target."""
    if isinstance(p, InteriorPoint):
        if p.edge != target.edge:
            raise AssertionError("connector must stay in one edge")
        return p.edge, p.t, target.t
    e = cod.edge(target.edge)
    if e.origin == p.vertex and (not e.is_loop or target.t < Fraction(1, 2)):
        return target.edge, ZERO, target.t
    return target.edge, ONE, target.t


def _push_off_vertex_location(f, g, c):
    """The coincidence sits at a domain vertex: move g's image of that
    vertex a small distance away and drag the incident track ends along
    the displacement path.  Not relative to endpoints at the vertex
    itself, but a homotopy all the same: the certifier checks it
    globally.  Candidates are verified exactly, nearest-first."""
    u = c.location.vertex
    p = c.value
    dom, cod = f.domain, f.codomain
    before = {
        cp.location for cp in coincidences(f, g) if cp.location != c.location
    }
    incident = []
    for e in sorted(dom.edges, key=lambda e: e.id):
        if e.origin == u:
            incident.append((e.id, True))
        if e.terminus == u:
            incident.append((e.id, False))
    best = None
    for target in _displacement_candidates(cod, p):
        conn_edge, c_from, c_to = _connector(cod, p, target)
        tracks = {}
        spans = {}
        for eid, at_origin in incident:
            track = tracks.get(eid, g.track(eid))
            seg = track.segments[0] if at_origin else track.segments[-1]
            span = (seg.t1 - seg.t0) / 4
            if at_origin:
                cut = track.segments[0].t0 + span
                mid = cut / 2
                frag = (
                    TrackSegment(ZERO, mid, conn_edge, c_to, c_from),
                ) + squeeze(fragment_of(track, ZERO, cut), mid, cut)
                track = splice(track, ZERO, cut, frag)
                spans[(eid, True)] = cut
            else:
                cut = track.segments[-1].t1 - span
                mid = (cut + 1) / 2
                frag = squeeze(fragment_of(track, cut, ONE), cut, mid) + (
                    TrackSegment(mid, ONE, conn_edge, c_from, c_to),
                )
                track = splice(track, cut, ONE, frag)
                spans[(eid, False)] = cut
            tracks[eid] = track
        g2 = g.with_changes(vertex_images={u: target}, tracks=tracks)
        if validate_map(g2):
            continue
        try:
            after = coincidences(f, g2)
        except Exception:
            continue
        fresh = [cp for cp in after if cp.location not in before]
        if any(
            not (
                isinstance(cp.location, InteriorPoint)
                and isinstance(cp.value, InteriorPoint)
                and cp.transversality is Transversality.CROSSING
            )
            for cp in fresh
        ):
            continue
        entry = (len(fresh), target, g2, spans)
        if not fresh:
            best = entry
            break
        if best is None or len(fresh) < best[0]:
            best = entry
    if best is None:
        raise RemovalError(f"no usable displacement for vertex {u!r}")
    _, target, g2, spans = best
    windows = []
    replaced = []
    replacement = []
    for (eid, at_origin), cut in sorted(spans.items()):
        lo, hi = (ZERO, cut) if at_origin else (cut, ONE)
        windows.append((eid, lo, hi))
        replaced.append(_frag(g, "g", eid, lo, hi))
        replacement.append(_frag(g2, "g", eid, lo, hi))
    step = HomotopyStep(
        kind=StepKind.PUSH_OFF,
        maps_changed="g",
        windows=tuple(windows),
        replaced=tuple(replaced),
        replacement=tuple(replacement),
        note=f"image of vertex {u} slid to {target}",
    )
    return f, g2, step


# ---------------------------------------------------------------------------
# Interval codomain.


def _constant_like(m: PLMap, p: GraphPoint) -> PLMap:
    vi = {v: p for v in m.domain.vertices}
    tracks = {
        e.id: EdgeTrack((constant_segment_at(m.codomain, ZERO, ONE, p),))
        for e in m.domain.edges
    }
    return PLMap.build(m.name, m.domain, m.codomain, vi, tracks)


def _to_distinct_constants(f: PLMap, g: PLMap, note: str):
    cod = f.codomain
    e = min(e.id for e in cod.edges)
    f2 = _constant_like(f, cod.point(e, Fraction(1, 3)))
    g2 = _constant_like(g, cod.point(e, Fraction(2, 3)))
    edges = sorted(x.id for x in f.domain.edges)
    step = HomotopyStep(
        kind=StepKind.CONSTANT_DEFORMATION,
        maps_changed="both",
        windows=tuple((eid, ZERO, ONE) for eid in edges),
        replaced=tuple(
            _frag(m, lbl, eid, ZERO, ONE)
            for m, lbl in ((f, "f"), (g, "g"))
            for eid in edges
        ),
        replacement=tuple(
            _frag(m, lbl, eid, ZERO, ONE)
            for m, lbl in ((f2, "f"), (g2, "g"))
            for eid in edges
        ),
        note=note,
    )
    return f2, g2, step


def deform_to_constants(f: PLMap, g: PLMap):
    """Both maps to distinct constant points on the smallest edge."""
    _check_pair(f, g)
    if classify(f.codomain) is not GraphClass.INTERVAL:
        raise UnsupportedCodomainError("deform_to_constants needs an interval codomain")
    return _to_distinct_constants(f, g, note="interval codomain; both maps nullhomotopic")


# ---------------------------------------------------------------------------
# Circle codomain.


def _cycle_darts(g: Graph) -> list[Dart]:
    """The darts of a circle graph in walking order from the smallest vertex."""
    v0 = min(g.vertices)
    first = g.darts_at(v0)[0]
    walk = [first]
    cur = g.tip(first)
    while cur != v0:
        options = [d for d in g.darts_at(cur) if d != walk[-1].reversed()]
        walk.append(options[0])
        cur = g.tip(options[0])
    if len(walk) != len(g.edges):
        raise ValueError("graph is not a single cycle")
    return walk


def _arc_point(cod: Graph, walk: list[Dart], arc: Fraction) -> GraphPoint:
    k = math.floor(arc)
    fr = arc - k
    d = walk[k % len(walk)]
    if fr == 0:
        return VertexPoint(cod.base(d))
    return cod.point(d.edge, fr if d.forward else 1 - fr)


def _split_arcs(a: Fraction, b: Fraction):
    pieces = []
    cur = a
    if b > a:
        nxt = Fraction(math.floor(cur) + 1)
        while nxt < b:
            pieces.append((cur, nxt))
            cur, nxt = nxt, nxt + 1
    else:
        nxt = Fraction(math.ceil(cur) - 1)
        while nxt > b:
            pieces.append((cur, nxt))
            cur, nxt = nxt, nxt - 1
    pieces.append((cur, b))
    return pieces


def _linear_circle_model(m: PLMap, degree: int, offset: Fraction) -> PLMap:
    """The constant-speed degree-d model of a circle-to-circle map,
    started at the given arc offset in the codomain walk frame."""
    dom, cod = m.domain, m.codomain
    dwalk = _cycle_darts(dom)
    cwalk = _cycle_darts(cod)
    p, q = len(dwalk), len(cwalk)
    arcs = [offset + Fraction(degree * q * i, p) for i in range(p + 1)]
    vi: dict[str, GraphPoint] = {}
    tracks: dict[str, EdgeTrack] = {}
    for i, dart in enumerate(dwalk):
        vi[dom.base(dart)] = _arc_point(cod, cwalk, arcs[i])
        a, b = arcs[i], arcs[i + 1]
        if a == b:
            legs = [constant_segment_at(cod, ZERO, ONE, _arc_point(cod, cwalk, a))]
        else:
            legs = []
            for x0, x1 in _split_arcs(a, b):
                t0 = (x0 - a) / (b - a)
                t1 = (x1 - a) / (b - a)
                k = math.floor(min(x0, x1))
                d = cwalk[k % q]
                c0, c1 = x0 - k, x1 - k
                if not d.forward:
                    c0, c1 = 1 - c0, 1 - c1
                legs.append(TrackSegment(t0, t1, d.edge, c0, c1))
        if dart.forward:
            tracks[dart.edge] = EdgeTrack(tuple(legs))
        else:
            tracks[dart.edge] = EdgeTrack(
                tuple(
                    TrackSegment(1 - s.t1, 1 - s.t0, s.edge, s.a1, s.a0)
                    for s in reversed(legs)
                )
            )
    return PLMap.build(m.name, dom, cod, vi, tracks)


def _full_track_fragments(m: PLMap, label: str) -> tuple[TrackFragment, ...]:
    return tuple(
        TrackFragment(label, eid, ZERO, ONE, m.track(eid).segments)
        for eid in sorted(e.id for e in m.domain.edges)
    )


def _remove_circle(f: PLMap, g: PLMap) -> RemovalReport:
    dom_cls = classify(f.domain)
    if dom_cls is GraphClass.BRANCHED:
        raise UnsupportedCodomainError(
            "circle codomain with a branched domain has no supported obstruction theory"
        )
    if dom_cls is GraphClass.INTERVAL:
        f2, g2, step = _to_distinct_constants(
            f, g, note="tree domain into a circle; both maps nullhomotopic"
        )
        return RemovalReport(f2, g2, (step,), CoincidenceFree())
    n = nielsen_circle(f, g)
    if n > 0:
        return RemovalReport(f, g, (), CircleObstruction(n))
    degree = circle_degree(f)
    half = Fraction(len(_cycle_darts(f.codomain)), 2)
    f2 = _linear_circle_model(f, degree, ZERO)
    g2 = _linear_circle_model(g, degree, half)
    if coincidences(f2, g2):
        raise RemovalError("rotated circle models unexpectedly meet")
    edges = tuple((eid, ZERO, ONE) for eid in sorted(e.id for e in f.domain.edges))
    steps = (
        HomotopyStep(
            kind=StepKind.CIRCLE_ROTATION,
            maps_changed="f",
            windows=edges,
            replaced=_full_track_fragments(f, "f"),
            replacement=_full_track_fragments(f2, "f"),
            note=f"straightened to the degree-{degree} model",
        ),
        HomotopyStep(
            kind=StepKind.CIRCLE_ROTATION,
            maps_changed="g",
            windows=edges,
            replaced=_full_track_fragments(g, "g"),
            replacement=_full_track_fragments(g2, "g"),
            note="straightened and rotated by half the codomain girth",
        ),
    )
    return RemovalReport(f2, g2, steps, CoincidenceFree())


# ---------------------------------------------------------------------------
# Full pipeline.


def _potential(coins) -> tuple[int, int]:
    crossings = sum(
        1 for c in coins if c.transversality is Transversality.CROSSING
    )
    return len(coins) - crossings, crossings


def _crossing_step(f: PLMap, g: PLMap, c: CoincidencePoint):
    w, _ = normal_form(f, g, c)
    cod = f.codomain
    rho = c.value.edge

    def find_route(graph: Graph, edge: str) -> ForkRoute | None:
        for start in (Dart(edge, True), Dart(edge, False)):
            try:
                return fork_route(graph, start)
            except ForkRouteError:
                continue
        return None

    route = find_route(cod, rho)
    if route is not None:
        f2, g2, step = fork_maneuver(f, g, w, route)
        return f2, g2, [step]

    # Only a balloon-shaped codomain lands here: the value edge is a loop
    # at the single branch vertex.  Splitting the loop beyond the crossing
    # frees its other half to serve as a side road; undo the split after.
    cut = (c.value.t + 1) / 2
    fine_cod, sub = subdivide(cod, rho, cut)
    f1 = map_to_subdivided(f, fine_cod, sub)
    g1 = map_to_subdivided(g, fine_cod, sub)
    c1 = next(
        cp for cp in coincidences(f1, g1) if cp.location == c.location
    )
    w1, _ = normal_form(f1, g1, c1)
    route = find_route(fine_cod, c1.value.edge)
    if route is None:
        raise RemovalError("no fork route even after splitting the value edge")
    f2, g2, inner = fork_maneuver(f1, g1, w1, route)
    f3 = map_to_coarsened(f2, cod, sub)
    g3 = map_to_coarsened(g2, cod, sub)
    sigma, lo, hi = inner.windows[0]
    _window_clean(f3, g3, sigma, lo, hi)
    step = HomotopyStep(
        kind=StepKind.FORK_MANEUVER,
        maps_changed="both",
        windows=((sigma, lo, hi),),
        replaced=(_frag(f, "f", sigma, lo, hi), _frag(g, "g", sigma, lo, hi)),
        replacement=(
            _frag(f3, "f", sigma, lo, hi),
            _frag(g3, "g", sigma, lo, hi),
        ),
        note=inner.note + f"; value edge temporarily split at {cut}",
    )
    return f3, g3, [step]


def remove_all(f: PLMap, g: PLMap) -> RemovalReport:
    """Deform the pair until no coincidence remains, or report why not.

    Interval codomain: both maps become distinct constants.  Circle
    codomain: the degree difference is the whole story.  Branched
    codomain: linearize, then clear non-crossing coincidences by
    push-offs and crossings by fork maneuvers; a two-level count
    (non-crossings, crossings) drops lexicographically at every step,
    which is checked, so the loop provably ends.
    """
    _check_pair(f, g)
    for m in (f, g):
        problems = validate_map(m)
        if problems:
            raise ValueError(f"invalid map {m.name!r}: {problems[0]}")
    cls = classify(f.codomain)
    if cls is GraphClass.INTERVAL:
        f2, g2, step = deform_to_constants(f, g)
        return RemovalReport(f2, g2, (step,), CoincidenceFree())
    if cls is GraphClass.CIRCLE:
        return _remove_circle(f, g)

    f, g, steps_gp = general_position(f, g)
    steps: list[HomotopyStep] = list(steps_gp)
    coins = coincidences(f, g)
    for _ in range(10_000):
        if not coins:
            return RemovalReport(f, g, tuple(steps), CoincidenceFree())
        phi = _potential(coins)
        target = next(
            (c for c in coins if c.transversality is not Transversality.CROSSING),
            None,
        )
        if target is not None:
            f, g, step = push_off(f, g, target)
            steps.append(step)
        else:
            f, g, new_steps = _crossing_step(f, g, coins[0])
            steps.extend(new_steps)
        coins = coincidences(f, g)
        if not _potential(coins) < phi:
            raise RemovalError("coincidence count failed to decrease")
    raise RemovalError("removal did not terminate")
