"""Line-based text format for graphs and maps.

Graph blocks:

    graph G
    vertex v
    edge a v w

Map blocks (graphs must be defined first):

    map f G H
    vimage v v:x
    track a : (0,v:x) (1/2,e:r@1/2) (1,v:y)

'#' starts a comment, blank lines separate blocks, rationals are `p/q`
or integers.  Points are `v:<id>` or `e:<id>@<t>`.  Freestanding points
keep t strictly inside (0,1); inside a track list the boundary forms
`e:<id>@0` and `e:<id>@1` are also legal and pin down the carrier edge
where the vertex alone would be ambiguous (loops, parallel edges).  Two
consecutive pairs may repeat a parameter when they name the same point;
such a zero-length step sweeps nothing and only switches the carrier
frame, which is how a track moving directly from one loop into another
is written.  The serializer emits exactly these forms when needed, so
its output always re-parses to the same map.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .graphs import EdgeRec, Graph
from .plmap import EdgeTrack, PLMap, TrackSegment, _resolve_carrier, constant_segment_at
from .points import GraphPoint, InteriorPoint, VertexPoint

ZERO = Fraction(0)
ONE = Fraction(1)


class ParseError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


@dataclass(frozen=True)
class Document:
    graphs: dict[str, Graph]
    maps: dict[str, PLMap]


def parse_rational(text: str, line: int) -> Fraction:
    m = re.fullmatch(r"(-?\d+)(?:/(\d+))?", text)
    if not m:
        raise ParseError(f"malformed rational {text!r}", line)
    num = int(m.group(1))
    if m.group(2) is None:
        return Fraction(num)
    den = int(m.group(2))
    if den == 0:
        raise ParseError(f"zero denominator in rational {text!r}", line)
    return Fraction(num, den)


@dataclass(frozen=True)
class _PointTok:
    """A parsed point plus the carrier pin a boundary form carries."""

    value: GraphPoint
    pin: tuple[str, Fraction] | None  # (edge id, boundary coordinate)


def _parse_point_tok(g: Graph, text: str, line: int, allow_pins: bool) -> _PointTok:
    if text.startswith("v:"):
        v = text[2:]
        if v not in g.vertices:
            raise ParseError(f"unknown vertex {v!r} in point {text!r}", line)
        return _PointTok(VertexPoint(v), None)
    if text.startswith("e:"):
        body = text[2:]
        eid, sep, rat = body.partition("@")
        if not sep:
            raise ParseError(f"point {text!r} lacks '@coordinate'", line)
        if not g.has_edge(eid):
            raise ParseError(f"unknown edge {eid!r} in point {text!r}", line)
        t = parse_rational(rat, line)
        if not 0 <= t <= 1:
            raise ParseError(f"coordinate {rat} outside [0, 1] in {text!r}", line)
        if 0 < t < 1:
            return _PointTok(InteriorPoint(eid, t), None)
        if not allow_pins:
            raise ParseError(f"{text!r} names a vertex; write v:<id> here", line)
        return _PointTok(g.point(eid, t), (eid, t))
    raise ParseError(f"point {text!r} must start with 'v:' or 'e:'", line)


def parse_point(g: Graph, text: str, line: int = 0) -> GraphPoint:
    return _parse_point_tok(g, text, line, allow_pins=False).value


def _pair_segment(
    g: Graph, t0: Fraction, p: _PointTok, t1: Fraction, q: _PointTok, line: int
) -> TrackSegment:
    pv, qv = p.value, q.value
    # An interior point anchors the carrier; a pin on the other token
    # matters only if it names the same edge (a pin for a different edge
    # belongs to the neighboring step and its value stands alone here).
    if isinstance(pv, InteriorPoint) or isinstance(qv, InteriorPoint):
        anchor = pv if isinstance(pv, InteriorPoint) else qv
        eid = anchor.edge
        e = g.edge(eid)

        def coord(tok: _PointTok) -> Fraction:
            v = tok.value
            if isinstance(v, InteriorPoint):
                if v.edge != eid:
                    raise ParseError(
                        f"{v} does not lie on the closed edge {eid!r}", line
                    )
                return v.t
            if tok.pin and tok.pin[0] == eid:
                return tok.pin[1]
            if e.is_loop:
                raise ParseError(
                    f"vertex point on loop {eid!r} is ambiguous; "
                    "pin it with e:@0 or e:@1",
                    line,
                )
            if v.vertex == e.origin:
                return ZERO
            if v.vertex == e.terminus:
                return ONE
            raise ParseError(
                f"vertex {v.vertex!r} is not an end of edge {eid!r}", line
            )

        return TrackSegment(t0, t1, eid, coord(p), coord(q))
    if p.pin and q.pin and p.pin[0] == q.pin[0]:
        return TrackSegment(t0, t1, p.pin[0], p.pin[1], q.pin[1])
    for tok, other in ((p, q), (q, p)):
        if tok.pin:
            eid = tok.pin[0]
            e = g.edge(eid)
            ov = other.value
            if not e.is_loop and ov.vertex in (e.origin, e.terminus):
                c_other = ZERO if ov.vertex == e.origin else ONE
                if tok is p:
                    return TrackSegment(t0, t1, eid, tok.pin[1], c_other)
                return TrackSegment(t0, t1, eid, c_other, tok.pin[1])
    if pv == qv:
        return constant_segment_at(g, t0, t1, pv)
    try:
        eid, a0, a1 = _resolve_carrier(g, pv, qv)
    except ValueError as exc:
        raise ParseError(str(exc), line) from None
    return TrackSegment(t0, t1, eid, a0, a1)


_PAIR_RE = re.compile(r"\(([^,()]+),([^,()]+)\)")


def _parse_track_line(g: Graph, rest: str, line: int) -> EdgeTrack:
    body = rest.strip()
    pairs = _PAIR_RE.findall(body)
    if _PAIR_RE.sub("", body).strip():
        raise ParseError("track points must look like (<t>,<point>)", line)
    if len(pairs) < 2:
        raise ParseError("a track needs at least two (t, point) pairs", line)
    parsed = []
    for rat, pt in pairs:
        t = parse_rational(rat.strip(), line)
        parsed.append((t, _parse_point_tok(g, pt.strip(), line, allow_pins=True)))
    if parsed[0][0] != 0 or parsed[-1][0] != 1:
        raise ParseError("track must start at t=0 and end at t=1", line)
    segs = []
    for (t0, p), (t1, q) in zip(parsed, parsed[1:]):
        if t0 > t1:
            raise ParseError("track times must not decrease", line)
        if t0 == t1:
            if p.value != q.value:
                raise ParseError(
                    "a repeated parameter must repeat the same point", line
                )
            continue
        segs.append(_pair_segment(g, t0, p, t1, q, line))
    return EdgeTrack(tuple(segs))


def parse_document(
    text: str, known_graphs: dict[str, Graph] | None = None
) -> Document:
    """Parse a document of graph and map blocks.

    known_graphs supplies definitions from other files; a graph defined
    again must match them exactly.
    """
    graphs: dict[str, Graph] = dict(known_graphs or {})
    own_graphs: dict[str, Graph] = {}
    maps: dict[str, PLMap] = {}

    # Accumulator for the block being read.
    mode = None  # None | "graph" | "map"
    name = ""
    start_line = 0
    g_vertices: list[str] = []
    g_edges: list[EdgeRec] = []
    m_dom: Graph | None = None
    m_cod: Graph | None = None
    m_vimages: dict[str, GraphPoint] = {}
    m_tracks: dict[str, EdgeTrack] = {}

    def close_block() -> None:
        nonlocal mode
        if mode == "graph":
            g = Graph(
                name,
                tuple(sorted(g_vertices)),
                tuple(sorted(g_edges, key=lambda e: e.id)),
            )
            if name in graphs and graphs[name] != g:
                raise ParseError(
                    f"graph {name!r} redefined with different structure", start_line
                )
            graphs[name] = g
            own_graphs[name] = g
        elif mode == "map":
            if name in maps:
                raise ParseError(f"duplicate map {name!r}", start_line)
            maps[name] = PLMap.build(name, m_dom, m_cod, m_vimages, m_tracks)
        mode = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].strip()
        if not content:
            continue
        words = content.split()
        head, args = words[0], words[1:]
        if head == "graph":
            if len(args) != 1:
                raise ParseError("usage: graph <name>", lineno)
            close_block()
            mode, name, start_line = "graph", args[0], lineno
            g_vertices, g_edges = [], []
        elif head == "map":
            if len(args) != 3:
                raise ParseError("usage: map <name> <domain> <codomain>", lineno)
            close_block()
            mode, name, start_line = "map", args[0], lineno
            for gname in args[1:]:
                if gname not in graphs:
                    raise ParseError(f"unknown graph {gname!r}", lineno)
            m_dom, m_cod = graphs[args[1]], graphs[args[2]]
            m_vimages, m_tracks = {}, {}
        elif head == "vertex":
            if mode != "graph":
                raise ParseError("'vertex' outside a graph block", lineno)
            if len(args) != 1:
                raise ParseError("usage: vertex <id>", lineno)
            if args[0] in g_vertices:
                raise ParseError(f"duplicate vertex {args[0]!r}", lineno)
            g_vertices.append(args[0])
        elif head == "edge":
            if mode != "graph":
                raise ParseError("'edge' outside a graph block", lineno)
            if len(args) != 3:
                raise ParseError("usage: edge <id> <origin> <terminus>", lineno)
            if any(e.id == args[0] for e in g_edges):
                raise ParseError(f"duplicate edge {args[0]!r}", lineno)
            for v in args[1:]:
                if v not in g_vertices:
                    raise ParseError(
                        f"edge end {v!r} is not a declared vertex", lineno
                    )
            g_edges.append(EdgeRec(*args))
        elif head == "vimage":
            if mode != "map":
                raise ParseError("'vimage' outside a map block", lineno)
            if len(args) != 2:
                raise ParseError("usage: vimage <vertex> <point>", lineno)
            if args[0] not in m_dom.vertices:
                raise ParseError(f"unknown domain vertex {args[0]!r}", lineno)
            if args[0] in m_vimages:
                raise ParseError(f"duplicate vimage for {args[0]!r}", lineno)
            m_vimages[args[0]] = parse_point(m_cod, args[1], lineno)
        elif head == "track":
            if mode != "map":
                raise ParseError("'track' outside a map block", lineno)
            if len(args) < 2 or args[1] != ":":
                raise ParseError("usage: track <edge> : (<t>,<point>) ...", lineno)
            if not m_dom.has_edge(args[0]):
                raise ParseError(f"unknown domain edge {args[0]!r}", lineno)
            if args[0] in m_tracks:
                raise ParseError(f"duplicate track for edge {args[0]!r}", lineno)
            rest = content.split(":", 1)[1]
            m_tracks[args[0]] = _parse_track_line(m_cod, rest, lineno)
        else:
            raise ParseError(f"unknown directive {head!r}", lineno)
    close_block()
    return Document(own_graphs, maps)


def parse_map_file(text: str, known_graphs: dict[str, Graph] | None = None) -> PLMap:
    """The single map a self-contained map file defines."""
    doc = parse_document(text, known_graphs)
    if len(doc.maps) != 1:
        raise ParseError(
            f"expected exactly one map in the file, found {len(doc.maps)}", 0
        )
    return next(iter(doc.maps.values()))


# ---------------------------------------------------------------------------
# Serialization.


def format_point(p: GraphPoint) -> str:
    if isinstance(p, VertexPoint):
        return f"v:{p.vertex}"
    return f"e:{p.edge}@{p.t}"


def serialize_graph(g: Graph) -> str:
    lines = [f"graph {g.name}"]
    lines.extend(f"vertex {v}" for v in sorted(g.vertices))
    lines.extend(
        f"edge {e.id} {e.origin} {e.terminus}"
        for e in sorted(g.edges, key=lambda e: e.id)
    )
    return "\n".join(lines) + "\n"


def _carrier_ambiguous(g: Graph, e: EdgeRec) -> bool:
    if e.is_loop:
        return True
    joining = [
        r for r in g.edges if {r.origin, r.terminus} == {e.origin, e.terminus}
    ]
    return len(joining) > 1


def _segment_token(g: Graph, seg: TrackSegment, c: Fraction) -> str:
    """Render one endpoint of a segment in that segment's own frame."""
    if 0 < c < 1:
        return f"e:{seg.edge}@{c}"
    e = g.edge(seg.edge)
    if seg.constant or not _carrier_ambiguous(g, e):
        return f"v:{e.origin if c == 0 else e.terminus}"
    return f"e:{seg.edge}@{c}"


def format_track(track: EdgeTrack, cod: Graph) -> str:
    """Pair list for a track.

    Each segment renders its endpoints in its own carrier frame; when a
    junction's two renderings disagree, both are emitted at the same
    parameter (the zero-length frame switch the parser skips).
    """
    first = track.segments[0]
    parts = [f"({first.t0},{_segment_token(cod, first, first.a0)})"]
    prev_end = _segment_token(cod, first, first.a1)
    prev_t = first.t1
    for seg in track.segments[1:]:
        start_tok = _segment_token(cod, seg, seg.a0)
        parts.append(f"({prev_t},{prev_end})")
        if start_tok != prev_end:
            parts.append(f"({seg.t0},{start_tok})")
        prev_end = _segment_token(cod, seg, seg.a1)
        prev_t = seg.t1
    parts.append(f"({prev_t},{prev_end})")
    return " ".join(parts)


def serialize_map(m: PLMap) -> str:
    lines = [f"map {m.name} {m.domain.name} {m.codomain.name}"]
    for v in sorted(m.domain.vertices):
        lines.append(f"vimage {v} {format_point(m.vertex_image(v))}")
    for e in sorted(m.domain.edges, key=lambda e: e.id):
        lines.append(f"track {e.id} : {format_track(m.track(e.id), m.codomain)}")
    return "\n".join(lines) + "\n"


def serialize_map_file(m: PLMap) -> str:
    """Self-contained file: the graphs involved, then the map."""
    if m.codomain.name == m.domain.name and m.codomain != m.domain:
        raise ValueError("domain and codomain share a name but differ")
    blocks = [serialize_graph(m.domain)]
    if m.codomain.name != m.domain.name:
        blocks.append(serialize_graph(m.codomain))
    blocks.append(serialize_map(m))
    return "\n".join(blocks)
